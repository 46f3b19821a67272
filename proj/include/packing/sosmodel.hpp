#pragma once

// Modeling layer: semidefinite problems whose unknowns are Gram matrices of
// sum-of-squares multipliers (plus positive-definite kernel blocks), with
// equality rows obtained by matching polynomial coefficients.
//
// Matrix-entry convention.  A constraint row stores sparse coefficients
// a_{pq} (p >= q) per block, and the row value on a symmetric matrix X is
//     <A, X> = sum_p a_pp X_pp + 2 sum_{p>q} a_pq X_pq.
// This keeps every stored coefficient free of sqrt(2) factors; the scaled
// svec coordinates (off-diagonal entries multiplied by sqrt(2), column-major
// lower triangle) are produced on demand where a Euclidean embedding is
// needed (rank checks, certification, export).

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "packing/poly.hpp"
#include "packing/scalar.hpp"

namespace packing {

inline int svec_size(int s) { return s * (s + 1) / 2; }

// column-major lower triangle: (0,0),(1,0),...,(s-1,0),(1,1),(2,1),...
inline int svec_index(int s, int p, int q) {
  if (p < q) std::swap(p, q);
  return q * s - q * (q - 1) / 2 + (p - q);
}

struct BlockInfo {
  std::string name;
  int size = 0;
};

template <class K>
struct RowEntry {
  int block = 0, p = 0, q = 0;  // p >= q
  K v;
};

template <class K>
struct ConstraintRow {
  std::vector<RowEntry<K>> a;
  K rhs;
  std::string label;
};

template <class K>
struct SdpProblem {
  std::vector<BlockInfo> blocks;
  std::vector<ConstraintRow<K>> rows;
  std::vector<RowEntry<K>> objective;  // sense: minimize <C, X>
  Prec precision = 256;

  int block_index(std::string_view name) const {
    for (size_t i = 0; i < blocks.size(); ++i)
      if (blocks[i].name == name) return static_cast<int>(i);
    throw std::out_of_range("no block named " + std::string(name));
  }

  std::vector<int> svec_offsets() const {
    std::vector<int> off(blocks.size() + 1, 0);
    for (size_t b = 0; b < blocks.size(); ++b) off[b + 1] = off[b] + svec_size(blocks[b].size);
    return off;
  }
};

// scaled svec coordinates of a row (or of the objective) as a dense vector
template <class K>
std::vector<K> entries_to_svec(const SdpProblem<K>& prob, const std::vector<RowEntry<K>>& entries,
                               const K& sqrt2) {
  std::vector<int> off = prob.svec_offsets();
  std::vector<K> out(off.back(), k_zero<K>(prob.precision));
  for (const auto& e : entries) {
    int idx = off[e.block] + svec_index(prob.blocks[e.block].size, e.p, e.q);
    out[idx] = (e.p == e.q) ? e.v : e.v * sqrt2;
  }
  return out;
}

// ---------------------------------------------------------------------------
// A GramExpr is a polynomial-valued linear form in the Gram entries:
//     G(X)(u,v,t) = sum_{(blk,p,q)} E_{blk,p,q}(u,v,t) * [X_blk]_{pq} + base,
// where the (p,q) term covers both symmetric positions.  Identities of the
// shape G(X) == 0 become one equality row per monomial.

template <class K>
struct GramExpr {
  std::map<std::tuple<int, int, int>, MultiPoly<K>> terms;  // key: block, p, q (p >= q)
  MultiPoly<K> base;

  void add_entry_poly(int block, int p, int q, const MultiPoly<K>& poly) {
    auto key = std::make_tuple(block, p, q);
    auto it = terms.find(key);
    if (it == terms.end())
      terms.emplace(key, poly);
    else
      mp_add_inplace(it->second, poly);
  }
};

template <class K>
void gram_add_inplace(GramExpr<K>& acc, const GramExpr<K>& g) {
  for (const auto& [key, poly] : g.terms) {
    auto it = acc.terms.find(key);
    if (it == acc.terms.end())
      acc.terms.emplace(key, poly);
    else
      mp_add_inplace(it->second, poly);
  }
  mp_add_inplace(acc.base, g.base);
}

// termwise transform by any linear operator on polynomials
template <class K, class F>
GramExpr<K> gram_map(const GramExpr<K>& g, F&& f) {
  GramExpr<K> out;
  for (const auto& [key, poly] : g.terms) {
    MultiPoly<K> img = f(poly);
    if (img.empty()) continue;
    out.terms.emplace(key, std::move(img));
  }
  out.base = f(g.base);
  return out;
}

// weight * b_p * b_q Gram expansion of an SOS multiplier with the given
// (exact) basis and weight, scaled by sign; entry polynomials are computed
// exactly and converted once.
template <class K>
void gram_add_sos(GramExpr<K>& acc, int block, const std::vector<MultiPoly<Rational>>& basis,
                  const MultiPoly<Rational>& weight, int sign, Prec prec) {
  const int s = static_cast<int>(basis.size());
  for (int p = 0; p < s; ++p)
    for (int q = 0; q <= p; ++q) {
      MultiPoly<Rational> e = mp_trim_zeros(mp_mul(mp_mul(basis[p], basis[q]), weight));
      if (e.empty()) continue;
      if (sign < 0) e = mp_neg(e);
      acc.add_entry_poly(block, p, q, mp_convert<K>(e, prec));
    }
}

// kernel block whose (p,q) entry polynomial is prescribed directly (already
// symmetrized across the two off-diagonal positions)
template <class K>
void gram_add_kernel_entry(GramExpr<K>& acc, int block, int p, int q, const MultiPoly<Rational>& sym_entry,
                           Prec prec) {
  MultiPoly<Rational> e = mp_trim_zeros(sym_entry);
  if (e.empty()) return;
  acc.add_entry_poly(block, p, q, mp_convert<K>(e, prec));
}

// Emit one equality row per monomial of G(X) + base == 0, i.e.
// sum coeff * X = -base_coeff.  For expressions symmetric under u <-> v only
// canonical monomials (a >= b) produce rows (the mirrored rows are
// identical).  Structurally empty rows are skipped.  Row order: ascending
// (grading, a, b, c); the ordering only fixes determinism.
template <class K>
void emit_matching_rows(SdpProblem<K>& prob, const GramExpr<K>& g, bool symmetric, int t_weight,
                        std::string_view tag) {
  std::map<std::pair<int, Mono>, ConstraintRow<K>> rowmap;  // key: (grading, mono)
  auto row_for = [&](const Mono& m) -> ConstraintRow<K>& {
    auto key = std::make_pair(m.grading(t_weight), m);
    auto it = rowmap.find(key);
    if (it == rowmap.end()) {
      ConstraintRow<K> fresh;
      fresh.rhs = k_zero<K>(prob.precision);
      fresh.label = std::string(tag) + ":u^" + std::to_string(m.a) + " v^" + std::to_string(m.b) +
                    " t^" + std::to_string(m.c);
      it = rowmap.emplace(key, std::move(fresh)).first;
    }
    return it->second;
  };

  for (const auto& [key, poly] : g.terms) {
    const auto& [blk, p, q] = key;
    for (const auto& [m, coeff] : poly.terms) {
      if (symmetric && !m.canonical()) continue;
      row_for(m).a.push_back({blk, p, q, coeff});
    }
  }
  for (const auto& [m, coeff] : g.base.terms) {
    if (symmetric && !m.canonical()) continue;
    row_for(m).rhs -= coeff;
  }
  for (auto& [key, row] : rowmap) {
    if (row.a.empty() && k_is_exact_zero(row.rhs)) continue;
    prob.rows.push_back(std::move(row));
  }
}

// One coefficient-matching row for a single monomial.  Families whose other
// rows are evaluations still need the coefficients above the evaluation grid
// pinned explicitly, so that the structural zeros they force stay visible to
// the solver's presolve.
template <class K>
void emit_coefficient_row(SdpProblem<K>& prob, const GramExpr<K>& g, const Mono& m,
                          std::string_view tag) {
  ConstraintRow<K> row;
  row.rhs = k_zero<K>(prob.precision);
  row.label = std::string(tag) + ":u^" + std::to_string(m.a) + " v^" + std::to_string(m.b) +
              " t^" + std::to_string(m.c);
  for (const auto& [key, poly] : g.terms) {
    const auto& [blk, p, q] = key;
    auto it = poly.terms.find(m);
    if (it != poly.terms.end() && !k_is_exact_zero(it->second))
      row.a.push_back({blk, p, q, it->second});
  }
  auto bit = g.base.terms.find(m);
  if (bit != g.base.terms.end()) row.rhs -= bit->second;
  if (row.a.empty() && k_is_exact_zero(row.rhs)) return;
  prob.rows.push_back(std::move(row));
}

// evaluation of all entry polynomials at the origin (constant coefficients);
// used for objectives and normalization rows
template <class K>
std::vector<RowEntry<K>> gram_eval_at_origin(const GramExpr<K>& g) {
  std::vector<RowEntry<K>> out;
  for (const auto& [key, poly] : g.terms) {
    auto it = poly.terms.find(Mono{0, 0, 0});
    if (it == poly.terms.end()) continue;
    const auto& [blk, p, q] = key;
    out.push_back({blk, p, q, it->second});
  }
  return out;
}

}  // namespace packing
