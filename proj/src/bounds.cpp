#include "packing/bounds.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <set>
#include <stdexcept>
#include <utility>

#include "packing/fourier.hpp"
#include "packing/orthopoly.hpp"

namespace packing {

namespace {

std::vector<MultiPoly<Rational>> univariate_basis(int size) {
  std::vector<MultiPoly<Rational>> b;
  b.reserve(size > 0 ? static_cast<size_t>(size) : 0);
  for (int k = 0; k < size; ++k) b.push_back(MultiPoly<Rational>::monomial({k, 0, 0}, Rational(1)));
  return b;
}

// Chebyshev basis rescaled to the window [0, L]: entry k is T_k(2u/L - 1).
// Every basis polynomial is bounded by one on the window, so Gram matrices
// representing well-scaled functions stay well scaled themselves — the
// monomial basis loses that property rapidly as the degree grows.
std::vector<MultiPoly<Rational>> chebyshev_basis(int size, const Rational& window) {
  std::vector<MultiPoly<Rational>> out;
  if (size <= 0) return out;
  out.reserve(static_cast<size_t>(size));
  UniPoly<Rational> prev;
  prev.c = {Rational(1)};
  out.push_back(mp_from_uni(prev));
  if (size == 1) return out;
  UniPoly<Rational> arg;  // 2u/L - 1
  arg.c = {Rational(-1), Rational(2) / window};
  UniPoly<Rational> cur = arg;
  out.push_back(mp_from_uni(cur));
  for (int k = 2; k < size; ++k) {
    UniPoly<Rational> next =
        uni_add(uni_scale(uni_mul(arg, cur), Rational(2)), uni_scale(prev, Rational(-1)));
    prev = std::move(cur);
    cur = std::move(next);
    out.push_back(mp_from_uni(cur));
  }
  return out;
}

// Distinct dyadic nodes with cosine spacing on [0, window].  Values at any
// `count` distinct points pin a polynomial of degree below count; the cosine
// spacing keeps the change of basis from coefficients to point values well
// conditioned, and rounding to 16 fractional bits keeps each node exactly
// representable at every working precision.
std::vector<Rational> evaluation_nodes(int count, const Rational& window) {
  std::vector<Rational> nodes;
  nodes.reserve(count > 0 ? static_cast<size_t>(count) : 0);
  const long den = 1L << 16;
  for (int t = 0; t < count; ++t) {
    const double theta = count > 1 ? M_PI * static_cast<double>(t) / (count - 1) : 0.0;
    const double frac = 0.5 * (1.0 - std::cos(theta));
    nodes.push_back(Rational(std::lround(frac * static_cast<double>(den)), den) * window);
  }
  std::set<Rational> distinct(nodes.begin(), nodes.end());
  if (distinct.size() != nodes.size())
    throw std::logic_error("evaluation nodes collided; the grid resolution is too coarse");
  return nodes;
}

// Horner evaluation for entry polynomials of a one-variable family.
template <class K>
K eval_entry_at(const MultiPoly<K>& e, const K& x, Prec prec) {
  int deg = -1;
  for (const auto& [m, coeff] : e.terms) {
    if (m.b != 0 || m.c != 0)
      throw std::logic_error("evaluation rows require a univariate family");
    deg = std::max(deg, m.a);
  }
  K acc = k_zero<K>(prec);
  for (int j = deg; j >= 0; --j) {
    acc = acc * x;
    auto it = e.terms.find({j, 0, 0});
    if (it != e.terms.end()) acc += it->second;
  }
  return acc;
}

// Pin a one-variable identity G(X) + base == 0 by evaluating it at distinct
// nodes instead of matching monomial coefficients.  Coefficient rows become
// nearly parallel as the degree grows (a handful of large coordinates comes
// to dominate every normalized row), while evaluations at spread-out nodes
// keep the row directions separated.
template <class K>
void emit_evaluation_rows(SdpProblem<K>& prob, const GramExpr<K>& g, const Rational& window,
                          std::string_view tag, int degree_cap = -1) {
  int deg = 0;
  for (const auto& [key, poly] : g.terms)
    for (const auto& [m, coeff] : poly.terms) {
      if (m.b != 0 || m.c != 0)
        throw std::logic_error("evaluation rows require a univariate family");
      deg = std::max(deg, m.a);
    }
  for (const auto& [m, coeff] : g.base.terms) deg = std::max(deg, m.a + m.b + m.c);
  if (degree_cap >= 0) deg = degree_cap;

  for (const Rational& node : evaluation_nodes(deg + 1, window)) {
    const K x = k_from_rational<K>(node, prob.precision);
    ConstraintRow<K> row;
    row.rhs = -eval_entry_at(g.base, x, prob.precision);
    row.label = std::string(tag) + ":x=" + node.to_string();
    for (const auto& [key, poly] : g.terms) {
      const auto& [blk, p, q] = key;
      K val = eval_entry_at(poly, x, prob.precision);
      if (!k_is_exact_zero(val)) row.a.push_back({blk, p, q, std::move(val)});
    }
    if (row.a.empty() && k_is_exact_zero(row.rhs)) continue;
    prob.rows.push_back(std::move(row));
  }
}

// cu*u + cv*v + ct*t + c0
MultiPoly<Rational> affine(Rational cu, Rational cv, Rational ct, Rational c0) {
  MultiPoly<Rational> w;
  if (!cu.is_zero()) w.add_term({1, 0, 0}, cu);
  if (!cv.is_zero()) w.add_term({0, 1, 0}, cv);
  if (!ct.is_zero()) w.add_term({0, 0, 1}, ct);
  if (!c0.is_zero()) w.add_term({0, 0, 0}, c0);
  return w;
}

template <class K>
int add_block_if(SdpProblem<K>& prob, std::string name, int size) {
  if (size <= 0) return -1;
  prob.blocks.push_back({std::move(name), size});
  return static_cast<int>(prob.blocks.size()) - 1;
}

template <class K>
int add_sos(SdpProblem<K>& prob, GramExpr<K>& acc, std::string name,
            const std::vector<MultiPoly<Rational>>& basis, const MultiPoly<Rational>& weight,
            int sign) {
  int blk = add_block_if(prob, std::move(name), static_cast<int>(basis.size()));
  if (blk >= 0) gram_add_sos(acc, blk, basis, weight, sign, prob.precision);
  return blk;
}

// Symmetric multiplier split sigma_a + (u-v)^2 sigma_b: Gram bases drawn from
// the invariant ring need the antisymmetric square as a separate weight to
// span all symmetric SOS polynomials.
template <class K>
void add_split_sos(SdpProblem<K>& prob, GramExpr<K>& acc, const std::string& name, int g,
                   int t_weight, const MultiPoly<Rational>& weight, int sign) {
  MultiPoly<Rational> uv2;  // (u - v)^2
  uv2.add_term({2, 0, 0}, Rational(1));
  uv2.add_term({1, 1, 0}, Rational(-2));
  uv2.add_term({0, 2, 0}, Rational(1));
  add_sos(prob, acc, name, invariant_basis(g, t_weight), weight, sign);
  add_sos(prob, acc, name + "m", invariant_basis(g - 1, t_weight), mp_mul(weight, uv2), sign);
}

template <class K>
ConstraintRow<K> unit_mass_row(const GramExpr<K>& transformed, Prec prec) {
  ConstraintRow<K> norm;
  norm.a = gram_eval_at_origin(transformed);
  norm.rhs = k_one<K>(prec);
  norm.label = "normalize";
  return norm;
}

}  // namespace

// ---------------------------------------------------------------------------

template <class K>
K half_radius_ball_volume(int n, const Rational& r2, Prec prec) {
  if (n < 1) throw std::invalid_argument("ball volume: dimension must be >= 1");
  if (!(r2 > Rational(0))) throw std::invalid_argument("ball volume: r^2 must be positive");
  // vol(B^n_rho) = pi^m / m! * rho^n for n = 2m, and
  //                pi^m * 4^(m+1) (m+1)! / (2m+2)! * rho^n for n = 2m+1
  const int m = n / 2;
  Rational c = (n % 2 == 0) ? Rational(1) / Rational::factorial(m)
                            : Rational(4).pow(m + 1) * Rational::factorial(m + 1) /
                                  Rational::factorial(2 * m + 2);
  c = c * r2.pow(m) / Rational(2).pow(n);
  K out = k_from_rational<K>(c, prec);
  const K pi = k_pi<K>(prec);
  for (int i = 0; i < m; ++i) out = out * pi;
  if (n % 2 == 1) out = out * k_sqrt(k_from_rational<K>(r2, prec));
  return out;
}

template <class K>
UniPoly<K> gaussian_taylor_majorant(int degree, const Rational& r2, Prec prec) {
  if (degree < 0 || degree % 2 != 0)
    throw std::invalid_argument("majorant degree must be even and nonnegative");
  UniPoly<K> out;
  out.c.assign(degree + 1, k_zero<K>(prec));
  const K pi = k_pi<K>(prec);
  // running coefficient exp(-pi r2) (-pi)^k / k!, exact binomials for (u-r2)^k
  K factor = k_exp(-(pi * k_from_rational<K>(r2, prec)));
  UniPoly<Rational> shift;
  shift.c = {-r2, Rational(1)};
  UniPoly<Rational> pw;
  pw.c = {Rational(1)};
  for (int k = 0;; ++k) {
    for (size_t j = 0; j < pw.c.size(); ++j)
      if (!pw.c[j].is_zero()) out.c[j] += factor * k_from_rational<K>(pw.c[j], prec);
    if (k == degree) break;
    factor = factor * pi * k_from_rational<K>(Rational(-1, k + 1), prec);
    pw = uni_mul(pw, shift);
  }
  return out;
}

// ---------------------------------------------------------------------------

bool gram_realizable(const Rational& u, const Rational& v, const Rational& s) {
  return u >= Rational(0) && v >= Rational(0) && s * s <= u * v;
}

bool two_point_region_contains(const Rational& u, const Rational& r2) { return u >= r2; }

bool three_point_region_contains(const Rational& u, const Rational& v, const Rational& s,
                                 const Rational& r2, const Rational& R2) {
  if (!gram_realizable(u, v, s)) return false;
  if (u < r2 || v < r2 || u > R2 || v > R2) return false;
  return u + v - Rational(2) * s >= r2;
}

bool lattice_region_contains(const Rational& u, const Rational& v, const Rational& s,
                             const Rational& r2) {
  if (!gram_realizable(u, v, s)) return false;
  auto admissible = [&](const Rational& q) { return q.is_zero() || q >= r2; };
  if (!admissible(u) || !admissible(v)) return false;
  if (!admissible(u + v - Rational(2) * s) || !admissible(u + v + Rational(2) * s)) return false;
  return !(u.is_zero() && v.is_zero());
}

// ---------------------------------------------------------------------------

template <class K>
SdpProblem<K> build_two_point(const TwoPointConfig& cfg) {
  if (cfg.n < 1) throw std::invalid_argument("two-point bound: dimension must be >= 1");
  if (cfg.d2 < 1) throw std::invalid_argument("two-point bound: degree budget must be >= 1");
  if (!(cfg.r2 > Rational(0))) throw std::invalid_argument("two-point bound: r^2 must be positive");

  SdpProblem<K> prob;
  prob.precision = cfg.precision;
  const MultiPoly<Rational> one = MultiPoly<Rational>::constant(Rational(1));
  Rational window = Rational(4) * std::max(Rational(1), cfg.r2);
  if (const char* env = std::getenv("PACKING_WINDOW")) window = Rational(std::atol(env), 4);

  // radial candidate p2 = -s1 - (u - r^2) s2, nonpositive beyond the radius
  GramExpr<K> p2;
  add_sos(prob, p2, "s1", chebyshev_basis(cfg.d2, window), one, -1);
  add_sos(prob, p2, "s2", chebyshev_basis(cfg.d2, window), affine(1, 0, 0, -cfg.r2), -1);

  // transform side: F(p2) = s3 + u s4 keeps the transform nonnegative
  RadialFourierOp<K> op(cfg.n, cfg.precision);
  GramExpr<K> fp2 = gram_map(p2, [&](const MultiPoly<K>& e) {
    return mp_from_uni(op.transform(mp_restrict_axis_u(e)));
  });
  GramExpr<K> fourier = fp2;
  add_sos(prob, fourier, "s3", chebyshev_basis(cfg.d2 + 1, window), one, -1);
  add_sos(prob, fourier, "s4", chebyshev_basis(cfg.d2, window), affine(1, 0, 0, 0), -1);
  // Only s3 can reach degree 2 d2 (through its top diagonal entry); pin that
  // coefficient explicitly so the presolve sees the forced zero, and spend
  // the evaluation nodes on the remaining degrees.
  emit_coefficient_row(prob, fourier, {2 * cfg.d2, 0, 0}, "fourier");
  emit_evaluation_rows(prob, fourier, window, "fourier", 2 * cfg.d2 - 1);

  prob.rows.push_back(unit_mass_row(fp2, cfg.precision));
  prob.objective = gram_eval_at_origin(p2);
  return prob;
}

template <class K>
SdpProblem<K> build_truncated_three_point(const ThreePointConfig& cfg) {
  if (cfg.n < 2) throw std::invalid_argument("three-point bound: dimension must be >= 2");
  if (cfg.d2 < 1 || cfg.d3 < 1)
    throw std::invalid_argument("three-point bound: degree budgets must be >= 1");
  if (cfg.d_taylor < 1)
    throw std::invalid_argument("three-point bound: majorant half-degree must be >= 1");
  if (!(cfg.r2 > Rational(0)) || !(cfg.R2 > cfg.r2))
    throw std::invalid_argument("three-point bound: need 0 < r^2 < R^2");

  SdpProblem<K> prob;
  prob.precision = cfg.precision;
  const Prec prec = cfg.precision;
  const Rational& r2 = cfg.r2;
  const Rational& R2 = cfg.R2;
  const MultiPoly<Rational> one = MultiPoly<Rational>::constant(Rational(1));
  const int E = std::max(2 * cfg.d2, 2 * (cfg.d3 + cfg.d_taylor));

  // kernel part: one PSD block per harmonic degree, entries fixed by the
  // positive-kernel expansion in zonal polynomials
  GramExpr<K> p3;
  for (int ell = 0; ell < 2 * cfg.d3; ++ell) {
    const int size = cfg.d3 - ell / 2;
    const int blk = add_block_if(prob, "A" + std::to_string(ell), size);
    for (int p = 0; p < size; ++p)
      for (int q = 0; q <= p; ++q) {
        MultiPoly<Rational> e = gegenbauer_block(ell, p, q, cfg.n);
        mp_add_inplace(e, gegenbauer_block(ell, q, p, cfg.n));
        e = mp_scale(e, Rational(1, 2));
        gram_add_kernel_entry(p3, blk, p, q, e, prec);
      }
  }

  // pair-region certificate 0 = p3 + S1 + sum_i g_i S_i; every weight g_i is
  // nonnegative where both radii lie in [sqrt(r^2), sqrt(R^2)] and the
  // difference stays separated
  MultiPoly<Rational> uv_t2;  // uv - t^2
  uv_t2.add_term({1, 1, 0}, Rational(1));
  uv_t2.add_term({0, 0, 2}, Rational(-1));
  std::vector<MultiPoly<Rational>> region_weights;
  region_weights.push_back(mp_mul(affine(1, 0, 0, -r2), affine(0, 1, 0, -r2)));
  region_weights.push_back(affine(1, 1, 0, -Rational(2) * r2));
  region_weights.push_back(uv_t2);
  region_weights.push_back(affine(1, 1, -2, -r2));
  region_weights.push_back(mp_mul(affine(-1, 0, 0, R2), affine(0, -1, 0, R2)));
  region_weights.push_back(affine(-1, -1, 0, Rational(2) * R2));

  GramExpr<K> region = p3;
  add_split_sos(prob, region, "S1", cfg.d3, 1, one, +1);
  for (size_t i = 0; i < region_weights.size(); ++i)
    add_split_sos(prob, region, "S" + std::to_string(i + 2), cfg.d3 - 1, 1, region_weights[i], +1);
  emit_matching_rows(prob, region, true, 1, "region");

  // radial candidate, cut off at the truncation radius
  GramExpr<K> p2;
  add_sos(prob, p2, "s1", univariate_basis(cfg.d2), one, -1);
  add_sos(prob, p2, "s2", univariate_basis(cfg.d2), affine(1, 0, 0, -R2), -1);

  RadialFourierOp<K> op(cfg.n, prec);
  GramExpr<K> fp2 = gram_map(p2, [&](const MultiPoly<K>& e) {
    return mp_from_uni(op.transform(mp_restrict_axis_u(e)));
  });
  GramExpr<K> fourier = fp2;
  add_sos(prob, fourier, "s3", univariate_basis(cfg.d2 + 1), one, -1);
  add_sos(prob, fourier, "s4", univariate_basis(cfg.d2), affine(1, 0, 0, 0), -1);
  emit_matching_rows(prob, fourier, false, 1, "fourier");

  // diagonal family: pair-sum constraint along y = 0 and y = x, with the
  // kernel's Gaussian replaced by its polynomial majorant
  const UniPoly<K> T = gaussian_taylor_majorant<K>(2 * cfg.d_taylor, r2, prec);
  GramExpr<K> diag = p2;
  gram_add_inplace(diag, gram_map(p3, [](const MultiPoly<K>& e) {
                     return mp_from_uni(mp_restrict_axis_u(e));
                   }));
  gram_add_inplace(diag, gram_map(p3, [](const MultiPoly<K>& e) {
                     return mp_from_uni(mp_restrict_axis_v(e));
                   }));
  gram_add_inplace(diag, gram_map(p3, [&](const MultiPoly<K>& e) {
                     return mp_from_uni(uni_mul(mp_restrict_diagonal(e), T));
                   }));
  add_sos(prob, diag, "s5", univariate_basis(E / 2 + 1), one, +1);
  MultiPoly<Rational> diag_weight = affine(1, 0, 0, -r2);
  if (cfg.diag_weight == DiagonalWeight::segment)
    diag_weight = mp_mul(diag_weight, affine(-1, 0, 0, R2));
  add_sos(prob, diag, "s6", univariate_basis(E / 2), diag_weight, +1);
  emit_matching_rows(prob, diag, false, 1, "diagonal");

  prob.rows.push_back(unit_mass_row(fp2, prec));
  prob.objective = gram_eval_at_origin(p2);
  std::vector<RowEntry<K>> kernel_obj = gram_eval_at_origin(p3);
  prob.objective.insert(prob.objective.end(), kernel_obj.begin(), kernel_obj.end());
  return prob;
}

template <class K>
SdpProblem<K> build_lattice(const LatticeConfig& cfg) {
  if (cfg.n < 2) throw std::invalid_argument("lattice bound: dimension must be >= 2");
  if (cfg.d < 2) throw std::invalid_argument("lattice bound: grading budget must be >= 2");
  if (!(cfg.r2 > Rational(0))) throw std::invalid_argument("lattice bound: r^2 must be positive");

  SdpProblem<K> prob;
  prob.precision = cfg.precision;
  const Rational& r2 = cfg.r2;
  const MultiPoly<Rational> one = MultiPoly<Rational>::constant(Rational(1));

  // The candidate is minus a weighted SOS combination.  Away from the y = 0
  // and y = +-x strata every weight is nonnegative on the admissible pairs,
  // so the combination certifies nonpositivity there; the strata get their
  // own one-variable certificates below (the extended variant adds the
  // 2:1 rays as a third stratum).
  MultiPoly<Rational> g4;  // t (uv - t)
  g4.add_term({1, 1, 1}, Rational(1));
  g4.add_term({0, 0, 2}, Rational(-1));
  MultiPoly<Rational> g5 = mp_mul(affine(1, 1, 0, -r2), affine(1, 1, 0, -r2));
  g5.add_term({0, 0, 1}, Rational(-4));

  GramExpr<K> p;
  add_split_sos(prob, p, "S1", cfg.d, 2, one, -1);
  add_split_sos(prob, p, "S2", cfg.d - 1, 2, mp_mul(affine(1, 0, 0, -r2), affine(0, 1, 0, -r2)),
                -1);
  add_split_sos(prob, p, "S3", cfg.d - 1, 2, affine(1, 1, 0, -Rational(2) * r2), -1);
  add_split_sos(prob, p, "S4", cfg.d - 2, 2, g4, -1);
  add_split_sos(prob, p, "S5", cfg.d - 1, 2, g5, -1);
  if (cfg.extended) {
    // sharper pair constraints mixing the two radii with weights 1 and 4
    const MultiPoly<Rational> a14 = affine(1, 4, 0, -r2);
    const MultiPoly<Rational> a41 = affine(4, 1, 0, -r2);
    MultiPoly<Rational> g5e = mp_mul(a14, a14);
    mp_add_inplace(g5e, mp_mul(a41, a41));
    g5e.add_term({0, 0, 1}, Rational(-32));
    MultiPoly<Rational> q14 = mp_mul(a14, a14);
    q14.add_term({0, 0, 1}, Rational(-16));
    MultiPoly<Rational> q41 = mp_mul(a41, a41);
    q41.add_term({0, 0, 1}, Rational(-16));
    add_split_sos(prob, p, "E1", cfg.d - 1, 2, g5e, -1);
    add_split_sos(prob, p, "E2", cfg.d - 2, 2, mp_mul(q14, q41), -1);
  }

  // y = +-x stratum: p(u, u, u^2) = -(u - r^2) diag(u)
  GramExpr<K> diag = gram_map(p, [](const MultiPoly<K>& e) {
    return mp_from_uni(mp_restrict_diagonal_tsq(e));
  });
  add_sos(prob, diag, "diag", univariate_basis(cfg.d), affine(1, 0, 0, -r2), +1);
  emit_matching_rows(prob, diag, false, 2, "diagonal");

  // y = 0 stratum: p(u, 0, 0) = -(u - r^2) axis(u)
  GramExpr<K> axis = gram_map(p, [](const MultiPoly<K>& e) {
    return mp_from_uni(mp_restrict_axis_u(e));
  });
  add_sos(prob, axis, "axis", univariate_basis(cfg.d), affine(1, 0, 0, -r2), +1);
  emit_matching_rows(prob, axis, false, 2, "axis");

  if (cfg.extended) {
    // The sharper pair constraints leave the 2:1 rays outside the weighted
    // cone (the E2 weight is negative there), so v = 4u needs its own
    // certificate: p(u, 4u, 4u^2) = -(u - r^2) ratio(u).  The u <-> v mirror
    // collapses onto the same family.
    GramExpr<K> ratio = gram_map(p, [](const MultiPoly<K>& e) {
      return mp_from_uni(mp_restrict_double_tsq(e));
    });
    add_sos(prob, ratio, "ratio", univariate_basis(cfg.d), affine(1, 0, 0, -r2), +1);
    emit_matching_rows(prob, ratio, false, 2, "ratio");
  }

  // transform side: F(p) = s8 + (u+v) s9 + uv s10 + t(uv-t) s11 keeps the
  // transform nonnegative on the realizable cone
  LatticeFourierOp<K> op(cfg.n, cfg.precision);
  GramExpr<K> fp = gram_map(p, [&](const MultiPoly<K>& e) { return op.transform(e); });
  GramExpr<K> fourier = fp;
  add_split_sos(prob, fourier, "F1", cfg.d, 2, one, -1);
  add_split_sos(prob, fourier, "F2", cfg.d - 1, 2, affine(1, 1, 0, 0), -1);
  add_split_sos(prob, fourier, "F3", cfg.d - 1, 2,
                MultiPoly<Rational>::monomial({1, 1, 0}, Rational(1)), -1);
  add_split_sos(prob, fourier, "F4", cfg.d - 2, 2, g4, -1);
  emit_matching_rows(prob, fourier, true, 2, "fourier");

  prob.rows.push_back(unit_mass_row(fp, cfg.precision));
  prob.objective = gram_eval_at_origin(p);
  return prob;
}

// ---------------------------------------------------------------------------

std::string to_string(BoundKind k) {
  switch (k) {
    case BoundKind::two_point: return "two-point";
    case BoundKind::three_point: return "three-point";
    case BoundKind::lattice: return "lattice";
  }
  return "unknown";
}

template <class K>
K extract_density(BoundKind kind, const K& value, int n, const Rational& r2, Prec prec) {
  K vol = half_radius_ball_volume<K>(n, r2, prec);
  if (kind == BoundKind::lattice) return vol * k_sqrt(value);
  return vol * value;
}

namespace {

template <class Builder>
BoundResult run_driver(BoundKind kind, int n, const Rational& r2, Prec prec, Builder&& build,
                       SolveOptions opts) {
  const auto t0 = std::chrono::steady_clock::now();
  opts.precision = prec;
  SdpProblem<MpReal> prob = build();
  Solution sol = solve_sdp(prob, opts);
  BoundResult out;
  out.rows = static_cast<int>(prob.rows.size());
  out.blocks = prob.blocks;
  out.value = sol.primal_obj;
  out.density = (kind == BoundKind::lattice && out.value.sign() < 0)
                    ? MpReal::zero(prec)
                    : extract_density<MpReal>(kind, out.value, n, r2, prec);
  out.solution = std::move(sol);
  out.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

}  // namespace

BoundResult solve_two_point(const TwoPointConfig& cfg, const SolveOptions& opts) {
  return run_driver(
      BoundKind::two_point, cfg.n, cfg.r2, cfg.precision,
      [&] { return build_two_point<MpReal>(cfg); }, opts);
}

BoundResult solve_truncated_three_point(const ThreePointConfig& cfg, const SolveOptions& opts) {
  return run_driver(
      BoundKind::three_point, cfg.n, cfg.r2, cfg.precision,
      [&] { return build_truncated_three_point<MpReal>(cfg); }, opts);
}

BoundResult solve_lattice(const LatticeConfig& cfg, const SolveOptions& opts) {
  return run_driver(
      BoundKind::lattice, cfg.n, cfg.r2, cfg.precision,
      [&] { return build_lattice<MpReal>(cfg); }, opts);
}

// ---------------------------------------------------------------------------

double brent_minimize(const std::function<double(double)>& f, double lo, double hi, double xtol,
                      int max_evals) {
  if (!(lo < hi)) throw std::invalid_argument("scalar minimization: empty interval");
  if (max_evals < 1) throw std::invalid_argument("scalar minimization: need at least one probe");
  const double gold = 0.3819660112501051;
  double a = lo, b = hi;
  double x = a + gold * (b - a), w = x, v = x;
  double fx = f(x), fw = fx, fv = fx;
  double d = 0.0, e = 0.0;
  for (int evals = 1; evals < max_evals; ++evals) {
    const double m = 0.5 * (a + b);
    const double tol1 = std::max(xtol, 1e-12 * std::abs(x));
    const double tol2 = 2.0 * tol1;
    if (std::abs(x - m) <= tol2 - 0.5 * (b - a)) break;
    bool golden = true;
    if (std::abs(e) > tol1) {
      // parabola through (x,fx), (w,fw), (v,fv)
      double r = (x - w) * (fx - fv);
      double q = (x - v) * (fx - fw);
      double pnum = (x - v) * q - (x - w) * r;
      q = 2.0 * (q - r);
      if (q > 0.0) pnum = -pnum;
      q = std::abs(q);
      const double eprev = e;
      e = d;
      if (std::abs(pnum) < std::abs(0.5 * q * eprev) && pnum > q * (a - x) && pnum < q * (b - x)) {
        d = pnum / q;
        const double u = x + d;
        if (u - a < tol2 || b - u < tol2) d = (x < m) ? tol1 : -tol1;
        golden = false;
      }
    }
    if (golden) {
      e = (x < m) ? b - x : a - x;
      d = gold * e;
    }
    const double u = (std::abs(d) >= tol1) ? x + d : x + ((d > 0.0) ? tol1 : -tol1);
    const double fu = f(u);
    if (fu <= fx) {
      if (u < x) b = x;
      else a = x;
      v = w; fv = fw;
      w = x; fw = fx;
      x = u; fx = fu;
    } else {
      if (u < x) a = u;
      else b = u;
      if (fu <= fw || w == x) {
        v = w; fv = fw;
        w = u; fw = fu;
      } else if (fu <= fv || v == x || v == w) {
        v = u; fv = fu;
      }
    }
  }
  return x;
}

RadiusOptimization optimize_truncation_radius(const ThreePointConfig& base, double R_lo,
                                              double R_hi, double xtol, const SolveOptions& opts,
                                              int max_evals) {
  if (!(R_lo > 0.0) || !(R_lo < R_hi))
    throw std::invalid_argument("truncation radius search: need 0 < R_lo < R_hi");
  {
    Rational lo = Rational::from_double(R_lo);
    if (!(lo * lo > base.r2))
      throw std::invalid_argument(
          "truncation radius search: interval must sit above the separation radius");
  }

  RadiusOptimization out;
  double best_density = std::numeric_limits<double>::infinity();
  auto eval = [&](double R) -> double {
    Rational Rr = Rational::from_double(R);
    ThreePointConfig cfg = base;
    cfg.R2 = Rr * Rr;
    BoundResult res = solve_truncated_three_point(cfg, opts);
    const double dens =
        res.solution.ok() ? res.density.to_double() : std::numeric_limits<double>::infinity();
    out.probes.push_back({R, dens});
    if (dens < best_density) {
      best_density = dens;
      out.R2_best = cfg.R2;
      out.best = std::move(res);
    }
    return dens;
  };
  brent_minimize(eval, R_lo, R_hi, xtol, max_evals);
  if (!std::isfinite(best_density))
    throw std::runtime_error("truncation radius search: every probe failed to solve");
  return out;
}

// ---------------------------------------------------------------------------

template MpReal half_radius_ball_volume<MpReal>(int, const Rational&, Prec);
template Interval half_radius_ball_volume<Interval>(int, const Rational&, Prec);
template UniPoly<MpReal> gaussian_taylor_majorant<MpReal>(int, const Rational&, Prec);
template UniPoly<Interval> gaussian_taylor_majorant<Interval>(int, const Rational&, Prec);
template SdpProblem<MpReal> build_two_point<MpReal>(const TwoPointConfig&);
template SdpProblem<Interval> build_two_point<Interval>(const TwoPointConfig&);
template SdpProblem<MpReal> build_truncated_three_point<MpReal>(const ThreePointConfig&);
template SdpProblem<Interval> build_truncated_three_point<Interval>(const ThreePointConfig&);
template SdpProblem<MpReal> build_lattice<MpReal>(const LatticeConfig&);
template SdpProblem<Interval> build_lattice<Interval>(const LatticeConfig&);
template MpReal extract_density<MpReal>(BoundKind, const MpReal&, int, const Rational&, Prec);
template Interval extract_density<Interval>(BoundKind, const Interval&, int, const Rational&, Prec);

}  // namespace packing
