#pragma once

// Polynomial containers shared by the whole pipeline.
//
// UniPoly<T>   dense univariate polynomial, c[j] multiplies u^j.
// MultiPoly<T> sparse polynomial in three variables u, v, t.
//
// Both are used with exact Rational coefficients during symbolic work and
// with MpReal / Interval coefficients once transcendental constants enter.
// For inexact coefficient types the term support is purely structural: a
// stored coefficient is never dropped just because its value rounds to zero,
// so the same construction code produces identical supports for the floating
// and the enclosure instantiation.

#include <algorithm>
#include <compare>
#include <map>
#include <tuple>
#include <vector>

#include "packing/scalar.hpp"

namespace packing {

template <class T>
struct UniPoly {
  std::vector<T> c;

  bool empty() const { return c.empty(); }
  int degree() const { return static_cast<int>(c.size()) - 1; }
};

template <class T>
UniPoly<T> uni_add(const UniPoly<T>& a, const UniPoly<T>& b) {
  UniPoly<T> r = a;
  if (b.c.size() > r.c.size()) r.c.resize(b.c.size(), T{});
  for (size_t i = 0; i < b.c.size(); ++i) r.c[i] += b.c[i];
  return r;
}

template <class T>
UniPoly<T> uni_mul(const UniPoly<T>& a, const UniPoly<T>& b) {
  if (a.empty() || b.empty()) return {};
  UniPoly<T> r;
  r.c.assign(a.c.size() + b.c.size() - 1, T{});
  for (size_t i = 0; i < a.c.size(); ++i)
    for (size_t j = 0; j < b.c.size(); ++j) r.c[i + j] += a.c[i] * b.c[j];
  return r;
}

template <class T>
UniPoly<T> uni_scale(const UniPoly<T>& a, const T& s) {
  UniPoly<T> r = a;
  for (auto& x : r.c) x = x * s;
  return r;
}

template <class T>
T uni_eval(const UniPoly<T>& a, const T& x) {
  if (a.empty()) return T{};
  T acc = a.c.back();
  for (size_t i = a.c.size() - 1; i-- > 0;) acc = acc * x + a.c[i];
  return acc;
}

// drop trailing exact zeros (meant for exact coefficient types)
inline UniPoly<Rational> uni_trim(UniPoly<Rational> a) {
  while (!a.c.empty() && a.c.back().is_zero()) a.c.pop_back();
  return a;
}

template <class K>
UniPoly<K> uni_convert(const UniPoly<Rational>& a, Prec p) {
  UniPoly<K> r;
  r.c.reserve(a.c.size());
  for (const auto& q : a.c) r.c.push_back(k_from_rational<K>(q, p));
  return r;
}

// ---------------------------------------------------------------------------

struct Mono {
  int a = 0, b = 0, c = 0;  // exponents of u, v, t
  auto operator<=>(const Mono&) const = default;

  int degree() const { return a + b + c; }
  int grading(int t_weight) const { return a + b + t_weight * c; }
  Mono mirrored() const { return {b, a, c}; }
  bool canonical() const { return a >= b; }
};

inline Mono operator+(const Mono& x, const Mono& y) { return {x.a + y.a, x.b + y.b, x.c + y.c}; }

template <class T>
struct MultiPoly {
  std::map<Mono, T> terms;

  bool empty() const { return terms.empty(); }

  static MultiPoly monomial(Mono m, T v) {
    MultiPoly r;
    r.terms.emplace(m, std::move(v));
    return r;
  }
  static MultiPoly constant(T v) { return monomial({0, 0, 0}, std::move(v)); }

  void add_term(const Mono& m, const T& v) {
    auto [it, fresh] = terms.emplace(m, v);
    if (!fresh) it->second += v;
  }

  int degree() const {
    int d = -1;
    for (const auto& [m, v] : terms) d = std::max(d, m.degree());
    return d;
  }
  int grading(int t_weight) const {
    int d = -1;
    for (const auto& [m, v] : terms) d = std::max(d, m.grading(t_weight));
    return d;
  }
};

template <class T>
void mp_add_inplace(MultiPoly<T>& acc, const MultiPoly<T>& b) {
  for (const auto& [m, v] : b.terms) acc.add_term(m, v);
}

template <class T>
void mp_add_scaled_inplace(MultiPoly<T>& acc, const MultiPoly<T>& b, const T& s) {
  for (const auto& [m, v] : b.terms) acc.add_term(m, v * s);
}

template <class T>
MultiPoly<T> mp_mul(const MultiPoly<T>& a, const MultiPoly<T>& b) {
  MultiPoly<T> r;
  for (const auto& [ma, va] : a.terms)
    for (const auto& [mb, vb] : b.terms) r.add_term(ma + mb, va * vb);
  return r;
}

template <class T>
MultiPoly<T> mp_scale(const MultiPoly<T>& a, const T& s) {
  MultiPoly<T> r = a;
  for (auto& [m, v] : r.terms) v = v * s;
  return r;
}

template <class T>
MultiPoly<T> mp_neg(const MultiPoly<T>& a) {
  MultiPoly<T> r = a;
  for (auto& [m, v] : r.terms) v = -v;
  return r;
}

// drop exact-zero terms left behind by cancellations in products/sums
inline MultiPoly<Rational> mp_trim_zeros(MultiPoly<Rational> a) {
  for (auto it = a.terms.begin(); it != a.terms.end();)
    it = it->second.is_zero() ? a.terms.erase(it) : std::next(it);
  return a;
}

template <class K>
MultiPoly<K> mp_convert(const MultiPoly<Rational>& a, Prec p) {
  MultiPoly<K> r;
  for (const auto& [m, v] : a.terms) r.terms.emplace(m, k_from_rational<K>(v, p));
  return r;
}

template <class T>
MultiPoly<T> mp_from_uni(const UniPoly<T>& a) {
  MultiPoly<T> r;
  for (size_t j = 0; j < a.c.size(); ++j) r.terms.emplace(Mono{static_cast<int>(j), 0, 0}, a.c[j]);
  return r;
}

template <class T>
T mp_eval(const MultiPoly<T>& a, const T& u, const T& v, const T& t) {
  T acc{};
  for (const auto& [m, x] : a.terms) {
    T term = x;
    for (int i = 0; i < m.a; ++i) term = term * u;
    for (int i = 0; i < m.b; ++i) term = term * v;
    for (int i = 0; i < m.c; ++i) term = term * t;
    acc += term;
  }
  return acc;
}

// substitution (u,v,t) -> (u,u,u): exponent a+b+c
template <class T>
UniPoly<T> mp_restrict_diagonal(const MultiPoly<T>& a) {
  UniPoly<T> r;
  for (const auto& [m, v] : a.terms) {
    size_t d = static_cast<size_t>(m.degree());
    if (r.c.size() <= d) r.c.resize(d + 1, T{});
    r.c[d] += v;
  }
  return r;
}

// substitution (u,v,t) -> (u,u,u^2): exponent a+b+2c
template <class T>
UniPoly<T> mp_restrict_diagonal_tsq(const MultiPoly<T>& a) {
  UniPoly<T> r;
  for (const auto& [m, v] : a.terms) {
    size_t d = static_cast<size_t>(m.a + m.b + 2 * m.c);
    if (r.c.size() <= d) r.c.resize(d + 1, T{});
    r.c[d] += v;
  }
  return r;
}

// substitution (u,v,t) -> (u,4u,4u^2), the v = 4u ray with t = uv:
// exponent a+b+2c, coefficient scaled by 4^(b+c)
template <class T>
UniPoly<T> mp_restrict_double_tsq(const MultiPoly<T>& a) {
  UniPoly<T> r;
  for (const auto& [m, v] : a.terms) {
    size_t d = static_cast<size_t>(m.a + m.b + 2 * m.c);
    if (r.c.size() <= d) r.c.resize(d + 1, T{});
    T scaled = v;
    for (int i = 0; i < 2 * (m.b + m.c); ++i) scaled += scaled;
    r.c[d] += scaled;
  }
  return r;
}

// substitution (u,v,t) -> (u,0,0)
template <class T>
UniPoly<T> mp_restrict_axis_u(const MultiPoly<T>& a) {
  UniPoly<T> r;
  for (const auto& [m, v] : a.terms) {
    if (m.b != 0 || m.c != 0) continue;
    size_t d = static_cast<size_t>(m.a);
    if (r.c.size() <= d) r.c.resize(d + 1, T{});
    r.c[d] += v;
  }
  return r;
}

// substitution (u,v,t) -> (0,u,0)
template <class T>
UniPoly<T> mp_restrict_axis_v(const MultiPoly<T>& a) {
  UniPoly<T> r;
  for (const auto& [m, v] : a.terms) {
    if (m.a != 0 || m.c != 0) continue;
    size_t d = static_cast<size_t>(m.b);
    if (r.c.size() <= d) r.c.resize(d + 1, T{});
    r.c[d] += v;
  }
  return r;
}

template <class T>
MultiPoly<T> mp_swap_uv(const MultiPoly<T>& a) {
  MultiPoly<T> r;
  for (const auto& [m, v] : a.terms) r.terms.emplace(m.mirrored(), v);
  return r;
}

// ---------------------------------------------------------------------------
// Basis of the symmetric invariant ring R[u+v, uv, t] truncated by grading.
// Elements are (u+v)^a (uv)^b t^c with a + 2b + t_weight*c <= g, expanded
// into monomials, ordered by (grading, a, b, c) ascending so that index 0 is
// the constant 1.

inline std::vector<MultiPoly<Rational>> invariant_basis(int g, int t_weight) {
  std::vector<std::tuple<int, int, int, int>> gens;  // (grading, a, b, c)
  for (int a = 0; a <= g; ++a)
    for (int b = 0; 2 * b + a <= g; ++b)
      for (int c = 0; a + 2 * b + t_weight * c <= g; ++c)
        gens.emplace_back(a + 2 * b + t_weight * c, a, b, c);
  std::sort(gens.begin(), gens.end());

  MultiPoly<Rational> uplusv;
  uplusv.add_term({1, 0, 0}, Rational(1));
  uplusv.add_term({0, 1, 0}, Rational(1));
  MultiPoly<Rational> uv = MultiPoly<Rational>::monomial({1, 1, 0}, Rational(1));

  std::vector<MultiPoly<Rational>> out;
  out.reserve(gens.size());
  for (const auto& [gr, a, b, c] : gens) {
    MultiPoly<Rational> e = MultiPoly<Rational>::constant(Rational(1));
    for (int i = 0; i < a; ++i) e = mp_mul(e, uplusv);
    for (int i = 0; i < b; ++i) e = mp_mul(e, uv);
    if (c) e = mp_mul(e, MultiPoly<Rational>::monomial({0, 0, c}, Rational(1)));
    out.push_back(std::move(e));
  }
  return out;
}

inline int invariant_basis_size(int g, int t_weight) {
  int cnt = 0;
  for (int a = 0; a <= g; ++a)
    for (int b = 0; 2 * b + a <= g; ++b)
      for (int c = 0; a + 2 * b + t_weight * c <= g; ++c) ++cnt;
  return cnt;
}

}  // namespace packing
