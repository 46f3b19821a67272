#pragma once

// Fourier transforms of Gaussian-weighted polynomials.
//
// Radial: for radial functions p(|x|^2) e^(-pi |x|^2) on R^n the transform is
// again of this shape, and on monomials
//     u^k  |-->  (k!/pi^k) L_k^(n/2-1)(pi u).
// Every image coefficient is therefore an exact rational times a nonpositive
// power of pi.  The operator keeps that exact structure (a series in 1/pi
// with rational coefficients) and only converts to the requested scalar kind
// at evaluation time, at a working precision padded with enough guard bits to
// absorb the large cancellations between the rational coefficients.  The
// guard is derived from the actual coefficient magnitudes, so applying the
// operator twice reproduces the input to far better than the declared
// precision.
//
// Two-variable: functions q(|x|^2, |y|^2, <x,y>^2) e^(-pi(|x|^2+|y|^2)) on
// pairs of vectors, polynomial in t = <x,y>^2 (odd powers of the inner
// product are not representable in this basis).  Writing t^C =
// (|x||y|)^(2C) cos^(2C) and expanding the cosine power into the zonal
// family P_{2k}, each piece
//     |x|^(2a+2k) |y|^(2b+2k) P_{2k}(cos) e^(-pi(|x|^2+|y|^2))
// transforms to
//     (a! b!/pi^(a+b)) L_a^(2k+n/2-1)(pi u) L_b^(2k+n/2-1)(pi v)
//       |x|^(2k)|y|^(2k) P_{2k}(cos) e^(-pi(u+v)),
// which converts back into (u, v, t) monomials.  Again all image
// coefficients are rationals times powers of 1/pi, computed exactly and
// evaluated once per call.

#include <cmath>
#include <map>
#include <stdexcept>
#include <vector>

#include "packing/orthopoly.hpp"
#include "packing/poly.hpp"
#include "packing/scalar.hpp"

namespace packing {

namespace detail {

inline long guard_bits_from_magnitude(double log2_mag) {
  double g = 2.0 * std::max(0.0, log2_mag) + 40.0;
  return static_cast<long>(std::ceil(g));
}

}  // namespace detail

template <class K>
class RadialFourierOp {
 public:
  RadialFourierOp(int n, Prec prec) : n_(n), prec_(prec) {
    if (n < 1) throw std::invalid_argument("radial transform: dimension must be >= 1");
  }

  int dimension() const { return n_; }
  Prec declared_precision() const { return prec_; }
  Prec working_precision() const { return prec_work_; }

  // exact rational part of the image: F(u^k) = sum_j coeff(j,k) (1/pi)^(k-j) u^j
  Rational coefficient_rational(int j, int k) const {
    const_cast<RadialFourierOp*>(this)->ensure(k);
    if (j > k) return Rational(0);
    return Rational::factorial(k) * lag_[k].c[j];
  }

  UniPoly<K> transform(const UniPoly<K>& p) const {
    auto* self = const_cast<RadialFourierOp*>(this);
    int deg = p.degree();
    if (deg < 0) return {};
    self->ensure(deg);
    UniPoly<K> out;
    out.c.assign(deg + 1, k_zero<K>(prec_work_));
    for (int k = 0; k <= deg; ++k)
      for (int j = 0; j <= k; ++j) out.c[j] += p.c[k] * table_[k][j];
    return out;
  }

 private:
  void ensure(int cap) {
    if (cap <= cap_) return;
    for (int k = static_cast<int>(lag_.size()); k <= cap; ++k)
      lag_.push_back(laguerre(k, Rational(n_ - 2, 2)));

    // max over rows j of sum_k |q_jk| (1/pi)^(k-j), evaluated in doubles
    double worst = 0.0;
    std::vector<double> row(cap + 1, 0.0);
    for (int k = 0; k <= cap; ++k) {
      double kfac = std::abs(Rational::factorial(k).to_double());
      for (int j = 0; j <= k; ++j)
        row[j] += kfac * std::abs(lag_[k].c[j].to_double()) * std::pow(1.0 / M_PI, k - j);
    }
    for (double r : row) worst = std::max(worst, r);
    Prec pw = prec_ + detail::guard_bits_from_magnitude(std::log2(std::max(1.0, worst)));
    prec_work_ = std::max(prec_work_, pw);

    // materialize K-valued coefficients q_jk * (1/pi)^(k-j)
    K invpi = k_one<K>(prec_work_) / k_pi<K>(prec_work_);
    std::vector<K> xpow{k_one<K>(prec_work_)};
    for (int e = 1; e <= cap; ++e) xpow.push_back(xpow.back() * invpi);
    table_.assign(cap + 1, {});
    for (int k = 0; k <= cap; ++k) {
      table_[k].reserve(k + 1);
      Rational kfac = Rational::factorial(k);
      for (int j = 0; j <= k; ++j)
        table_[k].push_back(k_from_rational<K>(kfac * lag_[k].c[j], prec_work_) * xpow[k - j]);
    }
    cap_ = cap;
  }

  int n_;
  Prec prec_;
  Prec prec_work_ = 0;
  int cap_ = -1;
  std::vector<UniPoly<Rational>> lag_;
  std::vector<std::vector<K>> table_;  // table_[k][j]
};

template <class K>
class LatticeFourierOp {
 public:
  LatticeFourierOp(int n, Prec prec) : n_(n), prec_(prec) {
    if (n < 2) throw std::invalid_argument("two-variable transform: dimension must be >= 2");
  }

  int dimension() const { return n_; }
  Prec working_precision() const { return prec_work_; }

  struct ImageTerm {
    Mono mono;
    int e;  // power of 1/pi
    Rational q;
  };

  const std::vector<ImageTerm>& image_terms(const Mono& m) const {
    return const_cast<LatticeFourierOp*>(this)->image(m);
  }

  MultiPoly<K> transform(const MultiPoly<K>& p) const {
    auto* self = const_cast<LatticeFourierOp*>(this);
    // first pass: make sure all images exist and the guard covers them
    double worst = 1.0;
    int max_e = 0;
    for (const auto& [m, coeff] : p.terms) {
      double s = 0.0;
      for (const auto& term : self->image(m)) {
        s += std::abs(term.q.to_double()) * std::pow(1.0 / M_PI, term.e);
        max_e = std::max(max_e, term.e);
      }
      worst = std::max(worst, s);
    }
    Prec pw = prec_ + detail::guard_bits_from_magnitude(std::log2(worst));
    self->prec_work_ = std::max(prec_work_, pw);

    K invpi = k_one<K>(prec_work_) / k_pi<K>(prec_work_);
    std::vector<K> xpow{k_one<K>(prec_work_)};
    for (int e = 1; e <= max_e; ++e) xpow.push_back(xpow.back() * invpi);

    MultiPoly<K> out;
    for (const auto& [m, coeff] : p.terms)
      for (const auto& term : self->image(m))
        out.add_term(term.mono, coeff * k_from_rational<K>(term.q, prec_work_) * xpow[term.e]);
    return out;
  }

 private:
  std::vector<ImageTerm>& image(const Mono& m) {
    auto it = cache_.find(m);
    if (it != cache_.end()) return it->second;

    const int A = m.a, B = m.b, C = m.c;
    std::map<std::pair<Mono, int>, Rational> acc;
    if (static_cast<int>(gamma_.size()) <= C)
      for (int c = static_cast<int>(gamma_.size()); c <= C; ++c)
        gamma_.push_back(cosine_power_expansion(c, n_));
    for (int k = 0; k <= C; ++k) {
      const Rational& gam = gamma_[C][k];
      if (gam.is_zero()) continue;
      int a = A + C - k, b = B + C - k;
      Rational alpha = Rational(2 * k) + Rational(n_ - 2, 2);
      UniPoly<Rational> La = laguerre(a, alpha);
      UniPoly<Rational> Lb = laguerre(b, alpha);
      std::vector<Rational> jac = gegenbauer_even_coeffs(k, n_);
      Rational fac = gam * Rational::factorial(a) * Rational::factorial(b);
      for (int ja = 0; ja <= a; ++ja) {
        if (La.c[ja].is_zero()) continue;
        for (int jb = 0; jb <= b; ++jb) {
          if (Lb.c[jb].is_zero()) continue;
          Rational q1 = fac * La.c[ja] * Lb.c[jb];
          int e = (a - ja) + (b - jb);
          for (int j = 0; j <= k; ++j) {
            if (jac[j].is_zero()) continue;
            Mono out{ja + k - j, jb + k - j, j};
            auto [pos, fresh] = acc.emplace(std::make_pair(out, e), q1 * jac[j]);
            if (!fresh) pos->second += q1 * jac[j];
          }
        }
      }
    }
    std::vector<ImageTerm> flat;
    flat.reserve(acc.size());
    for (auto& [key, q] : acc)
      if (!q.is_zero()) flat.push_back({key.first, key.second, std::move(q)});
    return cache_.emplace(m, std::move(flat)).first->second;
  }

  int n_;
  Prec prec_;
  Prec prec_work_ = 0;
  std::vector<std::vector<Rational>> gamma_;
  std::map<Mono, std::vector<ImageTerm>> cache_;
};

}  // namespace packing
