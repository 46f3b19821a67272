#pragma once

// Orthogonal polynomial families with exact rational coefficients.
//
//  * laguerre(k, alpha): generalized Laguerre L_k^(alpha), alpha rational
//    (half-integers appear for odd dimensions).
//  * gegenbauer(ell, n): the degree-ell symmetric Jacobi polynomial
//    P_ell^((n-3)/2,(n-3)/2), the positive-definite zonal kernel family on
//    the sphere S^(n-1), normalized so that gegenbauer(1, n) = ((n-1)/2) x.
//  * gegenbauer_block(ell, k, kp, n): the polynomial
//    u^(k+ell/2') v^(kp+ell/2') * P_ell(t / sqrt(uv)) expanded in (u, v, t),
//    i.e. u^k v^kp times the homogenization of P_ell; always polynomial
//    because P_ell has parity (-1)^ell.
//  * cosine_power_expansion(c, n): coefficients gamma_k writing s^(2c) as
//    sum_k gamma_k * gegenbauer(2k, n)(s), exact triangular solve.

#include <stdexcept>
#include <vector>

#include "packing/poly.hpp"
#include "packing/rational.hpp"

namespace packing {

inline UniPoly<Rational> laguerre(int k, const Rational& alpha) {
  UniPoly<Rational> prev{{Rational(1)}};
  if (k == 0) return prev;
  UniPoly<Rational> cur{{alpha + Rational(1), Rational(-1)}};
  for (int j = 1; j < k; ++j) {
    // (j+1) L_{j+1} = (2j+1+alpha - x) L_j - (j+alpha) L_{j-1}
    UniPoly<Rational> lin{{Rational(2 * j + 1) + alpha, Rational(-1)}};
    UniPoly<Rational> next = uni_mul(lin, cur);
    next = uni_add(next, uni_scale(prev, -(Rational(j) + alpha)));
    next = uni_scale(next, Rational(1, j + 1));
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

inline UniPoly<Rational> gegenbauer(int ell, int n) {
  if (n < 2) throw std::invalid_argument("gegenbauer: dimension must be >= 2");
  const Rational alpha(n - 3, 2);
  UniPoly<Rational> prev{{Rational(1)}};
  if (ell == 0) return prev;
  UniPoly<Rational> cur{{Rational(0), alpha + Rational(1)}};
  for (int j = 2; j <= ell; ++j) {
    // symmetric Jacobi three-term recurrence (alpha = beta):
    // 2j(j+2a)(2j+2a-2) P_j = (2j+2a-1)(2j+2a)(2j+2a-2) x P_{j-1}
    //                          - 2(j+a-1)^2 (2j+2a) P_{j-2}
    Rational a = alpha;
    Rational c0 = Rational(2 * j) * (Rational(j) + a * 2) * (Rational(2 * j - 2) + a * 2);
    Rational c1 = (Rational(2 * j - 1) + a * 2) * (Rational(2 * j) + a * 2) * (Rational(2 * j - 2) + a * 2);
    Rational c2 = Rational(2) * (Rational(j - 1) + a).pow(2) * (Rational(2 * j) + a * 2);
    UniPoly<Rational> xshift{{Rational(0), Rational(1)}};
    UniPoly<Rational> next = uni_scale(uni_mul(xshift, cur), c1);
    next = uni_add(next, uni_scale(prev, -c2));
    next = uni_scale(next, Rational(1) / c0);
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

inline MultiPoly<Rational> gegenbauer_block(int ell, int k, int kp, int n) {
  UniPoly<Rational> g = gegenbauer(ell, n);
  MultiPoly<Rational> out;
  for (int j = 0; j <= g.degree(); ++j) {
    if (g.c[j].is_zero()) continue;
    if ((ell - j) % 2 != 0) throw std::logic_error("gegenbauer parity violated");
    int h = (ell - j) / 2;
    out.add_term({k + h, kp + h, j}, g.c[j]);
  }
  return out;
}

// Even-part coefficients of gegenbauer(2k, n): row[j] = [s^(2j)] P_{2k}.
inline std::vector<Rational> gegenbauer_even_coeffs(int k, int n) {
  UniPoly<Rational> g = gegenbauer(2 * k, n);
  std::vector<Rational> row(k + 1, Rational(0));
  for (int j = 0; j <= g.degree(); ++j) {
    if (g.c[j].is_zero()) continue;
    if (j % 2 != 0) throw std::logic_error("gegenbauer parity violated");
    row[j / 2] = g.c[j];
  }
  return row;
}

inline std::vector<Rational> cosine_power_expansion(int c, int n) {
  // residual holds the even coefficients of s^(2c) minus matched terms
  std::vector<Rational> residual(c + 1, Rational(0));
  residual[c] = Rational(1);
  std::vector<Rational> gamma(c + 1, Rational(0));
  for (int k = c; k >= 0; --k) {
    std::vector<Rational> row = gegenbauer_even_coeffs(k, n);
    gamma[k] = residual[k] / row[k];
    for (int j = 0; j <= k; ++j) residual[j] -= gamma[k] * row[j];
  }
  for (const auto& r : residual)
    if (!r.is_zero()) throw std::logic_error("cosine power expansion failed to triangularize");
  return gamma;
}

}  // namespace packing
