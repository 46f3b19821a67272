#pragma once

// Independent numeric oracle for the radial transform, used only by tests.
//
// For g(x) = p(|x|^2) e^(-pi |x|^2) on R^n, the transform evaluated at a
// point of norm rho equals the Hankel-type integral
//
//   ghat(rho) = 2 pi rho^(1-n/2) \int_0^inf p(s^2) e^(-pi s^2) s^(n/2)
//                J_{n/2-1}(2 pi rho s) ds,
//
// and at rho = 0 it is the plain integral of g over R^n,
//
//   ghat(0) = surf(n) \int_0^inf p(s^2) e^(-pi s^2) s^(n-1) ds,
//   surf(n) = 2 pi^(n/2) / Gamma(n/2).
//
// Everything here is computed with tanh-sinh quadrature and a Bessel power
// series in MPFR, sharing no code with the transform implementation.

#include <functional>

#include "packing/mpreal.hpp"
#include "packing/poly.hpp"
#include "packing/rational.hpp"

namespace packing::oracle {

// J_nu(z) for real nu >= 0 via the ascending series, term-ratio iteration.
inline MpReal bessel_j(const Rational& nu, const MpReal& z, Prec p) {
  MpReal half_z = z * MpReal::from_double(0.5, p);
  MpReal nu_r = nu.to_mpreal(p);
  // t0 = (z/2)^nu / Gamma(nu+1)
  MpReal t0 = MpReal::zero(p);
  mpfr_pow(t0.raw(), half_z.raw(), nu_r.raw(), MPFR_RNDN);
  t0 /= gamma_fn(nu_r + MpReal::one(p));
  MpReal ratio_base = -(half_z * half_z);
  MpReal acc = t0, term = t0;
  MpReal maxterm = abs(t0);
  for (long m = 1; m < 4000; ++m) {
    MpReal denom = MpReal::from_long(m, p) * (MpReal::from_long(m, p) + nu_r);
    term = term * ratio_base / denom;
    acc += term;
    MpReal a = abs(term);
    if (a > maxterm) maxterm = a;
    if (a.log2_abs() < maxterm.log2_abs() - static_cast<double>(p) - 24) break;
  }
  return acc;
}

// tanh-sinh quadrature of f over [0, L]
inline MpReal tanh_sinh(const std::function<MpReal(const MpReal&)>& f, double L, Prec p) {
  MpReal halfL = MpReal::from_double(L / 2.0, p);
  MpReal halfpi = MpReal::pi(p) * MpReal::from_double(0.5, p);
  MpReal prev = MpReal::zero(p);
  MpReal result = MpReal::zero(p);
  for (int level = 6; level <= 11; ++level) {
    long steps_per_unit = 1L << level;
    MpReal h = MpReal::one(p) / MpReal::from_long(steps_per_unit, p);
    MpReal sum = MpReal::zero(p);
    for (long k = -7 * steps_per_unit; k <= 7 * steps_per_unit; ++k) {
      MpReal tau = MpReal::from_long(k, p) * h;
      MpReal sh = MpReal::zero(p), ch = MpReal::zero(p);
      mpfr_sinh_cosh(sh.raw(), ch.raw(), tau.raw(), MPFR_RNDN);
      MpReal inner = halfpi * sh;
      if (inner.to_double() > 700.0 || inner.to_double() < -700.0) continue;
      MpReal th = MpReal::zero(p), sech2 = MpReal::zero(p);
      mpfr_tanh(th.raw(), inner.raw(), MPFR_RNDN);
      mpfr_cosh(sech2.raw(), inner.raw(), MPFR_RNDN);
      sech2 = MpReal::one(p) / (sech2 * sech2);
      MpReal s = halfL * (MpReal::one(p) + th);
      MpReal w = halfL * halfpi * ch * sech2;
      if (s.is_zero()) continue;
      sum.add_mul(w, f(s));
    }
    result = sum * h;
    if (level > 6) {
      MpReal diff = abs(result - prev);
      if (diff.log2_abs() < -static_cast<double>(p) + 48) break;
    }
    prev = result;
  }
  return result;
}

inline MpReal surface_area(int n, Prec p) {
  MpReal halfn = MpReal::from_long(n, p) * MpReal::from_double(0.5, p);
  MpReal pipow = MpReal::zero(p);
  mpfr_pow(pipow.raw(), MpReal::pi(p).raw(), halfn.raw(), MPFR_RNDN);
  return MpReal::from_long(2, p) * pipow / gamma_fn(halfn);
}

// ghat(rho) for g = p(|.|^2) e^(-pi |.|^2) on R^n, by quadrature
inline MpReal radial_transform_by_quadrature(const UniPoly<MpReal>& poly, int n, const MpReal& rho, Prec p) {
  MpReal pi = MpReal::pi(p);
  Rational nu(n - 2, 2);
  if (rho.is_zero()) {
    auto f = [&](const MpReal& s) {
      MpReal s2 = s * s;
      return uni_eval(poly, s2) * exp(-(pi * s2)) * pow_ui(s, static_cast<unsigned long>(n - 1));
    };
    return surface_area(n, p) * tanh_sinh(f, 8.0, p);
  }
  auto f = [&](const MpReal& s) {
    MpReal s2 = s * s;
    MpReal spow = MpReal::zero(p);
    MpReal expo = MpReal::from_long(n, p) * MpReal::from_double(0.5, p);
    mpfr_pow(spow.raw(), s.raw(), expo.raw(), MPFR_RNDN);
    return uni_eval(poly, s2) * exp(-(pi * s2)) * spow * bessel_j(nu, MpReal::from_long(2, p) * pi * rho * s, p);
  };
  MpReal rpow = MpReal::zero(p);
  MpReal expo = MpReal::one(p) - MpReal::from_long(n, p) * MpReal::from_double(0.5, p);
  mpfr_pow(rpow.raw(), rho.raw(), expo.raw(), MPFR_RNDN);
  return MpReal::from_long(2, p) * pi * rpow * tanh_sinh(f, 8.0, p);
}

}  // namespace packing::oracle
