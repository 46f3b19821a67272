#pragma once

// Exact rational arithmetic (RAII wrapper over GMP mpq_t), kept canonical.
// Used wherever a quantity is an exact rational: orthogonal-polynomial
// coefficients, basis polynomials, radii squared, combinatorial factors.

#include <gmp.h>
#include <mpfr.h>

#include <cstdlib>
#include <string>
#include <utility>

#include "packing/mpreal.hpp"

namespace packing {

class Rational {
 public:
  Rational() { mpq_init(v_); }

  Rational(long num, long den = 1) {
    mpq_init(v_);
    mpq_set_si(v_, num, 1);
    if (den != 1) {
      mpq_t d;
      mpq_init(d);
      mpq_set_si(d, den, 1);
      mpq_div(v_, v_, d);
      mpq_clear(d);
    }
  }

  Rational(const Rational& o) { mpq_init(v_); mpq_set(v_, o.v_); }
  Rational(Rational&& o) noexcept { mpq_init(v_); mpq_swap(v_, o.v_); }
  Rational& operator=(const Rational& o) {
    if (this != &o) mpq_set(v_, o.v_);
    return *this;
  }
  Rational& operator=(Rational&& o) noexcept {
    if (this != &o) mpq_swap(v_, o.v_);
    return *this;
  }
  ~Rational() { mpq_clear(v_); }

  // Exact value of an IEEE double (every finite double is a dyadic rational).
  static Rational from_double(double d) {
    Rational r;
    mpq_set_d(r.v_, d);
    return r;
  }

  static Rational factorial(unsigned long k) {
    Rational r;
    mpz_fac_ui(mpq_numref(r.v_), k);
    return r;
  }

  static Rational binomial(long n, unsigned long k) {
    // generalized: n may be negative; C(n,k) = n(n-1)...(n-k+1)/k!
    Rational r(1);
    for (unsigned long i = 0; i < k; ++i) r *= Rational(n - static_cast<long>(i));
    return r / factorial(k);
  }

  friend Rational operator+(const Rational& a, const Rational& b) { Rational r; mpq_add(r.v_, a.v_, b.v_); return r; }
  friend Rational operator-(const Rational& a, const Rational& b) { Rational r; mpq_sub(r.v_, a.v_, b.v_); return r; }
  friend Rational operator*(const Rational& a, const Rational& b) { Rational r; mpq_mul(r.v_, a.v_, b.v_); return r; }
  friend Rational operator/(const Rational& a, const Rational& b) { Rational r; mpq_div(r.v_, a.v_, b.v_); return r; }
  Rational operator-() const { Rational r; mpq_neg(r.v_, v_); return r; }

  Rational& operator+=(const Rational& o) { mpq_add(v_, v_, o.v_); return *this; }
  Rational& operator-=(const Rational& o) { mpq_sub(v_, v_, o.v_); return *this; }
  Rational& operator*=(const Rational& o) { mpq_mul(v_, v_, o.v_); return *this; }
  Rational& operator/=(const Rational& o) { mpq_div(v_, v_, o.v_); return *this; }

  Rational pow(unsigned long e) const {
    Rational r(1), base(*this);
    while (e) {
      if (e & 1) r *= base;
      base *= base;
      e >>= 1;
    }
    return r;
  }

  int sign() const { return mpq_sgn(v_); }
  bool is_zero() const { return mpq_sgn(v_) == 0; }

  friend bool operator==(const Rational& a, const Rational& b) { return mpq_equal(a.v_, b.v_) != 0; }
  friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
  friend bool operator<(const Rational& a, const Rational& b) { return mpq_cmp(a.v_, b.v_) < 0; }
  friend bool operator<=(const Rational& a, const Rational& b) { return mpq_cmp(a.v_, b.v_) <= 0; }
  friend bool operator>(const Rational& a, const Rational& b) { return mpq_cmp(a.v_, b.v_) > 0; }
  friend bool operator>=(const Rational& a, const Rational& b) { return mpq_cmp(a.v_, b.v_) >= 0; }

  double to_double() const { return mpq_get_d(v_); }

  MpReal to_mpreal(Prec p) const {
    MpReal r = MpReal::zero(p);
    mpfr_set_q(r.raw(), v_, MPFR_RNDN);
    return r;
  }

  std::string to_string() const {
    char* s = mpq_get_str(nullptr, 10, v_);
    std::string out(s);
    std::free(s);
    return out;
  }

  mpq_srcptr raw() const { return v_; }

 private:
  mpq_t v_;
};

}  // namespace packing
