#pragma once

// Interval arithmetic over MPFR with per-call directed rounding.
// An Interval is a pair [lo, hi] of mpfr values at a common precision.
// Every operation rounds the lower endpoint down and the upper endpoint up,
// so the exact real result of the corresponding real operation is always
// enclosed.  No global rounding mode is ever mutated.

#include <mpfr.h>

#include <algorithm>
#include <stdexcept>
#include <string>
#include <utility>

#include "packing/mpreal.hpp"
#include "packing/rational.hpp"

namespace packing {

class Interval {
 public:
  Interval() { init(64); set_zero(); }

  explicit Interval(Prec p) { init(p); set_zero(); }

  Interval(const Interval& o) {
    init(o.prec());
    mpfr_set(lo_, o.lo_, MPFR_RNDD);
    mpfr_set(hi_, o.hi_, MPFR_RNDU);
  }
  Interval(Interval&& o) noexcept {
    init(64);
    mpfr_swap(lo_, o.lo_);
    mpfr_swap(hi_, o.hi_);
  }
  Interval& operator=(const Interval& o) {
    if (this != &o) {
      mpfr_set_prec(lo_, o.prec());
      mpfr_set_prec(hi_, o.prec());
      mpfr_set(lo_, o.lo_, MPFR_RNDD);
      mpfr_set(hi_, o.hi_, MPFR_RNDU);
    }
    return *this;
  }
  Interval& operator=(Interval&& o) noexcept {
    if (this != &o) {
      mpfr_swap(lo_, o.lo_);
      mpfr_swap(hi_, o.hi_);
    }
    return *this;
  }
  ~Interval() {
    mpfr_clear(lo_);
    mpfr_clear(hi_);
  }

  static Interval zero(Prec p) { return Interval(p); }

  static Interval from_point(const MpReal& x) {
    Interval r(x.prec());
    mpfr_set(r.lo_, x.raw(), MPFR_RNDD);
    mpfr_set(r.hi_, x.raw(), MPFR_RNDU);
    return r;
  }

  static Interval from_double(double d, Prec p) {
    Interval r(p);
    mpfr_set_d(r.lo_, d, MPFR_RNDD);
    mpfr_set_d(r.hi_, d, MPFR_RNDU);
    return r;
  }

  static Interval from_long(long n, Prec p) {
    Interval r(p);
    mpfr_set_si(r.lo_, n, MPFR_RNDD);
    mpfr_set_si(r.hi_, n, MPFR_RNDU);
    return r;
  }

  static Interval from_rational(const Rational& q, Prec p) {
    Interval r(p);
    mpfr_set_q(r.lo_, q.raw(), MPFR_RNDD);
    mpfr_set_q(r.hi_, q.raw(), MPFR_RNDU);
    return r;
  }

  static Interval pi(Prec p) {
    Interval r(p);
    mpfr_const_pi(r.lo_, MPFR_RNDD);
    mpfr_const_pi(r.hi_, MPFR_RNDU);
    return r;
  }

  static Interval make(const MpReal& lo, const MpReal& hi) {
    Interval r(std::max(lo.prec(), hi.prec()));
    mpfr_set(r.lo_, lo.raw(), MPFR_RNDD);
    mpfr_set(r.hi_, hi.raw(), MPFR_RNDU);
    return r;
  }

  Prec prec() const { return mpfr_get_prec(lo_); }

  MpReal lower() const {
    MpReal x = MpReal::zero(prec());
    mpfr_set(x.raw(), lo_, MPFR_RNDD);
    return x;
  }
  MpReal upper() const {
    MpReal x = MpReal::zero(prec());
    mpfr_set(x.raw(), hi_, MPFR_RNDU);
    return x;
  }

  MpReal mid() const {
    MpReal x = MpReal::zero(prec());
    mpfr_add(x.raw(), lo_, hi_, MPFR_RNDN);
    mpfr_div_2ui(x.raw(), x.raw(), 1, MPFR_RNDN);
    return x;
  }

  // upper bound on the radius
  MpReal rad() const {
    MpReal x = MpReal::zero(prec());
    mpfr_sub(x.raw(), hi_, lo_, MPFR_RNDU);
    mpfr_div_2ui(x.raw(), x.raw(), 1, MPFR_RNDU);
    return x;
  }

  // upper bound on |x| over the interval
  MpReal mag() const {
    MpReal a = MpReal::zero(prec()), b = MpReal::zero(prec());
    mpfr_abs(a.raw(), lo_, MPFR_RNDU);
    mpfr_abs(b.raw(), hi_, MPFR_RNDU);
    return max(a, b);
  }

  bool contains_zero() const { return mpfr_sgn(lo_) <= 0 && mpfr_sgn(hi_) >= 0; }
  bool is_strictly_positive() const { return mpfr_sgn(lo_) > 0; }
  bool is_point() const { return mpfr_equal_p(lo_, hi_) != 0; }
  bool is_exact_zero() const { return mpfr_zero_p(lo_) && mpfr_zero_p(hi_); }
  bool is_finite() const { return mpfr_number_p(lo_) && mpfr_number_p(hi_); }

  bool contains(const Interval& o) const {
    return mpfr_lessequal_p(lo_, o.lo_) && mpfr_greaterequal_p(hi_, o.hi_);
  }
  bool contains_in_interior(const Interval& o) const {
    return mpfr_less_p(lo_, o.lo_) && mpfr_greater_p(hi_, o.hi_);
  }

  friend Interval operator+(const Interval& a, const Interval& b) {
    Interval r(join(a, b));
    mpfr_add(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
    mpfr_add(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
    return r;
  }
  friend Interval operator-(const Interval& a, const Interval& b) {
    Interval r(join(a, b));
    mpfr_sub(r.lo_, a.lo_, b.hi_, MPFR_RNDD);
    mpfr_sub(r.hi_, a.hi_, b.lo_, MPFR_RNDU);
    return r;
  }
  Interval operator-() const {
    Interval r(prec());
    mpfr_neg(r.lo_, hi_, MPFR_RNDD);
    mpfr_neg(r.hi_, lo_, MPFR_RNDU);
    return r;
  }

  friend Interval operator*(const Interval& a, const Interval& b) {
    Interval r(join(a, b));
    mpfr_t t;
    mpfr_init2(t, r.prec());
    bool first = true;
    auto consider = [&](mpfr_srcptr x, mpfr_srcptr y) {
      mpfr_mul(t, x, y, MPFR_RNDD);
      if (first || mpfr_less_p(t, r.lo_)) mpfr_set(r.lo_, t, MPFR_RNDD);
      mpfr_mul(t, x, y, MPFR_RNDU);
      if (first || mpfr_greater_p(t, r.hi_)) mpfr_set(r.hi_, t, MPFR_RNDU);
      first = false;
    };
    consider(a.lo_, b.lo_);
    consider(a.lo_, b.hi_);
    consider(a.hi_, b.lo_);
    consider(a.hi_, b.hi_);
    mpfr_clear(t);
    return r;
  }

  Interval& operator+=(const Interval& o) { *this = *this + o; return *this; }
  Interval& operator-=(const Interval& o) { *this = *this - o; return *this; }
  Interval& operator*=(const Interval& o) { *this = *this * o; return *this; }

  void add_mul(const Interval& a, const Interval& b) { *this += a * b; }

  // division; the divisor must not contain zero
  friend Interval operator/(const Interval& a, const Interval& b) {
    if (b.contains_zero()) throw std::domain_error("interval division by interval containing zero");
    Interval r(join(a, b));
    mpfr_t t;
    mpfr_init2(t, r.prec());
    bool first = true;
    auto consider = [&](mpfr_srcptr x, mpfr_srcptr y) {
      mpfr_div(t, x, y, MPFR_RNDD);
      if (first || mpfr_less_p(t, r.lo_)) mpfr_set(r.lo_, t, MPFR_RNDD);
      mpfr_div(t, x, y, MPFR_RNDU);
      if (first || mpfr_greater_p(t, r.hi_)) mpfr_set(r.hi_, t, MPFR_RNDU);
      first = false;
    };
    consider(a.lo_, b.lo_);
    consider(a.lo_, b.hi_);
    consider(a.hi_, b.lo_);
    consider(a.hi_, b.hi_);
    mpfr_clear(t);
    return r;
  }

  // square root; requires lo >= 0
  friend Interval sqrt(const Interval& a) {
    if (mpfr_sgn(a.lo_) < 0) throw std::domain_error("interval sqrt of a possibly negative value");
    Interval r(a.prec());
    mpfr_sqrt(r.lo_, a.lo_, MPFR_RNDD);
    mpfr_sqrt(r.hi_, a.hi_, MPFR_RNDU);
    return r;
  }

  friend Interval exp(const Interval& a) {
    Interval r(a.prec());
    mpfr_exp(r.lo_, a.lo_, MPFR_RNDD);
    mpfr_exp(r.hi_, a.hi_, MPFR_RNDU);
    return r;
  }

  friend Interval hull(const Interval& a, const Interval& b) {
    Interval r(join(a, b));
    mpfr_min(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
    mpfr_max(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
    return r;
  }

  // epsilon-inflation (relative widening by eta plus one ulp-scale absolute bump)
  Interval inflate(double eta) const {
    Interval r(prec());
    MpReal w = rad();
    MpReal bump = MpReal::from_double(eta, prec()) * w + tiny_abs();
    mpfr_sub(r.lo_, lo_, bump.raw(), MPFR_RNDD);
    mpfr_add(r.hi_, hi_, bump.raw(), MPFR_RNDU);
    return r;
  }

  std::string to_string() const {
    return "[" + lower().to_string() + "," + upper().to_string() + "]";
  }

 private:
  void init(Prec p) {
    mpfr_init2(lo_, p);
    mpfr_init2(hi_, p);
  }
  void set_zero() {
    mpfr_set_zero(lo_, 1);
    mpfr_set_zero(hi_, 1);
  }
  static Prec join(const Interval& a, const Interval& b) { return std::max(a.prec(), b.prec()); }

  MpReal tiny_abs() const {
    // 2^(-prec) * max(1, |x|): a one-ulp-scale absolute inflation
    MpReal m = mag();
    MpReal one = MpReal::one(prec());
    MpReal base = max(m, one);
    mpfr_mul_2si(base.raw(), base.raw(), -static_cast<long>(prec()), MPFR_RNDU);
    return base;
  }

  mpfr_t lo_, hi_;
};

}  // namespace packing
