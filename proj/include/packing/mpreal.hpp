#pragma once

// Arbitrary-precision floating point value with explicit per-value precision.
// Thin RAII wrapper over mpfr_t.  Arithmetic results carry the larger of the
// operand precisions; rounding is to nearest.  No process-global state is
// consulted: every constructor takes the precision it needs.

#include <mpfr.h>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

namespace packing {

using Prec = mpfr_prec_t;

class MpReal {
 public:
  MpReal() { mpfr_init2(v_, 64); mpfr_set_zero(v_, 1); }

  MpReal(const MpReal& o) {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }

  MpReal(MpReal&& o) noexcept {
    mpfr_init2(v_, 64);
    mpfr_swap(v_, o.v_);
  }

  MpReal& operator=(const MpReal& o) {
    if (this != &o) {
      mpfr_set_prec(v_, mpfr_get_prec(o.v_));
      mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
  }

  MpReal& operator=(MpReal&& o) noexcept {
    if (this != &o) mpfr_swap(v_, o.v_);
    return *this;
  }

  ~MpReal() { mpfr_clear(v_); }

  static MpReal zero(Prec p) { MpReal r{p, tag{}}; mpfr_set_zero(r.v_, 1); return r; }
  static MpReal one(Prec p) { MpReal r{p, tag{}}; mpfr_set_ui(r.v_, 1, MPFR_RNDN); return r; }

  static MpReal from_double(double d, Prec p) {
    MpReal r{p, tag{}};
    mpfr_set_d(r.v_, d, MPFR_RNDN);  // exact whenever p >= 53
    return r;
  }

  static MpReal from_long(long n, Prec p) {
    MpReal r{p, tag{}};
    mpfr_set_si(r.v_, n, MPFR_RNDN);
    return r;
  }

  static MpReal pi(Prec p) { MpReal r{p, tag{}}; mpfr_const_pi(r.v_, MPFR_RNDN); return r; }

  // value of x re-rounded (to nearest) at exactly precision p
  static MpReal rounded(const MpReal& x, Prec p) {
    MpReal r{p, tag{}};
    mpfr_set(r.v_, x.v_, MPFR_RNDN);
    return r;
  }

  Prec prec() const { return mpfr_get_prec(v_); }

  mpfr_ptr raw() { return v_; }
  mpfr_srcptr raw() const { return v_; }

  // --- arithmetic; result precision = max of operand precisions ---

  friend MpReal operator+(const MpReal& a, const MpReal& b) {
    MpReal r{join(a, b), tag{}};
    mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  friend MpReal operator-(const MpReal& a, const MpReal& b) {
    MpReal r{join(a, b), tag{}};
    mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  friend MpReal operator*(const MpReal& a, const MpReal& b) {
    MpReal r{join(a, b), tag{}};
    mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  friend MpReal operator/(const MpReal& a, const MpReal& b) {
    MpReal r{join(a, b), tag{}};
    mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  MpReal operator-() const {
    MpReal r{prec(), tag{}};
    mpfr_neg(r.v_, v_, MPFR_RNDN);
    return r;
  }

  MpReal& operator+=(const MpReal& o) { promote(o); mpfr_add(v_, v_, o.v_, MPFR_RNDN); return *this; }
  MpReal& operator-=(const MpReal& o) { promote(o); mpfr_sub(v_, v_, o.v_, MPFR_RNDN); return *this; }
  MpReal& operator*=(const MpReal& o) { promote(o); mpfr_mul(v_, v_, o.v_, MPFR_RNDN); return *this; }
  MpReal& operator/=(const MpReal& o) { promote(o); mpfr_div(v_, v_, o.v_, MPFR_RNDN); return *this; }

  // fused accumulate: *this += a*b, without allocating a temporary
  void add_mul(const MpReal& a, const MpReal& b) {
    Prec want = std::max(prec(), join(a, b));
    if (want > prec()) mpfr_prec_round(v_, want, MPFR_RNDN);
    mpfr_fma(v_, a.v_, b.v_, v_, MPFR_RNDN);
  }
  void sub_mul(const MpReal& a, const MpReal& b) {
    Prec want = std::max(prec(), join(a, b));
    if (want > prec()) mpfr_prec_round(v_, want, MPFR_RNDN);
    mpfr_fms(v_, a.v_, b.v_, v_, MPFR_RNDN);
    mpfr_neg(v_, v_, MPFR_RNDN);  // fms computes a*b - this
  }

  friend MpReal sqrt(const MpReal& a) {
    MpReal r{a.prec(), tag{}};
    mpfr_sqrt(r.v_, a.v_, MPFR_RNDN);
    return r;
  }
  friend MpReal abs(const MpReal& a) {
    MpReal r{a.prec(), tag{}};
    mpfr_abs(r.v_, a.v_, MPFR_RNDN);
    return r;
  }
  friend MpReal exp(const MpReal& a) {
    MpReal r{a.prec(), tag{}};
    mpfr_exp(r.v_, a.v_, MPFR_RNDN);
    return r;
  }
  friend MpReal gamma_fn(const MpReal& a) {
    MpReal r{a.prec(), tag{}};
    mpfr_gamma(r.v_, a.v_, MPFR_RNDN);
    return r;
  }
  // exact scaling by a power of two
  friend MpReal ldexp(const MpReal& a, long e) {
    MpReal r{a.prec(), tag{}};
    mpfr_mul_2si(r.v_, a.v_, e, MPFR_RNDN);
    return r;
  }
  // floor(log2 |a|) + 1 for nonzero a (mpfr exponent convention); 0 for a == 0
  friend long ilogb(const MpReal& a) {
    return mpfr_zero_p(a.v_) ? 0 : static_cast<long>(mpfr_get_exp(a.v_));
  }

  friend MpReal pow_ui(const MpReal& a, unsigned long e) {
    MpReal r{a.prec(), tag{}};
    mpfr_pow_ui(r.v_, a.v_, e, MPFR_RNDN);
    return r;
  }
  friend MpReal min(const MpReal& a, const MpReal& b) { return (a <= b) ? a : b; }
  friend MpReal max(const MpReal& a, const MpReal& b) { return (a >= b) ? a : b; }

  int sign() const { return mpfr_sgn(v_); }
  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  bool is_nan() const { return mpfr_nan_p(v_) != 0; }
  bool is_finite() const { return mpfr_number_p(v_) != 0; }

  friend bool operator==(const MpReal& a, const MpReal& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }
  friend bool operator!=(const MpReal& a, const MpReal& b) { return !(a == b); }
  friend bool operator<(const MpReal& a, const MpReal& b) { return mpfr_less_p(a.v_, b.v_) != 0; }
  friend bool operator<=(const MpReal& a, const MpReal& b) { return mpfr_lessequal_p(a.v_, b.v_) != 0; }
  friend bool operator>(const MpReal& a, const MpReal& b) { return mpfr_greater_p(a.v_, b.v_) != 0; }
  friend bool operator>=(const MpReal& a, const MpReal& b) { return mpfr_greaterequal_p(a.v_, b.v_) != 0; }

  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

  // log2 of |x|, as a double; -inf for zero.  Cheap magnitude probe.
  double log2_abs() const {
    if (mpfr_zero_p(v_)) return -std::numeric_limits<double>::infinity();
    long exp = mpfr_get_exp(v_);
    return static_cast<double>(exp);
  }

  // Number of significant decimal digits that guarantee binary->decimal->binary
  // round-trips at this value's precision.
  static int roundtrip_digits(Prec p) {
    return static_cast<int>(std::ceil(static_cast<double>(p) * 0.30102999566398119521)) + 2;
  }

  // Scientific-notation decimal string with round-trip fidelity.
  std::string to_string() const { return to_string(roundtrip_digits(prec())); }

  std::string to_string(int digits) const {
    char* s = nullptr;
    // %.*Re prints `digits` places after the leading digit
    if (mpfr_asprintf(&s, "%.*Re", digits - 1, v_) < 0) return "nan";
    std::string out(s);
    mpfr_free_str(s);
    return out;
  }

  // Parse a decimal string at precision p (round to nearest).
  static MpReal parse(const std::string& s, Prec p) {
    MpReal r{p, tag{}};
    mpfr_set_str(r.v_, s.c_str(), 10, MPFR_RNDN);
    return r;
  }

  friend void swap(MpReal& a, MpReal& b) noexcept { mpfr_swap(a.v_, b.v_); }

 private:
  struct tag {};
  MpReal(Prec p, tag) { mpfr_init2(v_, p); }

  static Prec join(const MpReal& a, const MpReal& b) {
    return std::max(mpfr_get_prec(a.v_), mpfr_get_prec(b.v_));
  }
  void promote(const MpReal& o) {
    if (o.prec() > prec()) mpfr_prec_round(v_, o.prec(), MPFR_RNDN);
  }

  mpfr_t v_;
};

}  // namespace packing
