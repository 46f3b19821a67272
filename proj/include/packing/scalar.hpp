#pragma once

// Uniform construction helpers so that numeric code can be written once and
// instantiated with either plain floating point (MpReal) or enclosure
// (Interval) scalars.

#include "packing/interval.hpp"
#include "packing/mpreal.hpp"
#include "packing/rational.hpp"

namespace packing {

template <class K> K k_zero(Prec p);
template <> inline MpReal k_zero<MpReal>(Prec p) { return MpReal::zero(p); }
template <> inline Interval k_zero<Interval>(Prec p) { return Interval::zero(p); }

template <class K> K k_one(Prec p);
template <> inline MpReal k_one<MpReal>(Prec p) { return MpReal::one(p); }
template <> inline Interval k_one<Interval>(Prec p) { return Interval::from_long(1, p); }

template <class K> K k_from_long(long n, Prec p);
template <> inline MpReal k_from_long<MpReal>(long n, Prec p) { return MpReal::from_long(n, p); }
template <> inline Interval k_from_long<Interval>(long n, Prec p) { return Interval::from_long(n, p); }

template <class K> K k_from_double(double d, Prec p);
template <> inline MpReal k_from_double<MpReal>(double d, Prec p) { return MpReal::from_double(d, p); }
template <> inline Interval k_from_double<Interval>(double d, Prec p) { return Interval::from_double(d, p); }

template <class K> K k_from_rational(const Rational& q, Prec p);
template <> inline MpReal k_from_rational<MpReal>(const Rational& q, Prec p) { return q.to_mpreal(p); }
template <> inline Interval k_from_rational<Interval>(const Rational& q, Prec p) { return Interval::from_rational(q, p); }

template <class K> K k_pi(Prec p);
template <> inline MpReal k_pi<MpReal>(Prec p) { return MpReal::pi(p); }
template <> inline Interval k_pi<Interval>(Prec p) { return Interval::pi(p); }

template <class K> K k_exp(const K& x);
template <> inline MpReal k_exp<MpReal>(const MpReal& x) { return exp(x); }
template <> inline Interval k_exp<Interval>(const Interval& x) { return exp(x); }

template <class K> K k_sqrt(const K& x);
template <> inline MpReal k_sqrt<MpReal>(const MpReal& x) { return sqrt(x); }
template <> inline Interval k_sqrt<Interval>(const Interval& x) { return sqrt(x); }

template <class K> bool k_is_exact_zero(const K& x);
template <> inline bool k_is_exact_zero<MpReal>(const MpReal& x) { return x.is_zero(); }
template <> inline bool k_is_exact_zero<Interval>(const Interval& x) { return x.is_exact_zero(); }

// midpoint / best point representative
template <class K> MpReal k_mid(const K& x);
template <> inline MpReal k_mid<MpReal>(const MpReal& x) { return x; }
template <> inline MpReal k_mid<Interval>(const Interval& x) { return x.mid(); }

}  // namespace packing
