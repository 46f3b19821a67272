#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "packing/fourier.hpp"
#include "support/quadrature.hpp"

using namespace packing;

TEST_CASE("radial transform is an exact rational involution") {
  // F(u^k) = sum_j q_jk (1/pi)^(k-j) u^j; applying F twice multiplies the
  // rational matrices, and all powers of 1/pi line up, so F o F = id is the
  // exact statement sum_i q_ji q_ik = delta_jk.
  for (int n : {2, 3, 4, 8, 13}) {
    RadialFourierOp<MpReal> op(n, 64);
    for (int k = 0; k <= 18; ++k)
      for (int j = 0; j <= k; ++j) {
        Rational acc(0);
        for (int i = j; i <= k; ++i) acc += op.coefficient_rational(j, i) * op.coefficient_rational(i, k);
        CHECK(acc == ((j == k) ? Rational(1) : Rational(0)));
      }
  }
}

TEST_CASE("radial transform known image") {
  // F(u) = n/(2 pi) - u
  RadialFourierOp<MpReal> op(3, 256);
  UniPoly<MpReal> p{{MpReal::zero(256), MpReal::one(256)}};
  UniPoly<MpReal> img = op.transform(p);
  REQUIRE(img.degree() == 1);
  MpReal expected = MpReal::from_long(3, 320) / (MpReal::from_long(2, 320) * MpReal::pi(320));
  CHECK(abs(img.c[0] - expected).log2_abs() < -250);
  CHECK(abs(img.c[1] + MpReal::one(256)).log2_abs() < -250);
}

TEST_CASE("radial double application returns the input to tolerance") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (Prec prec : {128L, 256L}) {
    for (int n : {3, 8}) {
      RadialFourierOp<MpReal> op(n, prec);
      UniPoly<MpReal> p;
      for (int j = 0; j <= 20; ++j) p.c.push_back(MpReal::from_double(u(rng), prec));
      UniPoly<MpReal> back = op.transform(op.transform(p));
      for (int j = 0; j <= 20; ++j)
        CHECK(abs(back.c[j] - p.c[j]).log2_abs() < -static_cast<double>(prec) + 20);
    }
  }
}

TEST_CASE("radial transform agrees with quadrature") {
  const Prec p = 384;
  UniPoly<MpReal> poly;
  for (double d : {1.0, 1.0, -0.5, 1.0 / 7.0}) poly.c.push_back(MpReal::from_double(d, p));
  for (int n : {2, 3}) {
    RadialFourierOp<MpReal> op(n, p);
    UniPoly<MpReal> img = op.transform(poly);
    for (double rho : {0.0, 1.0, 2.1}) {
      // the image polynomial is the transform divided by the Gaussian factor
      MpReal r = MpReal::from_double(rho, p);
      MpReal direct = uni_eval(img, r * r) * exp(-(MpReal::pi(p) * r * r));
      MpReal viaq = oracle::radial_transform_by_quadrature(poly, n, r, p);
      CHECK(abs(direct - viaq).to_double() < 1e-10);
    }
  }
}

TEST_CASE("two-variable transform known image and symmetry") {
  LatticeFourierOp<MpReal> op(4, 256);
  auto img = op.image_terms({1, 0, 0});
  REQUIRE(img.size() == 2);
  // n/(2 pi) - u
  for (const auto& term : img) {
    if (term.mono == Mono{0, 0, 0}) {
      CHECK(term.e == 1);
      CHECK(term.q == Rational(2));
    } else {
      CHECK(term.mono == Mono{1, 0, 0});
      CHECK(term.e == 0);
      CHECK(term.q == Rational(-1));
    }
  }

  // mirror symmetry of images
  for (Mono m : {Mono{2, 1, 1}, Mono{3, 0, 2}, Mono{1, 1, 0}}) {
    auto a = op.image_terms(m);
    auto b = op.image_terms(m.mirrored());
    REQUIRE(a.size() == b.size());
    for (const auto& ta : a) {
      bool found = false;
      for (const auto& tb : b)
        if (tb.mono == ta.mono.mirrored() && tb.e == ta.e && tb.q == ta.q) found = true;
      CHECK(found);
    }
  }
}

TEST_CASE("two-variable transform consistent with radial on t-free input") {
  for (int n : {3, 6}) {
    LatticeFourierOp<MpReal> lat(n, 128);
    RadialFourierOp<MpReal> rad(n, 128);
    for (int A = 0; A <= 6; ++A) {
      auto img = lat.image_terms({A, 0, 0});
      for (const auto& term : img) {
        CHECK(term.mono.b == 0);
        CHECK(term.mono.c == 0);
        CHECK(term.e == A - term.mono.a);
        CHECK(term.q == rad.coefficient_rational(term.mono.a, A));
      }
    }
  }
}

TEST_CASE("two-variable transform preserves the grading filtration") {
  LatticeFourierOp<MpReal> op(5, 128);
  for (Mono m : {Mono{2, 1, 2}, Mono{0, 0, 3}, Mono{4, 2, 1}}) {
    int g = m.grading(2);
    bool top_seen = false;
    for (const auto& term : op.image_terms(m)) {
      CHECK(term.mono.grading(2) <= g);
      if (term.mono.grading(2) == g) top_seen = true;
    }
    CHECK(top_seen);
  }
}

TEST_CASE("two-variable double application returns the input") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int n : {3, 4, 7}) {
    const Prec prec = 256;
    LatticeFourierOp<MpReal> op(n, prec);
    MultiPoly<MpReal> p;
    for (int a = 0; a <= 6; ++a)
      for (int b = 0; a + b <= 6; ++b)
        for (int c = 0; a + b + 2 * c <= 6; ++c) p.add_term({a, b, c}, MpReal::from_double(u(rng), prec));
    MultiPoly<MpReal> back = op.transform(op.transform(p));
    REQUIRE(back.terms.size() >= p.terms.size());
    for (const auto& [m, v] : back.terms) {
      MpReal orig = p.terms.count(m) ? p.terms.at(m) : MpReal::zero(prec);
      CHECK(abs(v - orig).log2_abs() < -static_cast<double>(prec) + 20);
    }
  }
}

TEST_CASE("interval transform encloses the floating transform") {
  const Prec prec = 192;
  RadialFourierOp<MpReal> opf(5, prec);
  RadialFourierOp<Interval> opi(5, prec);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  UniPoly<MpReal> pf;
  UniPoly<Interval> pi_;
  for (int j = 0; j <= 12; ++j) {
    double d = u(rng);
    pf.c.push_back(MpReal::from_double(d, prec));
    pi_.c.push_back(Interval::from_double(d, prec));
  }
  UniPoly<MpReal> imf = opf.transform(pf);
  UniPoly<Interval> imi = opi.transform(pi_);
  REQUIRE(imf.degree() == imi.degree());
  for (int j = 0; j <= imf.degree(); ++j) {
    CHECK(imi.c[j].lower() <= imf.c[j]);
    CHECK(imi.c[j].upper() >= imf.c[j]);
    CHECK(imi.c[j].rad().log2_abs() < -static_cast<double>(prec) + 30);
  }

  LatticeFourierOp<Interval> lati(4, prec);
  LatticeFourierOp<MpReal> latf(4, prec);
  MultiPoly<MpReal> qf;
  MultiPoly<Interval> qi;
  for (int a = 0; a <= 3; ++a)
    for (int c = 0; a + 2 * c <= 4; ++c) {
      double d = u(rng);
      qf.add_term({a, a, c}, MpReal::from_double(d, prec));
      qi.add_term({a, a, c}, Interval::from_double(d, prec));
    }
  MultiPoly<MpReal> rf = latf.transform(qf);
  MultiPoly<Interval> ri = lati.transform(qi);
  REQUIRE(rf.terms.size() == ri.terms.size());
  for (const auto& [m, v] : rf.terms) {
    const Interval& iv = ri.terms.at(m);
    CHECK(iv.lower() <= v);
    CHECK(iv.upper() >= v);
  }
}
