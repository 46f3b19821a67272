#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "packing/orthopoly.hpp"
#include "packing/poly.hpp"

using namespace packing;

namespace {

Rational binom_rat(const Rational& top, unsigned long k) {
  Rational r(1);
  for (unsigned long i = 0; i < k; ++i) r *= (top - Rational(static_cast<long>(i)));
  return r / Rational::factorial(k);
}

// closed form L_k^alpha(x) = sum_j (-1)^j binom(k+alpha, k-j) x^j / j!
UniPoly<Rational> laguerre_closed_form(int k, const Rational& alpha) {
  UniPoly<Rational> p;
  p.c.assign(k + 1, Rational(0));
  for (int j = 0; j <= k; ++j) {
    Rational c = binom_rat(Rational(k) + alpha, k - j) / Rational::factorial(j);
    if ((j % 2) != 0) c = -c;
    p.c[j] = c;
  }
  return p;
}

// exact integral of q over [-1,1]
Rational integrate_sym(const UniPoly<Rational>& q) {
  Rational acc(0);
  for (int j = 0; j <= q.degree(); ++j) {
    if (j % 2 != 0) continue;
    acc += q.c[j] * Rational(2, j + 1);
  }
  return acc;
}

}  // namespace

TEST_CASE("laguerre matches frozen low-degree values") {
  UniPoly<Rational> l2 = laguerre(2, Rational(1, 2));
  REQUIRE(l2.degree() == 2);
  CHECK(l2.c[0] == Rational(15, 8));
  CHECK(l2.c[1] == Rational(-5, 2));
  CHECK(l2.c[2] == Rational(1, 2));

  UniPoly<Rational> l1 = laguerre(1, Rational(3));
  CHECK(l1.c[0] == Rational(4));
  CHECK(l1.c[1] == Rational(-1));
}

TEST_CASE("laguerre recurrence equals closed form") {
  for (const Rational& alpha : {Rational(0), Rational(1, 2), Rational(2), Rational(9, 2), Rational(13, 2)}) {
    for (int k = 0; k <= 12; ++k) {
      UniPoly<Rational> a = laguerre(k, alpha);
      UniPoly<Rational> b = laguerre_closed_form(k, alpha);
      REQUIRE(a.degree() == b.degree());
      for (int j = 0; j <= k; ++j) CHECK(a.c[j] == b.c[j]);
    }
  }
}

TEST_CASE("gegenbauer normalization and parity") {
  for (int n : {2, 3, 4, 5, 8, 13}) {
    UniPoly<Rational> p1 = gegenbauer(1, n);
    REQUIRE(p1.degree() == 1);
    CHECK(p1.c[1] == Rational(n - 1, 2));

    UniPoly<Rational> p2 = gegenbauer(2, n);
    CHECK(p2.c[2] == Rational(n + 1) * Rational(n, 8));
    CHECK(p2.c[0] == -Rational(n + 1, 8));

    for (int ell = 0; ell <= 9; ++ell) {
      UniPoly<Rational> p = gegenbauer(ell, n);
      REQUIRE(p.degree() == ell);
      for (int j = 0; j <= ell; ++j)
        if ((ell - j) % 2 != 0) CHECK(p.c[j].is_zero());
    }
  }
}

TEST_CASE("gegenbauer n=3 equals legendre") {
  UniPoly<Rational> p3 = gegenbauer(3, 3);
  CHECK(p3.c[3] == Rational(5, 2));
  CHECK(p3.c[1] == Rational(-3, 2));
  UniPoly<Rational> p4 = gegenbauer(4, 3);
  CHECK(p4.c[4] == Rational(35, 8));
  CHECK(p4.c[2] == Rational(-30, 8));
  CHECK(p4.c[0] == Rational(3, 8));
}

TEST_CASE("gegenbauer orthogonality under the sphere weight") {
  // weight (1-x^2)^((n-3)/2) is polynomial for odd n; integrate exactly
  for (int n : {3, 5, 7}) {
    int w = (n - 3) / 2;
    UniPoly<Rational> weight{{Rational(1)}};
    UniPoly<Rational> oneminus{{Rational(1), Rational(0), Rational(-1)}};
    for (int i = 0; i < w; ++i) weight = uni_mul(weight, oneminus);
    for (int a = 0; a <= 6; ++a)
      for (int b = 0; b < a; ++b) {
        UniPoly<Rational> prod = uni_mul(uni_mul(gegenbauer(a, n), gegenbauer(b, n)), weight);
        CHECK(integrate_sym(prod).is_zero());
      }
  }
}

TEST_CASE("gegenbauer block expansion") {
  // ell=2, k=1, kp=0, n=3: u*(uv)*P_2(t/sqrt(uv)) = (3/2) u t^2 - (1/2) u^2 v
  MultiPoly<Rational> blk = gegenbauer_block(2, 1, 0, 3);
  REQUIRE(blk.terms.size() == 2);
  CHECK(blk.terms.at({1, 0, 2}) == Rational(3, 2));
  CHECK(blk.terms.at({2, 1, 0}) == Rational(-1, 2));

  // homogenized blocks satisfy grading: total degree of each term is k+kp+ell
  for (int n : {3, 8})
    for (int ell = 0; ell <= 5; ++ell)
      for (int k = 0; k <= 2; ++k)
        for (int kp = 0; kp <= 2; ++kp)
          for (const auto& [m, v] : gegenbauer_block(ell, k, kp, n).terms) CHECK(m.degree() == k + kp + ell);
}

TEST_CASE("cosine power expansion") {
  for (int n : {3, 4, 7}) {
    std::vector<Rational> g1 = cosine_power_expansion(1, n);
    CHECK(g1[0] == Rational(1, n));
    CHECK(g1[1] == Rational(8) / (Rational(n) * Rational(n + 1)));
  }
  // reconstruction: sum_k gamma_k P_{2k}(s) == s^(2c)
  for (int n : {3, 4, 8})
    for (int c = 0; c <= 4; ++c) {
      std::vector<Rational> gam = cosine_power_expansion(c, n);
      UniPoly<Rational> acc;
      for (int k = 0; k <= c; ++k) acc = uni_add(acc, uni_scale(gegenbauer(2 * k, n), gam[k]));
      acc = uni_trim(acc);
      REQUIRE(acc.degree() == 2 * c);
      for (int j = 0; j <= acc.degree(); ++j)
        CHECK(acc.c[j] == ((j == 2 * c) ? Rational(1) : Rational(0)));
    }
}

TEST_CASE("invariant basis sizes and ordering") {
  CHECK(invariant_basis_size(1, 1) == 3);
  CHECK(invariant_basis_size(2, 1) == 7);
  CHECK(invariant_basis_size(4, 1) == 22);
  CHECK(invariant_basis_size(5, 1) == 34);
  CHECK(invariant_basis_size(6, 1) == 50);
  CHECK(invariant_basis_size(4, 2) == 14);
  CHECK(invariant_basis_size(5, 2) == 20);
  CHECK(invariant_basis_size(6, 2) == 30);
  CHECK(invariant_basis_size(-1, 1) == 0);

  auto basis = invariant_basis(3, 1);
  CHECK(basis.size() == static_cast<size_t>(invariant_basis_size(3, 1)));
  REQUIRE(basis[0].terms.size() == 1);
  CHECK(basis[0].terms.at({0, 0, 0}) == Rational(1));
  // every element is symmetric under u <-> v
  for (const auto& e : basis) {
    MultiPoly<Rational> sw = mp_swap_uv(e);
    CHECK(sw.terms == e.terms);
  }
}

TEST_CASE("multipoly restrictions") {
  MultiPoly<Rational> p;
  p.add_term({2, 1, 0}, Rational(1));  // u^2 v
  p.add_term({0, 0, 1}, Rational(1));  // t
  p.add_term({0, 3, 0}, Rational(2));  // 2 v^3

  UniPoly<Rational> diag = uni_trim(mp_restrict_diagonal(p));
  CHECK(diag.c[1] == Rational(1));
  CHECK(diag.c[3] == Rational(3));

  UniPoly<Rational> diag2 = uni_trim(mp_restrict_diagonal_tsq(p));
  CHECK(diag2.c[2] == Rational(1));
  CHECK(diag2.c[3] == Rational(3));

  UniPoly<Rational> ax = uni_trim(mp_restrict_axis_u(p));
  CHECK(ax.empty());
  p.add_term({4, 0, 0}, Rational(5));
  CHECK(uni_trim(mp_restrict_axis_u(p)).c[4] == Rational(5));
  CHECK(uni_trim(mp_restrict_axis_v(p)).c[3] == Rational(2));
}

TEST_CASE("inexact coefficients keep structural support") {
  // (u+1)(u-1): the linear coefficient cancels numerically but stays stored
  UniPoly<MpReal> a{{MpReal::one(128), MpReal::one(128)}};
  UniPoly<MpReal> b{{-MpReal::one(128), MpReal::one(128)}};
  UniPoly<MpReal> prod = uni_mul(a, b);
  REQUIRE(prod.c.size() == 3);
  CHECK(prod.c[1].is_zero());

  MultiPoly<MpReal> ma, mb;
  ma.add_term({1, 0, 0}, MpReal::one(128));
  ma.add_term({0, 1, 0}, MpReal::one(128));
  mb.add_term({1, 0, 0}, MpReal::one(128));
  mb.add_term({0, 1, 0}, -MpReal::one(128));
  MultiPoly<MpReal> mprod = mp_mul(ma, mb);  // u^2 - v^2 with stored zero uv term
  CHECK(mprod.terms.size() == 3);
  CHECK(mprod.terms.at({1, 1, 0}).is_zero());
}
