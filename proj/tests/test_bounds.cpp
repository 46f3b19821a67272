#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdio>
#include <map>
#include <random>
#include <set>
#include <vector>

#include "doctest.h"
#include "packing/bounds.hpp"
#include "packing/fourier.hpp"
#include "packing/orthopoly.hpp"

using namespace packing;

namespace {

constexpr Prec kPrec = 256;

MpReal mp(double d) { return MpReal::from_double(d, kPrec); }

double dd(const MpReal& x) { return x.to_double(); }

// symmetric rational matrices, one per block, with a fixed seed
using RatMat = std::vector<std::vector<Rational>>;

std::vector<RatMat> random_block_matrices(const std::vector<BlockInfo>& blocks, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> num(-6, 6);
  std::uniform_int_distribution<int> den(1, 3);
  std::vector<RatMat> X;
  for (const auto& b : blocks) {
    RatMat M(b.size, std::vector<Rational>(b.size));
    for (int p = 0; p < b.size; ++p)
      for (int q = 0; q <= p; ++q) {
        Rational v(num(rng), den(rng));
        M[p][q] = v;
        M[q][p] = v;
      }
    X.push_back(std::move(M));
  }
  return X;
}

// <A, X> with the off-diagonal doubling convention
MpReal entries_value(const std::vector<RowEntry<MpReal>>& entries, const std::vector<RatMat>& X) {
  MpReal acc = MpReal::zero(kPrec);
  for (const auto& e : entries) {
    MpReal x = X[e.block][e.p][e.q].to_mpreal(kPrec);
    MpReal term = e.v * x;
    if (e.p != e.q) term += term;
    acc += term;
  }
  return acc;
}

// sum_{p,q} X_pq b_p b_q, exact
MultiPoly<Rational> gram_value(const std::vector<MultiPoly<Rational>>& basis, const RatMat& X) {
  MultiPoly<Rational> acc;
  const int s = static_cast<int>(basis.size());
  for (int p = 0; p < s; ++p)
    for (int q = 0; q <= p; ++q) {
      Rational c = X[p][q];
      if (p != q) c = c + c;
      if (c.is_zero()) continue;
      mp_add_scaled_inplace(acc, mp_mul(basis[p], basis[q]), c);
    }
  return mp_trim_zeros(acc);
}

std::vector<MultiPoly<Rational>> uni_basis(int size) {
  std::vector<MultiPoly<Rational>> b;
  for (int k = 0; k < size; ++k) b.push_back(MultiPoly<Rational>::monomial({k, 0, 0}, Rational(1)));
  return b;
}

MultiPoly<Rational> lin(Rational cu, Rational cv, Rational ct, Rational c0) {
  MultiPoly<Rational> w;
  if (!cu.is_zero()) w.add_term({1, 0, 0}, cu);
  if (!cv.is_zero()) w.add_term({0, 1, 0}, cv);
  if (!ct.is_zero()) w.add_term({0, 0, 1}, ct);
  if (!c0.is_zero()) w.add_term({0, 0, 0}, c0);
  return w;
}

Mono mono_from_label(const std::string& label) {
  Mono m;
  const size_t colon = label.find(':');
  REQUIRE(colon != std::string::npos);
  REQUIRE(std::sscanf(label.c_str() + colon + 1, "u^%d v^%d t^%d", &m.a, &m.b, &m.c) == 3);
  return m;
}

// Check that the rows carrying `tag` match the coefficients of `expr`:
// row value - rhs must equal the coefficient at the row's monomial, and no
// sizable coefficient of expr may lack a row.  For u<->v symmetric families
// the rows cover canonical monomials only.
void check_rows_match(const SdpProblem<MpReal>& prob, const std::vector<RatMat>& X,
                      const std::string& tag, const MultiPoly<MpReal>& expr, bool symmetric,
                      double tol) {
  std::set<Mono> covered;
  for (const auto& row : prob.rows) {
    if (row.label.rfind(tag + ":", 0) != 0) continue;
    Mono m = mono_from_label(row.label);
    covered.insert(m);
    MpReal want = MpReal::zero(kPrec);
    auto it = expr.terms.find(m);
    if (it != expr.terms.end()) want = it->second;
    MpReal got = entries_value(row.a, X) - row.rhs;
    CHECK_MESSAGE(dd(abs(got - want)) < tol, row.label);
  }
  CHECK(!covered.empty());
  for (const auto& [m, coeff] : expr.terms) {
    if (symmetric) {
      // mirrored coefficient must agree, and the canonical one carries the row
      auto mit = expr.terms.find(m.mirrored());
      REQUIRE(mit != expr.terms.end());
      CHECK(dd(abs(coeff - mit->second)) < tol);
      if (!m.canonical()) continue;
    }
    if (dd(abs(coeff)) > tol) CHECK(covered.count(m) == 1);
  }
}

MultiPoly<MpReal> to_mp(const MultiPoly<Rational>& a) { return mp_convert<MpReal>(a, kPrec); }

}  // namespace

// ---------------------------------------------------------------------------

TEST_CASE("half-radius ball volumes match closed forms") {
  const MpReal pi = MpReal::pi(kPrec);
  struct Case {
    int n;
    Rational r2;
    MpReal want;
  };
  std::vector<Case> cases;
  cases.push_back({1, Rational(1), MpReal::one(kPrec)});
  cases.push_back({2, Rational(1), pi / mp(4)});
  cases.push_back({3, Rational(1), pi / mp(6)});
  cases.push_back({4, Rational(1), pi * pi / mp(32)});
  cases.push_back({5, Rational(1), pi * pi / mp(60)});
  cases.push_back({3, Rational(4), pi * mp(4) / mp(3)});
  cases.push_back({2, Rational(9, 4), pi * mp(9) / mp(16)});
  for (const auto& c : cases) {
    MpReal got = half_radius_ball_volume<MpReal>(c.n, c.r2, kPrec);
    CHECK(dd(abs(got - c.want)) < 1e-70);
    Interval gi = half_radius_ball_volume<Interval>(c.n, c.r2, kPrec);
    CHECK(gi.contains(Interval::from_point(got)));
    CHECK(gi.rad().to_double() < 1e-70);
  }
  CHECK_THROWS_AS(half_radius_ball_volume<MpReal>(0, Rational(1), kPrec), std::invalid_argument);
  CHECK_THROWS_AS(half_radius_ball_volume<MpReal>(3, Rational(0), kPrec), std::invalid_argument);
}

TEST_CASE("Gaussian Taylor majorant dominates exp(-pi u) beyond the expansion point") {
  const Rational r2(1);
  UniPoly<MpReal> T = gaussian_taylor_majorant<MpReal>(8, r2, kPrec);
  REQUIRE(T.degree() == 8);

  const MpReal pi = MpReal::pi(kPrec);
  // exact value at the expansion point
  MpReal at1 = uni_eval(T, MpReal::one(kPrec));
  CHECK(dd(abs(at1 - exp(-pi))) < 1e-70);

  // strictly beyond the expansion point (at u = 1 the gap is a rounding-level
  // zero of either sign, checked above)
  for (double u : {1.03125, 1.25, 1.5, 2.0, 3.0, 5.0, 9.0}) {
    MpReal uu = mp(u);
    MpReal gap = uni_eval(T, uu) - exp(-(pi * uu));
    CHECK(gap >= MpReal::zero(kPrec));
  }
  // higher degree tightens the majorant
  UniPoly<MpReal> T2 = gaussian_taylor_majorant<MpReal>(16, r2, kPrec);
  MpReal u2 = mp(2.0);
  CHECK(uni_eval(T2, u2) <= uni_eval(T, u2));

  // interval version encloses the floating version coefficient by coefficient
  UniPoly<Interval> Ti = gaussian_taylor_majorant<Interval>(8, r2, kPrec);
  REQUIRE(Ti.degree() == T.degree());
  for (size_t j = 0; j < T.c.size(); ++j) CHECK(Ti.c[j].contains(Interval::from_point(T.c[j])));

  CHECK_THROWS_AS(gaussian_taylor_majorant<MpReal>(7, r2, kPrec), std::invalid_argument);
}

TEST_CASE("region membership predicates") {
  const Rational r2(1), R2(4);
  const Rational h(1, 2);

  CHECK(two_point_region_contains(Rational(1), r2));
  CHECK(two_point_region_contains(Rational(7, 2), r2));
  CHECK(!two_point_region_contains(Rational(99, 100), r2));

  CHECK(gram_realizable(Rational(1), Rational(1), Rational(1)));
  CHECK(!gram_realizable(Rational(1), Rational(1), Rational(2)));
  CHECK(!gram_realizable(Rational(-1), Rational(1), Rational(0)));

  // orthogonal unit pair is admissible; too-close pair is not
  CHECK(three_point_region_contains(Rational(1), Rational(1), Rational(0), r2, R2));
  CHECK(!three_point_region_contains(Rational(1), Rational(1), Rational(3, 4), r2, R2));
  CHECK(!three_point_region_contains(Rational(5), Rational(1), Rational(0), r2, R2));
  CHECK(!three_point_region_contains(h, Rational(1), Rational(0), r2, R2));

  // lattice region admits zero radii and mirror pairs
  CHECK(lattice_region_contains(Rational(1), Rational(0), Rational(0), r2));
  CHECK(lattice_region_contains(Rational(1), Rational(1), Rational(1), r2));   // x = y
  CHECK(lattice_region_contains(Rational(1), Rational(1), Rational(-1), r2));  // x = -y
  CHECK(lattice_region_contains(Rational(2), Rational(3), Rational(1), r2));
  CHECK(!lattice_region_contains(Rational(0), Rational(0), Rational(0), r2));
  CHECK(!lattice_region_contains(h, Rational(1), Rational(0), r2));
  CHECK(!lattice_region_contains(Rational(2), Rational(2), Rational(7, 4), r2));  // |x-y| too small
}

TEST_CASE("multiplier weights are nonnegative on their regions") {
  const Rational r2(1), R2(4);

  // three-point weights, in the builder's order
  std::vector<MultiPoly<Rational>> w3;
  w3.push_back(mp_mul(lin(1, 0, 0, -r2), lin(0, 1, 0, -r2)));
  w3.push_back(lin(1, 1, 0, -2));
  MultiPoly<Rational> uv_t2;
  uv_t2.add_term({1, 1, 0}, Rational(1));
  uv_t2.add_term({0, 0, 2}, Rational(-1));
  w3.push_back(uv_t2);
  w3.push_back(lin(1, 1, -2, -r2));
  w3.push_back(mp_mul(lin(-1, 0, 0, R2), lin(0, -1, 0, R2)));
  w3.push_back(lin(-1, -1, 0, 8));

  int three_pts = 0;
  for (int iu = 4; iu <= 16; ++iu)
    for (int iv = iu; iv <= 16; ++iv)
      for (int is = -16; is <= 16; ++is) {
        Rational u(iu, 4), v(iv, 4), s(is, 4);
        if (!three_point_region_contains(u, v, s, r2, R2)) continue;
        ++three_pts;
        for (const auto& w : w3) CHECK(mp_eval(w, u, v, s) >= Rational(0));
      }
  CHECK(three_pts > 100);

  // lattice weights on the generic stratum (both radii positive, t = s^2)
  std::vector<MultiPoly<Rational>> wl;
  wl.push_back(mp_mul(lin(1, 0, 0, -r2), lin(0, 1, 0, -r2)));
  wl.push_back(lin(1, 1, 0, -2));
  MultiPoly<Rational> g4;
  g4.add_term({1, 1, 1}, Rational(1));
  g4.add_term({0, 0, 2}, Rational(-1));
  wl.push_back(g4);
  MultiPoly<Rational> g5 = mp_mul(lin(1, 1, 0, -r2), lin(1, 1, 0, -r2));
  g5.add_term({0, 0, 1}, Rational(-4));
  wl.push_back(g5);

  int lattice_pts = 0;
  for (int iu = 4; iu <= 20; ++iu)
    for (int iv = iu; iv <= 20; ++iv)
      for (int is = -20; is <= 20; ++is) {
        Rational u(iu, 4), v(iv, 4), s(is, 4);
        if (!lattice_region_contains(u, v, s, r2)) continue;
        // exclude the mirror stratum, certified by the diagonal family instead
        if (u == v && s * s == u * v) continue;
        ++lattice_pts;
        Rational t = s * s;
        for (const auto& w : wl) CHECK(mp_eval(w, u, v, t) >= Rational(0));
      }
  CHECK(lattice_pts > 100);
}

// ---------------------------------------------------------------------------

TEST_CASE("two-point assembly matches its defining identities") {
  TwoPointConfig cfg;
  cfg.n = 3;
  cfg.r2 = Rational(1);
  cfg.d2 = 5;
  cfg.precision = kPrec;
  SdpProblem<MpReal> prob = build_two_point<MpReal>(cfg);

  REQUIRE(prob.blocks.size() == 4);
  CHECK(prob.blocks[0].size == 5);
  CHECK(prob.blocks[1].size == 5);
  CHECK(prob.blocks[2].size == 6);
  CHECK(prob.blocks[3].size == 5);
  CHECK(static_cast<int>(prob.rows.size()) == 2 * cfg.d2 + 2);

  auto X = random_block_matrices(prob.blocks, 11);

  // direct assembly of the radial candidate and its transform side
  MultiPoly<Rational> p2 = mp_neg(gram_value(uni_basis(5), X[0]));
  mp_add_inplace(p2, mp_neg(mp_mul(gram_value(uni_basis(5), X[1]), lin(1, 0, 0, -1))));

  RadialFourierOp<MpReal> op(cfg.n, kPrec);
  UniPoly<MpReal> fp2 = op.transform(uni_convert<MpReal>(uni_trim(mp_restrict_axis_u(p2)), kPrec));
  MultiPoly<MpReal> fourier = mp_from_uni(fp2);
  mp_add_inplace(fourier, to_mp(mp_neg(gram_value(uni_basis(6), X[2]))));
  mp_add_inplace(fourier,
                 to_mp(mp_neg(mp_mul(gram_value(uni_basis(5), X[3]), lin(1, 0, 0, 0)))));

  check_rows_match(prob, X, "fourier", fourier, false, 1e-60);

  // normalization row evaluates the transform at the origin
  int norm_rows = 0;
  for (const auto& row : prob.rows) {
    if (row.label != "normalize") continue;
    ++norm_rows;
    CHECK(dd(abs(row.rhs - MpReal::one(kPrec))) == 0.0);
    MpReal want = fp2.c.empty() ? MpReal::zero(kPrec) : fp2.c[0];
    CHECK(dd(abs(entries_value(row.a, X) - want)) < 1e-60);
  }
  CHECK(norm_rows == 1);

  // objective evaluates the candidate at the origin
  MpReal obj = entries_value(prob.objective, X);
  auto c0 = p2.terms.find(Mono{0, 0, 0});
  MpReal want = c0 == p2.terms.end() ? MpReal::zero(kPrec) : c0->second.to_mpreal(kPrec);
  CHECK(dd(abs(obj - want)) < 1e-60);
}

TEST_CASE("three-point assembly matches its defining identities") {
  ThreePointConfig cfg;
  cfg.n = 3;
  cfg.r2 = Rational(1);
  cfg.R2 = Rational(4);
  cfg.d2 = 3;
  cfg.d3 = 2;
  cfg.d_taylor = 2;
  cfg.precision = kPrec;
  SdpProblem<MpReal> prob = build_truncated_three_point<MpReal>(cfg);

  // blocks: A0..A3, S1+S1m, S2..S7 (partners empty at this size), s1..s6
  std::map<std::string, int> sizes;
  for (const auto& b : prob.blocks) sizes[b.name] = b.size;
  REQUIRE(sizes.count("A0") == 1);
  CHECK(sizes["A0"] == 2);
  CHECK(sizes["A1"] == 2);
  CHECK(sizes["A2"] == 1);
  CHECK(sizes["A3"] == 1);
  CHECK(sizes["S1"] == invariant_basis_size(2, 1));
  CHECK(sizes["S1m"] == invariant_basis_size(1, 1));
  CHECK(sizes["S2"] == invariant_basis_size(1, 1));
  CHECK(sizes["S2m"] == 1);
  CHECK(sizes["s5"] == 5);  // E = max(2*3, 2*(2+2)) = 8
  CHECK(sizes["s6"] == 4);

  auto X = random_block_matrices(prob.blocks, 23);
  const auto bi = [&](const char* name) { return prob.block_index(name); };

  // kernel part, via the same zonal expansion
  MultiPoly<Rational> p3;
  for (int ell = 0; ell < 4; ++ell) {
    int blk = bi(("A" + std::to_string(ell)).c_str());
    int size = prob.blocks[blk].size;
    for (int p = 0; p < size; ++p)
      for (int q = 0; q < size; ++q)
        mp_add_scaled_inplace(p3, gegenbauer_block(ell, p, q, cfg.n), X[blk][p][q]);
  }
  p3 = mp_trim_zeros(p3);

  // region identity
  MultiPoly<Rational> region = p3;
  MultiPoly<Rational> uv2;
  uv2.add_term({2, 0, 0}, Rational(1));
  uv2.add_term({1, 1, 0}, Rational(-2));
  uv2.add_term({0, 2, 0}, Rational(1));
  mp_add_inplace(region, gram_value(invariant_basis(2, 1), X[bi("S1")]));
  mp_add_inplace(region, mp_mul(gram_value(invariant_basis(1, 1), X[bi("S1m")]), uv2));
  std::vector<MultiPoly<Rational>> w3;
  w3.push_back(mp_mul(lin(1, 0, 0, -1), lin(0, 1, 0, -1)));
  w3.push_back(lin(1, 1, 0, -2));
  MultiPoly<Rational> uv_t2;
  uv_t2.add_term({1, 1, 0}, Rational(1));
  uv_t2.add_term({0, 0, 2}, Rational(-1));
  w3.push_back(uv_t2);
  w3.push_back(lin(1, 1, -2, -1));
  w3.push_back(mp_mul(lin(-1, 0, 0, 4), lin(0, -1, 0, 4)));
  w3.push_back(lin(-1, -1, 0, 8));
  for (int i = 0; i < 6; ++i) {
    const std::string nm = "S" + std::to_string(i + 2);
    mp_add_inplace(region, mp_mul(gram_value(invariant_basis(1, 1), X[bi(nm.c_str())]), w3[i]));
    mp_add_inplace(region, mp_mul(mp_mul(gram_value(invariant_basis(0, 1), X[bi((nm + "m").c_str())]), w3[i]), uv2));
  }
  check_rows_match(prob, X, "region", to_mp(mp_trim_zeros(region)), true, 1e-55);

  // radial part and its transform
  MultiPoly<Rational> p2 = mp_neg(gram_value(uni_basis(3), X[bi("s1")]));
  mp_add_inplace(p2, mp_neg(mp_mul(gram_value(uni_basis(3), X[bi("s2")]), lin(1, 0, 0, -4))));
  RadialFourierOp<MpReal> op(cfg.n, kPrec);
  UniPoly<MpReal> fp2 = op.transform(uni_convert<MpReal>(uni_trim(mp_restrict_axis_u(p2)), kPrec));
  MultiPoly<MpReal> fourier = mp_from_uni(fp2);
  mp_add_inplace(fourier, to_mp(mp_neg(gram_value(uni_basis(4), X[bi("s3")]))));
  mp_add_inplace(fourier,
                 to_mp(mp_neg(mp_mul(gram_value(uni_basis(3), X[bi("s4")]), lin(1, 0, 0, 0)))));
  check_rows_match(prob, X, "fourier", fourier, false, 1e-58);

  // diagonal identity with the Gaussian majorant
  UniPoly<MpReal> T = gaussian_taylor_majorant<MpReal>(4, Rational(1), kPrec);
  MultiPoly<MpReal> diag = to_mp(p2);
  mp_add_inplace(diag, to_mp(mp_from_uni(uni_trim(mp_restrict_axis_u(p3)))));
  mp_add_inplace(diag, to_mp(mp_from_uni(uni_trim(mp_restrict_axis_v(p3)))));
  mp_add_inplace(
      diag, mp_from_uni(uni_mul(uni_convert<MpReal>(uni_trim(mp_restrict_diagonal(p3)), kPrec), T)));
  mp_add_inplace(diag, to_mp(gram_value(uni_basis(prob.blocks[bi("s5")].size), X[bi("s5")])));
  mp_add_inplace(diag, to_mp(mp_mul(gram_value(uni_basis(prob.blocks[bi("s6")].size), X[bi("s6")]),
                                    lin(1, 0, 0, -1))));
  check_rows_match(prob, X, "diagonal", diag, false, 1e-55);

  // objective = candidate pair value at the origin
  MpReal obj = entries_value(prob.objective, X);
  MultiPoly<Rational> at0 = p2;
  mp_add_inplace(at0, p3);
  auto c0 = at0.terms.find(Mono{0, 0, 0});
  MpReal want = c0 == at0.terms.end() ? MpReal::zero(kPrec) : c0->second.to_mpreal(kPrec);
  CHECK(dd(abs(obj - want)) < 1e-58);
}

TEST_CASE("lattice assembly matches its defining identities") {
  LatticeConfig cfg;
  cfg.n = 3;
  cfg.r2 = Rational(1);
  cfg.d = 3;
  cfg.extended = true;
  cfg.precision = kPrec;
  SdpProblem<MpReal> prob = build_lattice<MpReal>(cfg);

  auto X = random_block_matrices(prob.blocks, 37);
  const auto bi = [&](const std::string& name) { return prob.block_index(name); };

  // candidate p as minus the weighted SOS combination
  MultiPoly<Rational> uv2;
  uv2.add_term({2, 0, 0}, Rational(1));
  uv2.add_term({1, 1, 0}, Rational(-2));
  uv2.add_term({0, 2, 0}, Rational(1));
  MultiPoly<Rational> g4;
  g4.add_term({1, 1, 1}, Rational(1));
  g4.add_term({0, 0, 2}, Rational(-1));
  MultiPoly<Rational> g5 = mp_mul(lin(1, 1, 0, -1), lin(1, 1, 0, -1));
  g5.add_term({0, 0, 1}, Rational(-4));
  MultiPoly<Rational> a14 = lin(1, 4, 0, -1), a41 = lin(4, 1, 0, -1);
  MultiPoly<Rational> g5e = mp_mul(a14, a14);
  mp_add_inplace(g5e, mp_mul(a41, a41));
  g5e.add_term({0, 0, 1}, Rational(-32));
  MultiPoly<Rational> q14 = mp_mul(a14, a14);
  q14.add_term({0, 0, 1}, Rational(-16));
  MultiPoly<Rational> q41 = mp_mul(a41, a41);
  q41.add_term({0, 0, 1}, Rational(-16));
  MultiPoly<Rational> g6e = mp_mul(q14, q41);

  struct Term {
    const char* name;
    int g;
    MultiPoly<Rational> w;
  };
  std::vector<Term> terms;
  terms.push_back({"S1", 3, MultiPoly<Rational>::constant(Rational(1))});
  terms.push_back({"S2", 2, mp_mul(lin(1, 0, 0, -1), lin(0, 1, 0, -1))});
  terms.push_back({"S3", 2, lin(1, 1, 0, -2)});
  terms.push_back({"S4", 1, g4});
  terms.push_back({"S5", 2, g5});
  terms.push_back({"E1", 2, g5e});
  terms.push_back({"E2", 1, g6e});

  MultiPoly<Rational> p;
  for (const auto& t : terms) {
    mp_add_inplace(p, mp_neg(mp_mul(gram_value(invariant_basis(t.g, 2), X[bi(t.name)]), t.w)));
    std::string partner = std::string(t.name) + "m";
    if (invariant_basis_size(t.g - 1, 2) > 0)
      mp_add_inplace(p, mp_neg(mp_mul(mp_mul(gram_value(invariant_basis(t.g - 1, 2), X[bi(partner)]), t.w), uv2)));
  }
  p = mp_trim_zeros(p);

  // strata families
  MultiPoly<Rational> diag = mp_from_uni(uni_trim(mp_restrict_diagonal_tsq(p)));
  mp_add_inplace(diag, mp_mul(gram_value(uni_basis(3), X[bi("diag")]), lin(1, 0, 0, -1)));
  check_rows_match(prob, X, "diagonal", to_mp(mp_trim_zeros(diag)), false, 1e-55);

  MultiPoly<Rational> axis = mp_from_uni(uni_trim(mp_restrict_axis_u(p)));
  mp_add_inplace(axis, mp_mul(gram_value(uni_basis(3), X[bi("axis")]), lin(1, 0, 0, -1)));
  check_rows_match(prob, X, "axis", to_mp(mp_trim_zeros(axis)), false, 1e-55);

  // transform family
  LatticeFourierOp<MpReal> op(cfg.n, kPrec);
  MultiPoly<MpReal> fp = op.transform(to_mp(p));
  MultiPoly<MpReal> fourier = fp;
  mp_add_inplace(fourier, to_mp(mp_neg(gram_value(invariant_basis(3, 2), X[bi("F1")]))));
  mp_add_inplace(fourier,
                 to_mp(mp_neg(mp_mul(gram_value(invariant_basis(2, 2), X[bi("F1m")]), uv2))));
  mp_add_inplace(fourier, to_mp(mp_neg(mp_mul(gram_value(invariant_basis(2, 2), X[bi("F2")]),
                                              lin(1, 1, 0, 0)))));
  mp_add_inplace(fourier,
                 to_mp(mp_neg(mp_mul(mp_mul(gram_value(invariant_basis(1, 2), X[bi("F2m")]),
                                            lin(1, 1, 0, 0)),
                                     uv2))));
  mp_add_inplace(fourier,
                 to_mp(mp_neg(mp_mul(gram_value(invariant_basis(2, 2), X[bi("F3")]),
                                     MultiPoly<Rational>::monomial({1, 1, 0}, Rational(1))))));
  mp_add_inplace(fourier,
                 to_mp(mp_neg(mp_mul(mp_mul(gram_value(invariant_basis(1, 2), X[bi("F3m")]),
                                            MultiPoly<Rational>::monomial({1, 1, 0}, Rational(1))),
                                     uv2))));
  mp_add_inplace(fourier, to_mp(mp_neg(mp_mul(gram_value(invariant_basis(1, 2), X[bi("F4")]), g4))));
  mp_add_inplace(fourier,
                 to_mp(mp_neg(mp_mul(mp_mul(gram_value(invariant_basis(0, 2), X[bi("F4m")]), g4), uv2))));
  check_rows_match(prob, X, "fourier", fourier, true, 1e-55);

  // normalization and objective
  int norm_rows = 0;
  for (const auto& row : prob.rows) {
    if (row.label != "normalize") continue;
    ++norm_rows;
    auto it = fp.terms.find(Mono{0, 0, 0});
    MpReal want = it == fp.terms.end() ? MpReal::zero(kPrec) : it->second;
    CHECK(dd(abs(entries_value(row.a, X) - want)) < 1e-55);
  }
  CHECK(norm_rows == 1);

  MpReal obj = entries_value(prob.objective, X);
  auto c0 = p.terms.find(Mono{0, 0, 0});
  MpReal want = c0 == p.terms.end() ? MpReal::zero(kPrec) : c0->second.to_mpreal(kPrec);
  CHECK(dd(abs(obj - want)) < 1e-55);
}

// ---------------------------------------------------------------------------

TEST_CASE("row counts at production sizes") {
  {
    TwoPointConfig cfg;
    cfg.n = 3;
    cfg.d2 = 24;
    SdpProblem<MpReal> prob = build_two_point<MpReal>(cfg);
    CHECK(prob.rows.size() == 50);
    CHECK(prob.blocks.size() == 4);
  }
  {
    ThreePointConfig cfg;
    cfg.n = 3;
    cfg.R2 = Rational(4);
    cfg.d2 = 24;
    cfg.d3 = 6;
    cfg.d_taylor = 24;
    SdpProblem<MpReal> prob = build_truncated_three_point<MpReal>(cfg);
    CHECK(prob.rows.size() == 363);   // 252 region + 49 transform + 61 diagonal + 1
    CHECK(prob.blocks.size() == 32);  // 12 kernel + 14 region + 6 one-variable
  }
  {
    LatticeConfig cfg;
    cfg.n = 3;
    cfg.d = 4;
    SdpProblem<MpReal> prob = build_lattice<MpReal>(cfg);
    CHECK(prob.rows.size() == 74);  // 9 diagonal + 9 axis + 55 transform + 1
    CHECK(prob.blocks.size() == 20);
  }
  {
    LatticeConfig cfg;
    cfg.n = 3;
    cfg.d = 6;
    SdpProblem<MpReal> prob = build_lattice<MpReal>(cfg);
    CHECK(prob.rows.size() == 167);  // 13 + 13 + 140 + 1
  }
  {
    LatticeConfig cfg;
    cfg.n = 3;
    cfg.d = 4;
    cfg.extended = true;
    SdpProblem<MpReal> prob = build_lattice<MpReal>(cfg);
    CHECK(prob.rows.size() == 74);
    CHECK(prob.blocks.size() == 24);
  }
}

TEST_CASE("floating and interval builds share block and row structure") {
  LatticeConfig cfg;
  cfg.n = 4;
  cfg.r2 = Rational(1);
  cfg.d = 3;
  SdpProblem<MpReal> pf = build_lattice<MpReal>(cfg);
  SdpProblem<Interval> pi = build_lattice<Interval>(cfg);

  REQUIRE(pf.blocks.size() == pi.blocks.size());
  for (size_t b = 0; b < pf.blocks.size(); ++b) {
    CHECK(pf.blocks[b].name == pi.blocks[b].name);
    CHECK(pf.blocks[b].size == pi.blocks[b].size);
  }
  REQUIRE(pf.rows.size() == pi.rows.size());
  for (size_t r = 0; r < pf.rows.size(); ++r) {
    CHECK(pf.rows[r].label == pi.rows[r].label);
    REQUIRE(pf.rows[r].a.size() == pi.rows[r].a.size());
    for (size_t k = 0; k < pf.rows[r].a.size(); ++k) {
      const auto& ef = pf.rows[r].a[k];
      const auto& ei = pi.rows[r].a[k];
      CHECK(ef.block == ei.block);
      CHECK(ef.p == ei.p);
      CHECK(ef.q == ei.q);
      CHECK(ei.v.contains(Interval::from_point(ef.v)));
    }
    CHECK(pi.rows[r].rhs.contains(Interval::from_point(pf.rows[r].rhs)));
  }
  REQUIRE(pf.objective.size() == pi.objective.size());
  for (size_t k = 0; k < pf.objective.size(); ++k)
    CHECK(pi.objective[k].v.contains(Interval::from_point(pf.objective[k].v)));
}

// ---------------------------------------------------------------------------

TEST_CASE("density extraction") {
  // lattice: volume * sqrt(value); at value 4, n = 3, r2 = 1 this is pi/3
  MpReal got = extract_density<MpReal>(BoundKind::lattice, mp(4.0), 3, Rational(1), kPrec);
  CHECK(dd(abs(got - MpReal::pi(kPrec) / mp(3.0))) < 1e-70);

  // two-point: volume * value
  MpReal v = mp(0.5);
  MpReal want = half_radius_ball_volume<MpReal>(4, Rational(1), kPrec) * v;
  CHECK(dd(abs(extract_density<MpReal>(BoundKind::two_point, v, 4, Rational(1), kPrec) - want)) <
        1e-70);

  Interval gi = extract_density<Interval>(BoundKind::lattice, Interval::from_long(4, kPrec), 3,
                                          Rational(1), kPrec);
  CHECK(gi.contains(Interval::from_point(got)));
}

TEST_CASE("two-point bound solves and tightens with degree") {
  const double truth = 0.74048;  // densest three-dimensional packing
  double prev = 10.0;
  for (int d2 : {4, 6, 8}) {
    TwoPointConfig cfg;
    cfg.n = 3;
    cfg.r2 = Rational(1);
    cfg.d2 = d2;
    cfg.precision = 192;
    SolveOptions opts;
    opts.gap_tol = 1e-24;
    opts.feas_tol = 1e-20;
    BoundResult res = solve_two_point(cfg, opts);
    REQUIRE(res.solution.ok());
    CHECK(res.solution.status == SolveStatus::optimal);
    double dens = dd(res.density);
    CHECK(dens > truth);
    CHECK(dens < 1.2);
    CHECK(dens <= prev + 1e-9);
    prev = dens;
  }
}

TEST_CASE("lattice bound solves at a small grading") {
  LatticeConfig cfg;
  cfg.n = 3;
  cfg.r2 = Rational(1);
  cfg.d = 3;
  cfg.precision = 192;
  SolveOptions opts;
  opts.gap_tol = 1e-24;
  opts.feas_tol = 1e-20;
  BoundResult res = solve_lattice(cfg, opts);
  REQUIRE(res.solution.ok());
  CHECK(res.value.sign() > 0);
  double dens = dd(res.density);
  CHECK(dens > 0.74048);  // lattice truth in dimension 3
  CHECK(dens < 1.0);
}

TEST_CASE("three-point bound solves at small degrees") {
  ThreePointConfig cfg;
  cfg.n = 3;
  cfg.r2 = Rational(1);
  cfg.R2 = Rational(4);
  cfg.d2 = 4;
  cfg.d3 = 2;
  cfg.d_taylor = 4;
  cfg.precision = 192;
  SolveOptions opts;
  opts.gap_tol = 1e-24;
  opts.feas_tol = 1e-20;
  BoundResult res = solve_truncated_three_point(cfg, opts);
  REQUIRE(res.solution.ok());
  double dens = dd(res.density);
  CHECK(dens > 0.74048);
  CHECK(dens < 1.2);
}

// ---------------------------------------------------------------------------

TEST_CASE("scalar minimization") {
  int evals = 0;
  auto f = [&](double x) {
    ++evals;
    return (x - 1.7) * (x - 1.7) + 0.25;
  };
  double x = brent_minimize(f, 1.0, 3.0, 1e-7, 60);
  CHECK(std::abs(x - 1.7) < 1e-5);
  CHECK(evals <= 60);

  evals = 0;
  auto g = [&](double x) {
    ++evals;
    return std::cos(x);  // minimum at pi within [2, 4]
  };
  x = brent_minimize(g, 2.0, 4.0, 1e-7, 60);
  CHECK(std::abs(x - 3.14159265358979) < 1e-5);

  // monotone function: minimizer pushed to the boundary
  x = brent_minimize([](double x) { return x; }, 0.0, 1.0, 1e-7, 80);
  CHECK(x < 1e-4);

  CHECK_THROWS_AS(brent_minimize([](double x) { return x; }, 1.0, 1.0, 1e-7, 10),
                  std::invalid_argument);
}

TEST_CASE("truncation radius search keeps exact best radius") {
  ThreePointConfig base;
  base.n = 3;
  base.r2 = Rational(1);
  base.d2 = 3;
  base.d3 = 1;
  base.d_taylor = 2;
  base.precision = 192;
  SolveOptions opts;
  opts.gap_tol = 1e-20;
  opts.feas_tol = 1e-16;
  RadiusOptimization ro = optimize_truncation_radius(base, 1.6, 2.6, 0.25, opts, 4);
  REQUIRE(!ro.probes.empty());
  CHECK(ro.probes.size() <= 4);
  double best = 1e9;
  double bestR = 0.0;
  for (const auto& pr : ro.probes) {
    if (pr.density < best) {
      best = pr.density;
      bestR = pr.R;
    }
  }
  CHECK(dd(ro.best.density) == doctest::Approx(best).epsilon(1e-12));
  Rational rr = Rational::from_double(bestR);
  CHECK(ro.R2_best == rr * rr);
  CHECK(ro.best.solution.ok());

  CHECK_THROWS_AS(optimize_truncation_radius(base, 0.5, 2.0, 0.25, opts, 3),
                  std::invalid_argument);
}
