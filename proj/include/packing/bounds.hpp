#pragma once

// Assembly of the three packing-bound semidefinite programs.
//
// Each bound exhibits auxiliary functions of the shape polynomial times
// Gaussian whose sign conditions are enforced by weighted sums of squares;
// the polynomial coefficient matching becomes the equality rows of an SDP in
// Gram-matrix variables.  This header exposes
//   * the three problem builders, templated on the coefficient scalar so the
//     identical construction runs in floating point and, for certification,
//     in interval arithmetic (the emitted block/row structure is the same),
//   * exact membership predicates for the constraint regions, used by the
//     tests to validate the multiplier weights,
//   * the map from an optimal objective value to a packing-density bound,
//   * solve drivers and a derivative-free search over the truncation radius
//     of the three-point bound.

#include <functional>
#include <string>
#include <vector>

#include "packing/poly.hpp"
#include "packing/rational.hpp"
#include "packing/solver.hpp"
#include "packing/sosmodel.hpp"

namespace packing {

// volume of the ball of radius sqrt(r2)/2 in R^n
template <class K>
K half_radius_ball_volume(int n, const Rational& r2, Prec prec);

// Even-degree Taylor polynomial of exp(-pi u) about u = r2.  Even truncations
// of the exponential series lie above the exponential on the far side of the
// expansion point, so the returned polynomial majorizes exp(-pi u) for every
// u >= r2, the only range where the diagonal constraint uses it.
template <class K>
UniPoly<K> gaussian_taylor_majorant(int degree, const Rational& r2, Prec prec);

// --- constraint regions ----------------------------------------------------
// A pair of points is described by u = |x|^2, v = |y|^2 and the inner
// product s = <x,y>, all exact.  Realizability in R^n (n >= 2) means the
// 2x2 Gram matrix [[u, s], [s, v]] is positive semidefinite.

bool gram_realizable(const Rational& u, const Rational& v, const Rational& s);

// |x| >= sqrt(r2)
bool two_point_region_contains(const Rational& u, const Rational& r2);

// sqrt(r2) <= |x|, |y| <= sqrt(R2) and |x - y| >= sqrt(r2), realizable
bool three_point_region_contains(const Rational& u, const Rational& v, const Rational& s,
                                 const Rational& r2, const Rational& R2);

// |x|, |y|, |x+y|, |x-y| each zero or >= sqrt(r2), realizable, and not the
// origin pair
bool lattice_region_contains(const Rational& u, const Rational& v, const Rational& s,
                             const Rational& r2);

// --- problem configurations --------------------------------------------------

struct TwoPointConfig {
  int n = 3;
  Rational r2 = Rational(1);  // squared separation radius
  int d2 = 8;                 // SOS multipliers use bases 1, u, ..., u^(d2-1)
  Prec precision = 256;
};

// Weight of the trailing multiplier in the diagonal constraint family:
// half_line enforces it on all u >= r2, segment only on r2 <= u <= R2.
enum class DiagonalWeight { half_line, segment };

struct ThreePointConfig {
  int n = 3;
  Rational r2 = Rational(1);
  Rational R2 = Rational(4);  // squared truncation radius
  int d2 = 8;                 // radial part degree budget (as in TwoPointConfig)
  int d3 = 3;                 // kernel block degree budget
  int d_taylor = 8;           // half-degree of the Gaussian majorant
  DiagonalWeight diag_weight = DiagonalWeight::half_line;
  Prec precision = 256;
};

struct LatticeConfig {
  int n = 3;
  Rational r2 = Rational(1);
  int d = 4;              // grading budget: multipliers reach grading 2d
  bool extended = false;  // add the two extra region multipliers
  Prec precision = 256;
};

template <class K>
SdpProblem<K> build_two_point(const TwoPointConfig& cfg);
template <class K>
SdpProblem<K> build_truncated_three_point(const ThreePointConfig& cfg);
template <class K>
SdpProblem<K> build_lattice(const LatticeConfig& cfg);

// --- density extraction ------------------------------------------------------

enum class BoundKind { two_point, three_point, lattice };

std::string to_string(BoundKind k);

// objective optimum -> packing density bound: ball volume times the value for
// the two- and three-point programs, ball volume times sqrt(value) for the
// lattice program
template <class K>
K extract_density(BoundKind kind, const K& value, int n, const Rational& r2, Prec prec);

// --- solve drivers -----------------------------------------------------------

struct BoundResult {
  Solution solution;
  MpReal value;    // objective optimum as reported by the solver
  MpReal density;  // derived packing-density bound
  int rows = 0;
  std::vector<BlockInfo> blocks;
  double wall_time_s = 0.0;
};

BoundResult solve_two_point(const TwoPointConfig& cfg, const SolveOptions& opts = {});
BoundResult solve_truncated_three_point(const ThreePointConfig& cfg, const SolveOptions& opts = {});
BoundResult solve_lattice(const LatticeConfig& cfg, const SolveOptions& opts = {});

// --- truncation radius search ------------------------------------------------

// Derivative-free scalar minimization (golden section with parabolic steps)
// on [lo, hi]; stops when the bracket around the minimizer shrinks below
// xtol or after max_evals function evaluations.
double brent_minimize(const std::function<double(double)>& f, double lo, double hi, double xtol,
                      int max_evals);

struct RadiusProbe {
  double R = 0.0;
  double density = 0.0;
};

struct RadiusOptimization {
  Rational R2_best;
  BoundResult best;  // full result at the best probed radius
  std::vector<RadiusProbe> probes;
};

// Minimizes the three-point density bound over the truncation radius
// R in [R_lo, R_hi]; every probe solves the full program with base's
// remaining parameters.  Probed radii are exact dyadic rationals, so the
// best configuration can be rebuilt bit for bit.
RadiusOptimization optimize_truncation_radius(const ThreePointConfig& base, double R_lo,
                                              double R_hi, double xtol,
                                              const SolveOptions& opts = {}, int max_evals = 24);

}  // namespace packing
