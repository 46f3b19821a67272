#pragma once

// Interior-point solver for block-diagonal semidefinite programs in the
// equality form
//     minimize <C, X>   subject to   <A_i, X> = b_i,   X >= 0 (PSD),
// at arbitrary MPFR precision.  Primal-dual path following with
// Nesterov-Todd scaling and a Mehrotra predictor-corrector; when the
// objective is identically zero the solver switches to pure centering and
// returns a well-centered strictly feasible point instead of an optimizer.
//
// Before iterating, two structural passes run:
//  * forced-zero elimination: an equality row with zero right-hand side
//    whose support is a set of same-sign diagonal coefficients forces those
//    diagonal entries (hence their rows/columns) to vanish in every feasible
//    point; such indices are removed exactly, and the pass iterates to a
//    fixpoint.  Without this the problem has no interior and the central
//    path does not exist.
//  * equilibration: rows and block indices are rescaled by exact powers of
//    two (a diagonal congruence per block) so coefficient magnitudes are
//    near one; polynomial transform tables otherwise produce entries
//    spanning hundreds of orders of magnitude.
//  * dependent-row prefilter: a pivoted Cholesky factorization of the
//    normalized row Gram matrix, at working precision, flags linearly
//    dependent rows, which are dropped before the Schur complement is
//    formed (it would otherwise be singular).  Dropped rows are verified
//    against the solution afterwards.
//
// Solutions are reported in the coordinates of the *original* problem:
// removed rows/columns are re-embedded as exact zeros and removed rows get
// dual multipliers from an adaptive lift that restores dual slack
// positive-definiteness when possible.

#include <iosfwd>
#include <string>
#include <vector>

#include "packing/linalg.hpp"
#include "packing/sosmodel.hpp"

namespace packing {

struct SolveOptions {
  Prec precision = 256;
  int max_iterations = 300;
  double gap_tol = 1e-30;   // relative duality gap
  double feas_tol = 1e-28;  // relative primal/dual residuals
  bool verbose = false;
  std::ostream* log = nullptr;  // iteration log sink when verbose
};

enum class SolveStatus {
  optimal,
  feasible_point,   // centering mode: strictly feasible, well centered
  max_iterations,
  numerical_trouble,
  infeasible,       // an equality row became 0 == nonzero during presolve
};

const char* to_string(SolveStatus s);

struct Solution {
  SolveStatus status = SolveStatus::numerical_trouble;
  std::vector<Matrix<MpReal>> X;  // per block, original shapes
  std::vector<Matrix<MpReal>> S;
  std::vector<MpReal> y;          // per original row
  MpReal primal_obj, dual_obj, mu;
  MpReal rel_gap, primal_res, dual_res;  // recomputed on the original data
  int iterations = 0;
  std::vector<std::string> notes;

  bool ok() const {
    return status == SolveStatus::optimal || status == SolveStatus::feasible_point;
  }
};

Solution solve_sdp(const SdpProblem<MpReal>& prob, const SolveOptions& opt);

// ---------------------------------------------------------------------------
// structural passes (exposed for tests and for the certification pipeline)

// keep[b] lists the retained indices of block b, ascending
template <class K>
struct Reduction {
  SdpProblem<K> reduced;
  std::vector<std::vector<int>> keep;
  std::vector<int> kept_rows;     // original row ids, ascending
  std::vector<int> removed_rows;  // original row ids whose support vanished
  bool removed_row_rhs_nonzero = false;  // a removed row had rhs != exact 0
  std::string first_bad_row_label;
};

// drop the listed indices from every block; rows whose support disappears
// are removed when their right-hand side is an exact zero
template <class K>
Reduction<K> reduce_problem(const SdpProblem<K>& prob, const std::vector<std::vector<int>>& keep);

extern template Reduction<MpReal> reduce_problem<MpReal>(const SdpProblem<MpReal>&,
                                                         const std::vector<std::vector<int>>&);
extern template Reduction<Interval> reduce_problem<Interval>(const SdpProblem<Interval>&,
                                                             const std::vector<std::vector<int>>&);

struct ForcedZeros {
  std::vector<std::vector<int>> keep;          // per block, surviving indices
  std::vector<std::pair<int, int>> forced;     // (block, index) removed
  std::vector<int> certifying_row;             // aligned with forced
  bool infeasible = false;
  std::string infeasible_label;
  std::vector<std::string> notes;
};

ForcedZeros detect_forced_zeros(const SdpProblem<MpReal>& prob);

// rows kept by a working-precision pivoted Cholesky of the normalized row
// Gram matrix (svec coordinates); ascending original ids
std::vector<int> independent_rows_prefilter(const SdpProblem<MpReal>& prob);

// pin the objective to the given value as an extra equality and clear it;
// solving the result yields a strictly feasible point of the level set
SdpProblem<MpReal> restrict_to_feasibility(const SdpProblem<MpReal>& prob, const MpReal& target);

// diagonal entries that are numerically zero at a solution, relative to the
// average diagonal of their block
std::vector<std::vector<int>> zero_diagonal_keep_lists(const SdpProblem<MpReal>& prob,
                                                       const std::vector<Matrix<MpReal>>& X,
                                                       double rel_threshold = 1e-3);

// re-embed a reduced block matrix into original coordinates (zeros elsewhere)
Matrix<MpReal> embed_matrix(const Matrix<MpReal>& reduced, const std::vector<int>& keep,
                            int full_size, Prec prec);

}  // namespace packing
