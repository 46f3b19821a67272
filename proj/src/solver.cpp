#include "packing/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>

namespace packing {

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::optimal: return "optimal";
    case SolveStatus::feasible_point: return "feasible_point";
    case SolveStatus::max_iterations: return "max_iterations";
    case SolveStatus::numerical_trouble: return "numerical_trouble";
    case SolveStatus::infeasible: return "infeasible";
  }
  return "unknown";
}

namespace {

struct SEntry {
  int p, q;  // p >= q
  MpReal v;
};
using SMat = std::vector<SEntry>;

// <A, M> in the matrix-entry convention (off-diagonals count twice)
MpReal dot_sym(const SMat& a, const Matrix<MpReal>& M, Prec prec) {
  MpReal acc = MpReal::zero(prec);
  for (const auto& e : a) {
    acc.add_mul(e.v, M(e.p, e.q));
    if (e.p != e.q) acc.add_mul(e.v, M(e.q, e.p));
  }
  return acc;
}

void add_scaled_sym(Matrix<MpReal>& M, const SMat& a, const MpReal& c) {
  for (const auto& e : a) {
    M(e.p, e.q).add_mul(c, e.v);
    if (e.p != e.q) M(e.q, e.p).add_mul(c, e.v);
  }
}

Matrix<MpReal> zeros(int r, int c, Prec prec) { return Matrix<MpReal>(r, c, MpReal::zero(prec)); }

// W * A * W for sparse symmetric A: U = A W costs nnz * s, then one dense
// product; the result is symmetrized to wash out rounding skew
Matrix<MpReal> sandwich_sparse(const Matrix<MpReal>& W, const SMat& a, Prec prec) {
  const int s = W.rows();
  Matrix<MpReal> U = zeros(s, s, prec);
  for (const auto& e : a) {
    for (int j = 0; j < s; ++j) U(e.p, j).add_mul(e.v, W(e.q, j));
    if (e.p != e.q)
      for (int j = 0; j < s; ++j) U(e.q, j).add_mul(e.v, W(e.p, j));
  }
  Matrix<MpReal> T = matmul(W, U);
  MpReal half = MpReal::from_long(1, prec) / MpReal::from_long(2, prec);
  for (int i = 0; i < s; ++i)
    for (int j = i + 1; j < s; ++j) {
      MpReal m = (T(i, j) + T(j, i)) * half;
      T(i, j) = m;
      T(j, i) = m;
    }
  return T;
}

Matrix<MpReal> sandwich_dense(const Matrix<MpReal>& W, const Matrix<MpReal>& R) {
  return matmul(matmul(W, R), W);
}

MpReal trace_product(const Matrix<MpReal>& A, const Matrix<MpReal>& B, Prec prec) {
  MpReal acc = MpReal::zero(prec);
  const int s = A.rows();
  for (int i = 0; i < s; ++i)
    for (int j = 0; j < s; ++j) acc.add_mul(A(i, j), B(j, i));
  return acc;
}

// largest alpha with X + alpha D >= 0, via lambda_min of L^-1 D L^-T
double max_step(const Matrix<MpReal>& L, const Matrix<MpReal>& D) {
  const int s = L.rows();
  if (s == 0) return 1e30;
  Matrix<MpReal> Z = forward_subst_matrix(L, D);
  Matrix<MpReal> B = transpose(forward_subst_matrix(L, transpose(Z)));
  const Prec prec = L(0, 0).prec();
  MpReal half = MpReal::from_long(1, prec) / MpReal::from_long(2, prec);
  for (int i = 0; i < s; ++i)
    for (int j = i + 1; j < s; ++j) {
      MpReal m = (B(i, j) + B(j, i)) * half;
      B(i, j) = m;
      B(j, i) = m;
    }
  std::vector<MpReal> ev;
  jacobi_eigen(B, ev);
  MpReal lmin = ev[0];
  for (const auto& e : ev) lmin = min(lmin, e);
  double lm = lmin.to_double();
  if (lm >= 0) return 1e30;
  return -1.0 / lm;
}

struct BlockData {
  int size = 0;
  std::vector<int> rows;       // row ids with support in this block
  std::vector<SMat> mats;      // aligned with rows
  SMat cobj;
};

struct CoreResult {
  SolveStatus status = SolveStatus::numerical_trouble;
  std::vector<Matrix<MpReal>> X, S;
  std::vector<MpReal> y;
  MpReal pobj, dobj, mu, rel_gap, primal_res, dual_res;
  int iterations = 0;
  std::vector<std::string> notes;
};

// IPM on a problem that is assumed strictly feasible with independent rows
CoreResult solve_core(const SdpProblem<MpReal>& prob, const SolveOptions& opt) {
  const Prec prec = opt.precision;
  const int nb = static_cast<int>(prob.blocks.size());
  const int m = static_cast<int>(prob.rows.size());

  CoreResult res;
  res.pobj = MpReal::zero(prec);
  res.dobj = MpReal::zero(prec);
  res.mu = MpReal::zero(prec);
  res.rel_gap = MpReal::zero(prec);
  res.primal_res = MpReal::zero(prec);
  res.dual_res = MpReal::zero(prec);

  std::vector<BlockData> bd(static_cast<size_t>(nb));
  int ntot = 0;
  for (int b = 0; b < nb; ++b) {
    bd[static_cast<size_t>(b)].size = prob.blocks[static_cast<size_t>(b)].size;
    ntot += prob.blocks[static_cast<size_t>(b)].size;
  }
  for (int i = 0; i < m; ++i) {
    // split the row into per-block sparse pieces
    std::vector<SMat> pieces(static_cast<size_t>(nb));
    for (const auto& e : prob.rows[static_cast<size_t>(i)].a)
      pieces[static_cast<size_t>(e.block)].push_back({e.p, e.q, MpReal::rounded(e.v, prec)});
    for (int b = 0; b < nb; ++b)
      if (!pieces[static_cast<size_t>(b)].empty()) {
        bd[static_cast<size_t>(b)].rows.push_back(i);
        bd[static_cast<size_t>(b)].mats.push_back(std::move(pieces[static_cast<size_t>(b)]));
      }
  }
  for (const auto& e : prob.objective)
    bd[static_cast<size_t>(e.block)].cobj.push_back({e.p, e.q, MpReal::rounded(e.v, prec)});

  std::vector<MpReal> bvec;
  bvec.reserve(static_cast<size_t>(m));
  for (const auto& r : prob.rows) bvec.push_back(MpReal::rounded(r.rhs, prec));

  bool centering = prob.objective.empty();

  MpReal bmax = inf_norm(bvec);
  MpReal cmax = MpReal::zero(prec);
  for (const auto& b : bd)
    for (const auto& e : b.cobj) cmax = max(cmax, abs(e.v));
  MpReal rho = MpReal::from_long(10, prec) * max(MpReal::one(prec), max(bmax, cmax));

  std::vector<Matrix<MpReal>> C;
  for (int b = 0; b < nb; ++b) {
    const int s = bd[static_cast<size_t>(b)].size;
    Matrix<MpReal> Cb = zeros(s, s, prec);
    add_scaled_sym(Cb, bd[static_cast<size_t>(b)].cobj, MpReal::one(prec));
    C.push_back(std::move(Cb));
  }

  // The start X = S = rho I must be large enough that the first Newton
  // correction fits inside the cone; otherwise the step length collapses and
  // the residuals never move.  At X = S = rho I (so W = I, y = 0) the
  // direction is affine in rho:  dX = dX0 - rho P  with  P a projection and
  // dS0 = -dX0, so sizing rho against ||dX0|| bounds the relative direction
  // by a constant.
  if (m > 0 && ntot > 0) {
    Matrix<MpReal> M0 = zeros(m, m, prec);
    for (int b = 0; b < nb; ++b) {
      const auto& blk = bd[static_cast<size_t>(b)];
      if (blk.size == 0) continue;
      Matrix<MpReal> Ib = identity_like(blk.size, MpReal::one(prec));
      for (size_t kj = 0; kj < blk.rows.size(); ++kj) {
        Matrix<MpReal> T = sandwich_sparse(Ib, blk.mats[kj], prec);
        for (size_t ki = kj; ki < blk.rows.size(); ++ki)
          M0(blk.rows[ki], blk.rows[kj]) += dot_sym(blk.mats[ki], T, prec);
      }
    }
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j) M0(i, j) = M0(j, i);
    if (auto L0 = cholesky_lower(M0)) {
      std::vector<MpReal> rhs0(static_cast<size_t>(m));
      for (int i = 0; i < m; ++i) rhs0[static_cast<size_t>(i)] = bvec[static_cast<size_t>(i)];
      for (int b = 0; b < nb; ++b) {
        const auto& blk = bd[static_cast<size_t>(b)];
        for (size_t k = 0; k < blk.rows.size(); ++k)
          rhs0[static_cast<size_t>(blk.rows[k])] +=
              dot_sym(blk.mats[k], C[static_cast<size_t>(b)], prec);
      }
      std::vector<MpReal> dy0 = cholesky_solve(*L0, rhs0);
      MpReal nrm2 = MpReal::zero(prec);
      for (int b = 0; b < nb; ++b) {
        const auto& blk = bd[static_cast<size_t>(b)];
        Matrix<MpReal> dX0 = C[static_cast<size_t>(b)];
        for (auto& x : dX0.data()) x = -x;
        for (size_t k = 0; k < blk.rows.size(); ++k)
          add_scaled_sym(dX0, blk.mats[k], dy0[static_cast<size_t>(blk.rows[k])]);
        for (const auto& x : dX0.data()) nrm2.add_mul(x, x);
      }
      MpReal needed = MpReal::from_long(4, prec) * sqrt(nrm2) /
                      sqrt(MpReal::from_long(ntot, prec));
      rho = max(rho, needed);
    }
  }
  if (const char* env = std::getenv("PACKING_RHO"))
    rho = max(rho, MpReal::from_double(std::atof(env), prec));

  std::vector<Matrix<MpReal>> X, S;
  std::vector<MpReal> y(static_cast<size_t>(m), MpReal::zero(prec));
  for (int b = 0; b < nb; ++b) {
    const int s = bd[static_cast<size_t>(b)].size;
    Matrix<MpReal> I = zeros(s, s, prec);
    for (int i = 0; i < s; ++i) I(i, i) = rho;
    X.push_back(I);
    S.push_back(I);
  }

  const MpReal one = MpReal::one(prec);
  const MpReal half = one / MpReal::from_long(2, prec);
  double dir_rel_prev = 1.0;

  auto fail = [&](const std::string& why) {
    res.notes.push_back(why);
    res.status = SolveStatus::numerical_trouble;
    res.X = X;
    res.S = S;
    res.y = y;
    return res;
  };

  for (int it = 1; it <= opt.max_iterations; ++it) {
    res.iterations = it;

    // factor the current iterates
    std::vector<Matrix<MpReal>> Lx, Rs;
    for (int b = 0; b < nb; ++b) {
      auto lx = cholesky_lower(X[static_cast<size_t>(b)]);
      auto rs = cholesky_lower(S[static_cast<size_t>(b)]);
      if (!lx || !rs) return fail("iterate lost positive definiteness");
      Lx.push_back(std::move(*lx));
      Rs.push_back(std::move(*rs));
    }

    // Nesterov-Todd scaling per block: W S W = X
    MpReal xs_min = MpReal::from_double(std::numeric_limits<double>::infinity(), prec);
    MpReal xs_max = MpReal::zero(prec);
    std::vector<Matrix<MpReal>> W, G, Ginv, Sinv;
    for (int b = 0; b < nb; ++b) {
      const int s = bd[static_cast<size_t>(b)].size;
      if (s == 0) {
        W.emplace_back();
        G.emplace_back();
        Ginv.emplace_back();
        Sinv.emplace_back();
        continue;
      }
      Matrix<MpReal> I = identity_like(s, one);
      Matrix<MpReal> Lxinv = forward_subst_matrix(Lx[static_cast<size_t>(b)], I);
      Matrix<MpReal> Rsinv = forward_subst_matrix(Rs[static_cast<size_t>(b)], I);
      Sinv.push_back(matmul_AtB(Rsinv, Rsinv));

      Matrix<MpReal> Mns = matmul_AtB(Rs[static_cast<size_t>(b)], Lx[static_cast<size_t>(b)]);
      Matrix<MpReal> B = matmul_AtB(Mns, Mns);
      std::vector<MpReal> lam;
      Matrix<MpReal> V;
      jacobi_eigen(B, lam, &V);
      for (const auto& l : lam) {
        if (l.sign() <= 0) return fail("scaling spectrum collapsed");
        xs_min = min(xs_min, l);
        xs_max = max(xs_max, l);
      }

      Matrix<MpReal> Gb = matmul(Lx[static_cast<size_t>(b)], V);
      std::vector<MpReal> lam_q;  // lambda^(1/4)
      for (const auto& l : lam) lam_q.push_back(sqrt(sqrt(l)));
      for (int j = 0; j < s; ++j) {
        MpReal inv_q = one / lam_q[static_cast<size_t>(j)];
        for (int i = 0; i < s; ++i) Gb(i, j) *= inv_q;
      }
      Matrix<MpReal> Gib = matmul_AtB(V, Lxinv);
      for (int i = 0; i < s; ++i)
        for (int j = 0; j < s; ++j) Gib(i, j) *= lam_q[static_cast<size_t>(i)];
      W.push_back(matmul_ABt(Gb, Gb));
      G.push_back(std::move(Gb));
      Ginv.push_back(std::move(Gib));
    }

    // residuals, objective values, barrier parameter
    MpReal xs = MpReal::zero(prec);
    for (int b = 0; b < nb; ++b)
      xs += trace_product(X[static_cast<size_t>(b)], S[static_cast<size_t>(b)], prec);
    MpReal mu = ntot > 0 ? xs / MpReal::from_long(ntot, prec) : MpReal::zero(prec);

    std::vector<MpReal> rp(bvec);
    for (int b = 0; b < nb; ++b)
      for (size_t k = 0; k < bd[static_cast<size_t>(b)].rows.size(); ++k)
        rp[static_cast<size_t>(bd[static_cast<size_t>(b)].rows[k])] -=
            dot_sym(bd[static_cast<size_t>(b)].mats[k], X[static_cast<size_t>(b)], prec);

    std::vector<Matrix<MpReal>> Rd;
    MpReal rd_max = MpReal::zero(prec);
    for (int b = 0; b < nb; ++b) {
      Matrix<MpReal> R = C[static_cast<size_t>(b)];
      const int s = bd[static_cast<size_t>(b)].size;
      for (int i = 0; i < s; ++i)
        for (int j = 0; j < s; ++j) R(i, j) -= S[static_cast<size_t>(b)](i, j);
      for (size_t k = 0; k < bd[static_cast<size_t>(b)].rows.size(); ++k)
        add_scaled_sym(R, bd[static_cast<size_t>(b)].mats[k],
                       -y[static_cast<size_t>(bd[static_cast<size_t>(b)].rows[k])]);
      for (const auto& x : R.data()) rd_max = max(rd_max, abs(x));
      Rd.push_back(std::move(R));
    }

    MpReal pobj = MpReal::zero(prec);
    for (int b = 0; b < nb; ++b)
      pobj += dot_sym(bd[static_cast<size_t>(b)].cobj, X[static_cast<size_t>(b)], prec);
    MpReal dobj = MpReal::zero(prec);
    for (int i = 0; i < m; ++i) dobj.add_mul(bvec[static_cast<size_t>(i)], y[static_cast<size_t>(i)]);

    MpReal rp_rel = inf_norm(rp) / (one + bmax);
    MpReal rd_rel = rd_max / (one + cmax);
    MpReal gap_den = one + max(abs(pobj), abs(dobj));
    MpReal rel_gap = abs(pobj - dobj) / gap_den;

    res.pobj = pobj;
    res.dobj = dobj;
    res.mu = mu;
    res.rel_gap = rel_gap;
    res.primal_res = rp_rel;
    res.dual_res = rd_rel;

    if (opt.verbose && opt.log) {
      *opt.log << "it " << it << "  mu " << mu.to_double() << "  gap " << rel_gap.to_double()
               << "  rp " << rp_rel.to_double() << "  rd " << rd_rel.to_double() << "  xs/mu ["
               << (xs_min / mu).to_double() << ", " << (xs_max / mu).to_double() << "]  pobj "
               << pobj.to_double() << "  dobj " << dobj.to_double() << "  |y| "
               << inf_norm(y).to_double() << "\n";
    }

    const double ftol = opt.feas_tol;
    bool feas_ok = rp_rel.to_double() <= ftol && rd_rel.to_double() <= ftol;
    if (!centering && feas_ok && rel_gap.to_double() <= opt.gap_tol) {
      res.status = SolveStatus::optimal;
      res.X = X;
      res.S = S;
      res.y = y;
      return res;
    }
    if (centering && feas_ok && dir_rel_prev <= 1e-10) {
      res.status = SolveStatus::feasible_point;
      res.X = X;
      res.S = S;
      res.y = y;
      return res;
    }

    // Schur complement M_ij = tr(A_i W A_j W), assembled per block
    Matrix<MpReal> Msc = zeros(m, m, prec);
    for (int b = 0; b < nb; ++b) {
      const auto& blk = bd[static_cast<size_t>(b)];
      for (size_t kj = 0; kj < blk.rows.size(); ++kj) {
        Matrix<MpReal> T = sandwich_sparse(W[static_cast<size_t>(b)], blk.mats[kj], prec);
        for (size_t ki = kj; ki < blk.rows.size(); ++ki) {
          MpReal v = dot_sym(blk.mats[ki], T, prec);
          Msc(blk.rows[ki], blk.rows[kj]) += v;
        }
      }
    }
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j) Msc(i, j) = Msc(j, i);
    auto Lm = cholesky_lower(Msc);
    if (!Lm) return fail("Schur complement not positive definite (dependent rows?)");

    // A(W Rd W) is shared by both solves
    std::vector<MpReal> a_wrdw(static_cast<size_t>(m), MpReal::zero(prec));
    for (int b = 0; b < nb; ++b) {
      const auto& blk = bd[static_cast<size_t>(b)];
      if (blk.size == 0 || blk.rows.empty()) continue;
      Matrix<MpReal> P = sandwich_dense(W[static_cast<size_t>(b)], Rd[static_cast<size_t>(b)]);
      for (size_t k = 0; k < blk.rows.size(); ++k)
        a_wrdw[static_cast<size_t>(blk.rows[k])] += dot_sym(blk.mats[k], P, prec);
    }

    auto solve_direction = [&](const std::vector<Matrix<MpReal>>& Rcx)
        -> std::tuple<std::vector<MpReal>, std::vector<Matrix<MpReal>>, std::vector<Matrix<MpReal>>> {
      std::vector<MpReal> rhs(static_cast<size_t>(m));
      for (int i = 0; i < m; ++i)
        rhs[static_cast<size_t>(i)] = rp[static_cast<size_t>(i)] + a_wrdw[static_cast<size_t>(i)];
      for (int b = 0; b < nb; ++b) {
        const auto& blk = bd[static_cast<size_t>(b)];
        for (size_t k = 0; k < blk.rows.size(); ++k)
          rhs[static_cast<size_t>(blk.rows[k])] -=
              dot_sym(blk.mats[k], Rcx[static_cast<size_t>(b)], prec);
      }
      std::vector<MpReal> dy = cholesky_solve(*Lm, rhs);
      std::vector<Matrix<MpReal>> dS, dX;
      for (int b = 0; b < nb; ++b) {
        const auto& blk = bd[static_cast<size_t>(b)];
        Matrix<MpReal> dSb = Rd[static_cast<size_t>(b)];
        for (size_t k = 0; k < blk.rows.size(); ++k)
          add_scaled_sym(dSb, blk.mats[k], -dy[static_cast<size_t>(blk.rows[k])]);
        Matrix<MpReal> dXb = Rcx[static_cast<size_t>(b)];
        if (blk.size > 0) {
          Matrix<MpReal> WdSW = sandwich_dense(W[static_cast<size_t>(b)], dSb);
          for (int i = 0; i < blk.size; ++i)
            for (int j = 0; j < blk.size; ++j) dXb(i, j) -= WdSW(i, j);
        }
        dS.push_back(std::move(dSb));
        dX.push_back(std::move(dXb));
      }
      return {std::move(dy), std::move(dX), std::move(dS)};
    };

    MpReal sigma = one;
    std::vector<Matrix<MpReal>> Rq;  // second-order correction, optimization mode only
    if (!centering) {
      // affine predictor: Rcx = -X
      std::vector<Matrix<MpReal>> Rcx_aff;
      for (int b = 0; b < nb; ++b) {
        Matrix<MpReal> Rb = X[static_cast<size_t>(b)];
        for (auto& x : Rb.data()) x = -x;
        Rcx_aff.push_back(std::move(Rb));
      }
      auto [dy_a, dX_a, dS_a] = solve_direction(Rcx_aff);

      double ap = 1.0, ad = 1.0;
      for (int b = 0; b < nb; ++b) {
        if (bd[static_cast<size_t>(b)].size == 0) continue;
        ap = std::min(ap, 0.99 * max_step(Lx[static_cast<size_t>(b)], dX_a[static_cast<size_t>(b)]));
        ad = std::min(ad, 0.99 * max_step(Rs[static_cast<size_t>(b)], dS_a[static_cast<size_t>(b)]));
      }
      MpReal apm = MpReal::from_double(ap, prec), adm = MpReal::from_double(ad, prec);
      MpReal xs_aff = MpReal::zero(prec);
      for (int b = 0; b < nb; ++b) {
        xs_aff += trace_product(X[static_cast<size_t>(b)], S[static_cast<size_t>(b)], prec);
        xs_aff += apm * trace_product(dX_a[static_cast<size_t>(b)], S[static_cast<size_t>(b)], prec);
        xs_aff += adm * trace_product(X[static_cast<size_t>(b)], dS_a[static_cast<size_t>(b)], prec);
        xs_aff +=
            apm * adm * trace_product(dX_a[static_cast<size_t>(b)], dS_a[static_cast<size_t>(b)], prec);
      }
      MpReal mu_aff = ntot > 0 ? xs_aff / MpReal::from_long(ntot, prec) : MpReal::zero(prec);
      MpReal ratio = mu_aff / mu;
      if (ratio.sign() < 0) ratio = MpReal::zero(prec);
      sigma = ratio * ratio * ratio;
      double sd = sigma.to_double();
      if (sd > 1.0) sigma = one;
      if (sd < 1e-12) sigma = MpReal::from_double(1e-12, prec);

      // The second-order term is quadratic in the affine direction, so when
      // the affine step is short it swamps the system and the next step
      // collapses too.  Damp it by the realized affine progress and lean on
      // centering instead when the predictor barely moves.
      double aff_prog = ap * ad;
      if (std::min(ap, ad) < 0.05) {
        aff_prog = 0.0;
        if (sigma.to_double() < 0.5) sigma = MpReal::from_double(0.5, prec);
      }
      MpReal damp = MpReal::from_double(aff_prog, prec);

      // Mehrotra second-order term in the scaled space
      if (aff_prog > 0.0)
        for (int b = 0; b < nb; ++b) {
          const int s = bd[static_cast<size_t>(b)].size;
          if (s == 0) {
            Rq.emplace_back();
            continue;
          }
          Matrix<MpReal> dxh = matmul_ABt(matmul(Ginv[static_cast<size_t>(b)], dX_a[static_cast<size_t>(b)]),
                                          Ginv[static_cast<size_t>(b)]);
          Matrix<MpReal> dsh = matmul(
              matmul_AtB(G[static_cast<size_t>(b)], dS_a[static_cast<size_t>(b)]), G[static_cast<size_t>(b)]);
          Matrix<MpReal> H = matmul(dxh, dsh);
          Matrix<MpReal> H2 = matmul(dsh, dxh);
          for (int i = 0; i < s; ++i)
            for (int j = 0; j < s; ++j) H(i, j) = (H(i, j) + H2(i, j)) * half * damp;
          Rq.push_back(matmul_ABt(matmul(G[static_cast<size_t>(b)], H), G[static_cast<size_t>(b)]));
        }
    }

    // corrector (or pure centering) right-hand side
    std::vector<Matrix<MpReal>> Rcx;
    MpReal smu = sigma * mu;
    for (int b = 0; b < nb; ++b) {
      const int s = bd[static_cast<size_t>(b)].size;
      Matrix<MpReal> Rb = zeros(s, s, prec);
      for (int i = 0; i < s; ++i)
        for (int j = 0; j < s; ++j) {
          Rb(i, j) = smu * Sinv[static_cast<size_t>(b)](i, j) - X[static_cast<size_t>(b)](i, j);
          if (!Rq.empty()) Rb(i, j) -= Rq[static_cast<size_t>(b)](i, j);
        }
      Rcx.push_back(std::move(Rb));
    }
    auto [dy, dX, dS] = solve_direction(Rcx);

    double gamma = (!centering && rel_gap.to_double() < 1e-8) ? 0.99 : 0.9;
    double ap = 1.0, ad = 1.0;
    for (int b = 0; b < nb; ++b) {
      if (bd[static_cast<size_t>(b)].size == 0) continue;
      ap = std::min(ap, gamma * max_step(Lx[static_cast<size_t>(b)], dX[static_cast<size_t>(b)]));
      ad = std::min(ad, gamma * max_step(Rs[static_cast<size_t>(b)], dS[static_cast<size_t>(b)]));
    }

    // apply with backtracking in case the eigenvalue-based step was optimistic
    auto try_step = [&](double alpha, bool primal) -> bool {
      MpReal am = MpReal::from_double(alpha, prec);
      for (int b = 0; b < nb; ++b) {
        const int s = bd[static_cast<size_t>(b)].size;
        Matrix<MpReal> T = primal ? X[static_cast<size_t>(b)] : S[static_cast<size_t>(b)];
        const Matrix<MpReal>& D = primal ? dX[static_cast<size_t>(b)] : dS[static_cast<size_t>(b)];
        for (int i = 0; i < s; ++i)
          for (int j = 0; j < s; ++j) T(i, j).add_mul(am, D(i, j));
        if (!cholesky_lower(T)) return false;
      }
      return true;
    };
    int tries = 0;
    while (!try_step(ap, true) && tries < 30) {
      ap *= 0.8;
      ++tries;
    }
    tries = 0;
    while (!try_step(ad, false) && tries < 30) {
      ad *= 0.8;
      ++tries;
    }

    if (ap < 1e-14 || ad < 1e-14) return fail("step length collapsed");

    if (opt.verbose && opt.log) {
      double ndx = 0, nx = 0, nds = 0, ns = 0;
      for (int b = 0; b < nb; ++b) {
        ndx = std::max(ndx, frobenius_norm(dX[static_cast<size_t>(b)]).to_double());
        nx = std::max(nx, frobenius_norm(X[static_cast<size_t>(b)]).to_double());
        nds = std::max(nds, frobenius_norm(dS[static_cast<size_t>(b)]).to_double());
        ns = std::max(ns, frobenius_norm(S[static_cast<size_t>(b)]).to_double());
      }
      *opt.log << "   ap " << ap << "  ad " << ad << "  sigma " << sigma.to_double() << "  |dX|/|X| "
               << ndx / (1 + nx) << "  |dS|/|S| " << nds / (1 + ns) << "\n";
    }

    MpReal apm = MpReal::from_double(ap, prec), adm = MpReal::from_double(ad, prec);
    double dir_rel = 0.0;
    for (int b = 0; b < nb; ++b) {
      const int s = bd[static_cast<size_t>(b)].size;
      double nX = frobenius_norm(X[static_cast<size_t>(b)]).to_double();
      double nD = frobenius_norm(dX[static_cast<size_t>(b)]).to_double();
      dir_rel = std::max(dir_rel, nD / (1.0 + nX));
      for (int i = 0; i < s; ++i)
        for (int j = 0; j < s; ++j) {
          X[static_cast<size_t>(b)](i, j).add_mul(apm, dX[static_cast<size_t>(b)](i, j));
          S[static_cast<size_t>(b)](i, j).add_mul(adm, dS[static_cast<size_t>(b)](i, j));
        }
    }
    for (int i = 0; i < m; ++i) y[static_cast<size_t>(i)].add_mul(adm, dy[static_cast<size_t>(i)]);
    dir_rel_prev = dir_rel;
  }

  res.status = SolveStatus::max_iterations;
  res.X = X;
  res.S = S;
  res.y = y;
  return res;
}

}  // namespace

// ---------------------------------------------------------------------------

template <class K>
Reduction<K> reduce_problem(const SdpProblem<K>& prob, const std::vector<std::vector<int>>& keep) {
  Reduction<K> red;
  red.keep = keep;
  red.reduced.precision = prob.precision;

  // index remaps per block: old index -> new index or -1
  std::vector<std::vector<int>> remap(prob.blocks.size());
  for (size_t b = 0; b < prob.blocks.size(); ++b) {
    remap[b].assign(static_cast<size_t>(prob.blocks[b].size), -1);
    for (size_t k = 0; k < keep[b].size(); ++k) remap[b][static_cast<size_t>(keep[b][k])] =
        static_cast<int>(k);
    red.reduced.blocks.push_back({prob.blocks[b].name, static_cast<int>(keep[b].size())});
  }

  for (size_t i = 0; i < prob.rows.size(); ++i) {
    const auto& row = prob.rows[i];
    ConstraintRow<K> out;
    out.rhs = row.rhs;
    out.label = row.label;
    for (const auto& e : row.a) {
      int np = remap[static_cast<size_t>(e.block)][static_cast<size_t>(e.p)];
      int nq = remap[static_cast<size_t>(e.block)][static_cast<size_t>(e.q)];
      if (np < 0 || nq < 0) continue;
      out.a.push_back({e.block, std::max(np, nq), std::min(np, nq), e.v});
    }
    if (out.a.empty()) {
      if (k_is_exact_zero(out.rhs)) {
        red.removed_rows.push_back(static_cast<int>(i));
        continue;
      }
      red.removed_row_rhs_nonzero = true;
      if (red.first_bad_row_label.empty()) red.first_bad_row_label = row.label;
      red.removed_rows.push_back(static_cast<int>(i));
      continue;
    }
    red.kept_rows.push_back(static_cast<int>(i));
    red.reduced.rows.push_back(std::move(out));
  }
  for (const auto& e : prob.objective) {
    int np = remap[static_cast<size_t>(e.block)][static_cast<size_t>(e.p)];
    int nq = remap[static_cast<size_t>(e.block)][static_cast<size_t>(e.q)];
    if (np < 0 || nq < 0) continue;
    red.reduced.objective.push_back({e.block, std::max(np, nq), std::min(np, nq), e.v});
  }
  return red;
}

template Reduction<MpReal> reduce_problem<MpReal>(const SdpProblem<MpReal>&,
                                                  const std::vector<std::vector<int>>&);
template Reduction<Interval> reduce_problem<Interval>(const SdpProblem<Interval>&,
                                                      const std::vector<std::vector<int>>&);

ForcedZeros detect_forced_zeros(const SdpProblem<MpReal>& prob) {
  ForcedZeros fz;
  std::vector<std::set<int>> removed(prob.blocks.size());

  // working copy of row supports with removed coefficients elided
  struct WEntry { int block, p, q, sign; };
  std::vector<std::vector<WEntry>> rows(prob.rows.size());
  std::vector<bool> rhs_zero(prob.rows.size());
  for (size_t i = 0; i < prob.rows.size(); ++i) {
    rhs_zero[i] = prob.rows[i].rhs.is_zero();
    for (const auto& e : prob.rows[i].a)
      if (!e.v.is_zero()) rows[i].push_back({e.block, e.p, e.q, e.v.sign()});
  }

  bool changed = true;
  while (changed) {
    changed = false;
    for (size_t i = 0; i < prob.rows.size(); ++i) {
      if (!rhs_zero[i]) continue;
      auto& r = rows[i];
      // drop entries on removed indices
      std::erase_if(r, [&](const WEntry& e) {
        return removed[static_cast<size_t>(e.block)].count(e.p) ||
               removed[static_cast<size_t>(e.block)].count(e.q);
      });
      if (r.empty()) continue;
      bool all_diag = true;
      int sign = r.front().sign;
      for (const auto& e : r)
        if (e.p != e.q || e.sign != sign) {
          all_diag = false;
          break;
        }
      if (!all_diag) continue;
      for (const auto& e : r) {
        if (removed[static_cast<size_t>(e.block)].insert(e.p).second) {
          fz.forced.emplace_back(e.block, e.p);
          fz.certifying_row.push_back(static_cast<int>(i));
        }
      }
      r.clear();
      changed = true;
    }
  }

  // infeasibility: every entry of a row touches a removed index (so its
  // value is pinned to zero) yet the right-hand side is nonzero
  for (size_t i = 0; i < prob.rows.size(); ++i) {
    if (rhs_zero[i]) continue;
    bool all_dead = true;
    for (const auto& e : prob.rows[i].a) {
      if (e.v.is_zero()) continue;
      if (!removed[static_cast<size_t>(e.block)].count(e.p) &&
          !removed[static_cast<size_t>(e.block)].count(e.q)) {
        all_dead = false;
        break;
      }
    }
    if (all_dead) {
      fz.infeasible = true;
      fz.infeasible_label = prob.rows[i].label;
      break;
    }
  }

  for (size_t b = 0; b < prob.blocks.size(); ++b) {
    std::vector<int> kp;
    for (int i = 0; i < prob.blocks[b].size; ++i)
      if (!removed[b].count(i)) kp.push_back(i);
    fz.keep.push_back(std::move(kp));
  }
  if (!fz.forced.empty()) {
    std::ostringstream os;
    os << "forced zeros removed " << fz.forced.size() << " diagonal indices";
    fz.notes.push_back(os.str());
  }
  return fz;
}

std::vector<int> independent_rows_prefilter(const SdpProblem<MpReal>& prob) {
  const int m = static_cast<int>(prob.rows.size());
  if (m == 0) return {};
  const Prec prec = prob.precision;
  const MpReal sqrt2 = sqrt(MpReal::from_long(2, prec));
  std::vector<int> off = prob.svec_offsets();

  // Row coefficients as normalized sparse svec vectors.  This has to run at
  // working precision: polynomial-transform coefficients span hundreds of
  // orders of magnitude at high degree, which flattens any double-precision
  // rank test.
  std::vector<std::vector<std::pair<int, MpReal>>> rows(static_cast<size_t>(m));
  for (int i = 0; i < m; ++i) {
    auto& r = rows[static_cast<size_t>(i)];
    for (const auto& e : prob.rows[static_cast<size_t>(i)].a) {
      int idx = off[static_cast<size_t>(e.block)] +
                svec_index(prob.blocks[static_cast<size_t>(e.block)].size, e.p, e.q);
      r.emplace_back(idx, e.p == e.q ? e.v : e.v * sqrt2);
    }
    std::sort(r.begin(), r.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    size_t w = 0;
    for (size_t k = 0; k < r.size(); ++k) {
      if (w > 0 && r[w - 1].first == r[k].first) {
        r[w - 1].second += r[k].second;
      } else {
        if (w != k) r[w] = std::move(r[k]);
        ++w;
      }
    }
    r.resize(w);
    MpReal nrm2 = MpReal::zero(prec);
    for (const auto& [idx, v] : r) nrm2.add_mul(v, v);
    if (nrm2.is_zero()) {
      r.clear();
      continue;
    }
    MpReal nrm = sqrt(nrm2);
    for (auto& [idx, v] : r) v /= nrm;
  }

  auto sparse_dot = [&](int a, int b) {
    const auto& ra = rows[static_cast<size_t>(a)];
    const auto& rb = rows[static_cast<size_t>(b)];
    MpReal s = MpReal::zero(prec);
    size_t p = 0, q = 0;
    while (p < ra.size() && q < rb.size()) {
      if (ra[p].first < rb[q].first) {
        ++p;
      } else if (rb[q].first < ra[p].first) {
        ++q;
      } else {
        s.add_mul(ra[p].second, rb[q].second);
        ++p;
        ++q;
      }
    }
    return s;
  };

  std::vector<std::vector<MpReal>> G(
      static_cast<size_t>(m), std::vector<MpReal>(static_cast<size_t>(m), MpReal::zero(prec)));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j <= i; ++j) {
      MpReal g = sparse_dot(i, j);
      G[static_cast<size_t>(i)][static_cast<size_t>(j)] = g;
      G[static_cast<size_t>(j)][static_cast<size_t>(i)] = g;
    }

  // Diagonally pivoted Cholesky of the Gram matrix.  A residual diagonal at
  // rounding level means the row is numerically a combination of the rows
  // already selected; anything clearly above that is kept.
  const MpReal tol =
      MpReal::from_double(std::ldexp(1.0, -(3 * static_cast<int>(prec)) / 4), prec);
  std::vector<int> perm(static_cast<size_t>(m));
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<int> kept;
  for (int k = 0; k < m; ++k) {
    int best = k;
    for (int j = k + 1; j < m; ++j)
      if (G[static_cast<size_t>(j)][static_cast<size_t>(j)] >
          G[static_cast<size_t>(best)][static_cast<size_t>(best)])
        best = j;
    if (!(G[static_cast<size_t>(best)][static_cast<size_t>(best)] > tol)) break;
    if (best != k) {
      std::swap(perm[static_cast<size_t>(k)], perm[static_cast<size_t>(best)]);
      for (int t = 0; t < m; ++t)
        std::swap(G[static_cast<size_t>(k)][static_cast<size_t>(t)],
                  G[static_cast<size_t>(best)][static_cast<size_t>(t)]);
      for (int t = 0; t < m; ++t)
        std::swap(G[static_cast<size_t>(t)][static_cast<size_t>(k)],
                  G[static_cast<size_t>(t)][static_cast<size_t>(best)]);
    }
    kept.push_back(perm[static_cast<size_t>(k)]);
    const MpReal dk = G[static_cast<size_t>(k)][static_cast<size_t>(k)];
    for (int i = k + 1; i < m; ++i) {
      MpReal lik = G[static_cast<size_t>(i)][static_cast<size_t>(k)] / dk;
      if (lik.is_zero()) continue;
      for (int j = k + 1; j < m; ++j)
        G[static_cast<size_t>(i)][static_cast<size_t>(j)].sub_mul(
            lik, G[static_cast<size_t>(k)][static_cast<size_t>(j)]);
    }
  }
  std::sort(kept.begin(), kept.end());
  return kept;
}

SdpProblem<MpReal> restrict_to_feasibility(const SdpProblem<MpReal>& prob, const MpReal& target) {
  SdpProblem<MpReal> out = prob;
  ConstraintRow<MpReal> pin;
  pin.a = prob.objective;
  pin.rhs = target;
  pin.label = "objective-pin";
  out.rows.push_back(std::move(pin));
  out.objective.clear();
  return out;
}

std::vector<std::vector<int>> zero_diagonal_keep_lists(const SdpProblem<MpReal>& prob,
                                                       const std::vector<Matrix<MpReal>>& X,
                                                       double rel_threshold) {
  std::vector<std::vector<int>> keep(prob.blocks.size());
  for (size_t b = 0; b < prob.blocks.size(); ++b) {
    const int s = prob.blocks[b].size;
    if (s == 0) continue;
    MpReal tr = MpReal::zero(64);
    for (int i = 0; i < s; ++i) tr += X[b](i, i);
    double avg = tr.to_double() / s;
    for (int i = 0; i < s; ++i)
      if (X[b](i, i).to_double() > rel_threshold * avg) keep[b].push_back(i);
  }
  return keep;
}

Matrix<MpReal> embed_matrix(const Matrix<MpReal>& reduced, const std::vector<int>& keep,
                            int full_size, Prec prec) {
  Matrix<MpReal> out(full_size, full_size, MpReal::zero(prec));
  for (size_t i = 0; i < keep.size(); ++i)
    for (size_t j = 0; j < keep.size(); ++j)
      out(keep[i], keep[j]) = reduced(static_cast<int>(i), static_cast<int>(j));
  return out;
}

namespace {

// Exact power-of-two equilibration.  Every block gets a diagonal congruence
// X -> D X D and every row a positive scale, chosen by Ruiz-style sweeps so
// coefficient magnitudes end up near one.  Polynomial problems need this:
// transform tables carry factorial factors, and without rebalancing the
// Schur complement is numerically singular even at high precision.  All
// factors are powers of two, so scaling and unscaling are exact.
struct Equilibration {
  std::vector<std::vector<long>> col;  // per block, per index: log2 scale
  std::vector<long> row;               // per row: log2 scale
};

Equilibration equilibrate_problem(SdpProblem<MpReal>& prob) {
  Equilibration eq;
  eq.col.resize(prob.blocks.size());
  for (size_t b = 0; b < prob.blocks.size(); ++b)
    eq.col[b].assign(static_cast<size_t>(prob.blocks[b].size), 0);
  eq.row.assign(prob.rows.size(), 0);
  if (std::getenv("PACKING_NO_EQUILIBRATE") != nullptr) return eq;

  const long none = std::numeric_limits<long>::min();
  auto col_of = [&](int block, int idx) -> long& {
    return eq.col[static_cast<size_t>(block)][static_cast<size_t>(idx)];
  };

  for (int sweep = 0; sweep < 20; ++sweep) {
    bool changed = false;

    // congruence pass: halve the largest scaled exponent touching each index
    std::vector<std::vector<long>> mx(prob.blocks.size());
    for (size_t b = 0; b < prob.blocks.size(); ++b)
      mx[b].assign(static_cast<size_t>(prob.blocks[b].size), none);
    auto track = [&](const RowEntry<MpReal>& e, long row_scale) {
      if (e.v.is_zero()) return;
      long ex = ilogb(e.v) + row_scale + col_of(e.block, e.p) + col_of(e.block, e.q);
      auto& mb = mx[static_cast<size_t>(e.block)];
      mb[static_cast<size_t>(e.p)] = std::max(mb[static_cast<size_t>(e.p)], ex);
      mb[static_cast<size_t>(e.q)] = std::max(mb[static_cast<size_t>(e.q)], ex);
    };
    for (size_t i = 0; i < prob.rows.size(); ++i)
      for (const auto& e : prob.rows[i].a) track(e, eq.row[i]);
    for (const auto& e : prob.objective) track(e, 0);
    for (size_t b = 0; b < prob.blocks.size(); ++b)
      for (size_t p = 0; p < mx[b].size(); ++p) {
        if (mx[b][p] == none) continue;
        long adj = -(mx[b][p] / 2);
        if (adj != 0) {
          eq.col[b][p] += adj;
          changed = true;
        }
      }

    // row pass
    for (size_t i = 0; i < prob.rows.size(); ++i) {
      long rmx = none;
      for (const auto& e : prob.rows[i].a) {
        if (e.v.is_zero()) continue;
        rmx = std::max(rmx, ilogb(e.v) + eq.row[i] + col_of(e.block, e.p) +
                                col_of(e.block, e.q));
      }
      if (rmx == none) continue;
      long adj = -(rmx / 2);
      if (adj != 0) {
        eq.row[i] += adj;
        changed = true;
      }
    }
    if (!changed) break;
  }

  for (size_t i = 0; i < prob.rows.size(); ++i) {
    auto& row = prob.rows[i];
    for (auto& e : row.a)
      e.v = ldexp(e.v, eq.row[i] + col_of(e.block, e.p) + col_of(e.block, e.q));
    row.rhs = ldexp(row.rhs, eq.row[i]);
  }
  for (auto& e : prob.objective)
    e.v = ldexp(e.v, col_of(e.block, e.p) + col_of(e.block, e.q));
  return eq;
}

}  // namespace

Solution solve_sdp(const SdpProblem<MpReal>& prob, const SolveOptions& opt) {
  const Prec prec = opt.precision;
  Solution sol;
  sol.primal_obj = MpReal::zero(prec);
  sol.dual_obj = MpReal::zero(prec);
  sol.mu = MpReal::zero(prec);
  sol.rel_gap = MpReal::zero(prec);
  sol.primal_res = MpReal::zero(prec);
  sol.dual_res = MpReal::zero(prec);

  ForcedZeros fz = detect_forced_zeros(prob);
  for (const auto& n : fz.notes) sol.notes.push_back(n);
  if (fz.infeasible) {
    sol.status = SolveStatus::infeasible;
    sol.notes.push_back("row reduces to 0 == nonzero: " + fz.infeasible_label);
    return sol;
  }

  Reduction<MpReal> red = reduce_problem(prob, fz.keep);
  if (red.removed_row_rhs_nonzero) {
    sol.status = SolveStatus::infeasible;
    sol.notes.push_back("row reduces to 0 == nonzero: " + red.first_bad_row_label);
    return sol;
  }

  // rebalance coefficient magnitudes (exact powers of two), then drop rows
  // that are linear combinations of others; drops are verified below
  Equilibration eq = equilibrate_problem(red.reduced);
  std::vector<int> indep = independent_rows_prefilter(red.reduced);
  std::vector<int> dropped_dependent;
  SdpProblem<MpReal> work;
  std::vector<int> work_rows;         // work row -> original row id
  std::vector<long> work_row_scales;  // log2 scale applied to that row
  if (static_cast<int>(indep.size()) < static_cast<int>(red.reduced.rows.size())) {
    work.blocks = red.reduced.blocks;
    work.precision = red.reduced.precision;
    work.objective = red.reduced.objective;
    std::set<int> keep_set(indep.begin(), indep.end());
    for (size_t i = 0; i < red.reduced.rows.size(); ++i) {
      if (keep_set.count(static_cast<int>(i))) {
        work.rows.push_back(red.reduced.rows[i]);
        work_rows.push_back(red.kept_rows[i]);
        work_row_scales.push_back(eq.row[i]);
      } else {
        dropped_dependent.push_back(red.kept_rows[i]);
      }
    }
    std::ostringstream os;
    os << "dropped " << dropped_dependent.size() << " dependent rows (rank prefilter)";
    sol.notes.push_back(os.str());
  } else {
    work = red.reduced;
    work_rows = red.kept_rows;
    work_row_scales = eq.row;
  }

  CoreResult core = solve_core(work, opt);

  // undo the equilibration on the iterates: X -> D X D, S -> D^-1 S D^-1,
  // y_i -> 2^rho_i y_i, all exact
  for (size_t b = 0; b < work.blocks.size(); ++b) {
    const auto& cb = eq.col[b];
    for (size_t p = 0; p < cb.size(); ++p)
      for (size_t q = 0; q < cb.size(); ++q) {
        long s = cb[p] + cb[q];
        if (s == 0) continue;
        core.X[b](static_cast<int>(p), static_cast<int>(q)) =
            ldexp(core.X[b](static_cast<int>(p), static_cast<int>(q)), s);
        core.S[b](static_cast<int>(p), static_cast<int>(q)) =
            ldexp(core.S[b](static_cast<int>(p), static_cast<int>(q)), -s);
      }
  }
  for (size_t k = 0; k < core.y.size(); ++k) core.y[k] = ldexp(core.y[k], work_row_scales[k]);
  for (const auto& n : core.notes) sol.notes.push_back(n);
  sol.status = core.status;
  sol.iterations = core.iterations;
  sol.primal_obj = core.pobj;
  sol.dual_obj = core.dobj;
  sol.mu = core.mu;
  sol.rel_gap = core.rel_gap;
  sol.dual_res = core.dual_res;

  // re-embed the primal/dual iterates into original coordinates
  sol.X.clear();
  sol.S.clear();
  for (size_t b = 0; b < prob.blocks.size(); ++b)
    sol.X.push_back(embed_matrix(core.X[b], fz.keep[b], prob.blocks[b].size, prec));
  sol.y.assign(prob.rows.size(), MpReal::zero(prec));
  for (size_t k = 0; k < work_rows.size(); ++k) sol.y[static_cast<size_t>(work_rows[k])] = core.y[k];

  // Dual slack in original coordinates: the reduced slack embeds with zeros,
  // and removed rows whose original support is all-diagonal with one sign
  // carry multipliers that fill the removed diagonal.  Those rows never touch
  // surviving indices, so the extension is block diagonal and stays positive
  // definite whenever every removed index is covered.
  sol.S.clear();
  for (size_t b = 0; b < prob.blocks.size(); ++b)
    sol.S.push_back(embed_matrix(core.S[b], fz.keep[b], prob.blocks[b].size, prec));
  if (!fz.forced.empty()) {
    MpReal cmax = MpReal::zero(prec);
    for (const auto& e : prob.objective) cmax = max(cmax, abs(e.v));
    MpReal M = MpReal::one(prec) + cmax + inf_norm(sol.y);

    std::set<int> seen;
    std::set<std::pair<int, int>> covered;
    for (size_t k = 0; k < fz.forced.size(); ++k) {
      int r = fz.certifying_row[k];
      if (!seen.insert(r).second) continue;
      bool ok = !prob.rows[static_cast<size_t>(r)].a.empty();
      int sign = 0;
      for (const auto& e : prob.rows[static_cast<size_t>(r)].a) {
        if (e.v.is_zero()) continue;
        if (e.p != e.q) ok = false;
        if (sign == 0) sign = e.v.sign();
        if (e.v.sign() != sign) ok = false;
      }
      if (!ok || sign == 0) continue;
      sol.y[static_cast<size_t>(r)] = (sign > 0) ? -M : M;
      for (const auto& e : prob.rows[static_cast<size_t>(r)].a) {
        if (e.v.is_zero()) continue;
        sol.S[static_cast<size_t>(e.block)](e.p, e.p) += M * abs(e.v);
        covered.emplace(e.block, e.p);
      }
    }
    for (const auto& fp : fz.forced)
      if (!covered.count(fp)) {
        sol.notes.push_back("dual slack extension incomplete on removed indices");
        break;
      }
  }

  // recompute the primal residual over every original row, including rows
  // removed by presolve and rows dropped by the rank prefilter
  MpReal bmax = MpReal::zero(prec);
  for (const auto& r : prob.rows) bmax = max(bmax, abs(r.rhs));
  MpReal worst = MpReal::zero(prec);
  MpReal worst_dropped = MpReal::zero(prec);
  std::set<int> dropped_set(dropped_dependent.begin(), dropped_dependent.end());
  for (size_t i = 0; i < prob.rows.size(); ++i) {
    MpReal ax = MpReal::zero(prec);
    for (const auto& e : prob.rows[i].a) {
      ax.add_mul(e.v, sol.X[static_cast<size_t>(e.block)](e.p, e.q));
      if (e.p != e.q) ax.add_mul(e.v, sol.X[static_cast<size_t>(e.block)](e.q, e.p));
    }
    MpReal resid = abs(ax - prob.rows[i].rhs);
    worst = max(worst, resid);
    if (dropped_set.count(static_cast<int>(i))) worst_dropped = max(worst_dropped, resid);
  }
  sol.primal_res = worst / (MpReal::one(prec) + bmax);
  if (!dropped_dependent.empty()) {
    MpReal rel = worst_dropped / (MpReal::one(prec) + bmax);
    if (rel.to_double() > 1e3 * opt.feas_tol && sol.ok()) {
      sol.status = SolveStatus::numerical_trouble;
      sol.notes.push_back("a dropped row is violated at the solution; prefilter was wrong");
    }
  }
  return sol;
}

}  // namespace packing
