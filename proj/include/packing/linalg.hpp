#pragma once

// Dense linear algebra kernels for arbitrary-precision scalars.
// Sizes in this project stay small (blocks up to ~60, Schur systems up to a
// few hundred), so simple cache-friendly dense kernels are the right tool.

#include <optional>
#include <vector>

#include "packing/interval.hpp"
#include "packing/mpreal.hpp"

namespace packing {

template <class T>
class Matrix {
 public:
  Matrix() : rows_(0), cols_(0) {}
  Matrix(int r, int c) : rows_(r), cols_(c), d_(static_cast<size_t>(r) * c) {}
  Matrix(int r, int c, const T& init) : rows_(r), cols_(c), d_(static_cast<size_t>(r) * c, init) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  T& operator()(int i, int j) { return d_[static_cast<size_t>(i) * cols_ + j]; }
  const T& operator()(int i, int j) const { return d_[static_cast<size_t>(i) * cols_ + j]; }

  std::vector<T>& data() { return d_; }
  const std::vector<T>& data() const { return d_; }

 private:
  int rows_, cols_;
  std::vector<T> d_;
};

template <class T>
Matrix<T> identity_like(int n, const T& one) {
  Matrix<T> I(n, n);
  for (int i = 0; i < n; ++i) I(i, i) = one;
  return I;
}

template <class T>
Matrix<T> transpose(const Matrix<T>& A) {
  Matrix<T> R(A.cols(), A.rows());
  for (int i = 0; i < A.rows(); ++i)
    for (int j = 0; j < A.cols(); ++j) R(j, i) = A(i, j);
  return R;
}

template <class T>
Matrix<T> matmul(const Matrix<T>& A, const Matrix<T>& B) {
  Matrix<T> R(A.rows(), B.cols());
  for (int i = 0; i < A.rows(); ++i)
    for (int k = 0; k < A.cols(); ++k) {
      const T& a = A(i, k);
      for (int j = 0; j < B.cols(); ++j) R(i, j).add_mul(a, B(k, j));
    }
  return R;
}

template <class T>
Matrix<T> matmul_ABt(const Matrix<T>& A, const Matrix<T>& B) {
  Matrix<T> R(A.rows(), B.rows());
  for (int i = 0; i < A.rows(); ++i)
    for (int j = 0; j < B.rows(); ++j)
      for (int k = 0; k < A.cols(); ++k) R(i, j).add_mul(A(i, k), B(j, k));
  return R;
}

template <class T>
Matrix<T> matmul_AtB(const Matrix<T>& A, const Matrix<T>& B) {
  Matrix<T> R(A.cols(), B.cols());
  for (int k = 0; k < A.rows(); ++k)
    for (int i = 0; i < A.cols(); ++i) {
      const T& a = A(k, i);
      for (int j = 0; j < B.cols(); ++j) R(i, j).add_mul(a, B(k, j));
    }
  return R;
}

template <class T>
std::vector<T> matvec(const Matrix<T>& A, const std::vector<T>& x) {
  std::vector<T> r(A.rows());
  for (int i = 0; i < A.rows(); ++i)
    for (int j = 0; j < A.cols(); ++j) r[i].add_mul(A(i, j), x[j]);
  return r;
}

inline MpReal frobenius_norm(const Matrix<MpReal>& A) {
  MpReal s = MpReal::zero(64);
  for (const auto& x : A.data()) s.add_mul(x, x);
  return sqrt(s);
}

inline MpReal inf_norm(const std::vector<MpReal>& v) {
  MpReal m = MpReal::zero(64);
  for (const auto& x : v) m = max(m, abs(x));
  return m;
}

// ---------------------------------------------------------------------------
// Cholesky

template <class T>
std::optional<Matrix<T>> cholesky_lower(const Matrix<T>& A) {
  const int n = A.rows();
  Matrix<T> L(n, n);
  for (int j = 0; j < n; ++j) {
    T d = A(j, j);
    for (int k = 0; k < j; ++k) d.sub_mul(L(j, k), L(j, k));
    if (!(d.sign() > 0)) return std::nullopt;
    L(j, j) = sqrt(d);
    for (int i = j + 1; i < n; ++i) {
      T s = A(i, j);
      for (int k = 0; k < j; ++k) s.sub_mul(L(i, k), L(j, k));
      L(i, j) = s / L(j, j);
    }
  }
  return L;
}

// solve L x = b
template <class T>
std::vector<T> forward_subst(const Matrix<T>& L, const std::vector<T>& b) {
  const int n = L.rows();
  std::vector<T> x(b);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < i; ++k) x[i].sub_mul(L(i, k), x[k]);
    x[i] /= L(i, i);
  }
  return x;
}

// solve L^T x = b
template <class T>
std::vector<T> backward_subst_T(const Matrix<T>& L, const std::vector<T>& b) {
  const int n = L.rows();
  std::vector<T> x(b);
  for (int i = n - 1; i >= 0; --i) {
    for (int k = i + 1; k < n; ++k) x[i].sub_mul(L(k, i), x[k]);
    x[i] /= L(i, i);
  }
  return x;
}

template <class T>
std::vector<T> cholesky_solve(const Matrix<T>& L, const std::vector<T>& b) {
  return backward_subst_T(L, forward_subst(L, b));
}

// solve L X = B columnwise (B overwritten semantics avoided; returns new)
template <class T>
Matrix<T> forward_subst_matrix(const Matrix<T>& L, const Matrix<T>& B) {
  const int n = L.rows(), m = B.cols();
  Matrix<T> X = B;
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < n; ++i) {
      for (int k = 0; k < i; ++k) X(i, j).sub_mul(L(i, k), X(k, j));
      X(i, j) /= L(i, i);
    }
  return X;
}

// ---------------------------------------------------------------------------
// LU with partial pivoting

template <class T>
struct LuFactors {
  Matrix<T> lu;
  std::vector<int> perm;
};

template <class T>
std::optional<LuFactors<T>> lu_factor(Matrix<T> A) {
  const int n = A.rows();
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  for (int k = 0; k < n; ++k) {
    int piv = k;
    T best = abs(A(k, k));
    for (int i = k + 1; i < n; ++i) {
      T a = abs(A(i, k));
      if (a > best) {
        best = a;
        piv = i;
      }
    }
    if (best.is_zero()) return std::nullopt;
    if (piv != k) {
      for (int j = 0; j < n; ++j) swap(A(k, j), A(piv, j));
      std::swap(perm[k], perm[piv]);
    }
    for (int i = k + 1; i < n; ++i) {
      A(i, k) /= A(k, k);
      const T& f = A(i, k);
      for (int j = k + 1; j < n; ++j) A(i, j).sub_mul(f, A(k, j));
    }
  }
  return LuFactors<T>{std::move(A), std::move(perm)};
}

template <class T>
std::vector<T> lu_solve(const LuFactors<T>& F, const std::vector<T>& b) {
  const int n = F.lu.rows();
  std::vector<T> x(n);
  for (int i = 0; i < n; ++i) x[i] = b[F.perm[i]];
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < i; ++k) x[i].sub_mul(F.lu(i, k), x[k]);
  for (int i = n - 1; i >= 0; --i) {
    for (int k = i + 1; k < n; ++k) x[i].sub_mul(F.lu(i, k), x[k]);
    x[i] /= F.lu(i, i);
  }
  return x;
}

template <class T>
std::optional<Matrix<T>> invert(const Matrix<T>& A) {
  const int n = A.rows();
  auto F = lu_factor(A);
  if (!F) return std::nullopt;
  Matrix<T> inv(n, n);
  std::vector<T> e(n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) e[i] = (i == j) ? /*one*/ A(0, 0) - A(0, 0) : T{};
    // set 1 with the right precision by dividing a pivot by itself
    e[j] = F->lu(j, j) / F->lu(j, j);
    std::vector<T> col = lu_solve(*F, e);
    for (int i = 0; i < n; ++i) inv(i, j) = col[i];
  }
  return inv;
}

// ---------------------------------------------------------------------------
// Cyclic Jacobi for symmetric eigenproblems

inline bool jacobi_eigen(Matrix<MpReal> A, std::vector<MpReal>& evals, Matrix<MpReal>* evecs = nullptr,
                         int max_sweeps = 60) {
  const int n = A.rows();
  const Prec p = n > 0 ? A(0, 0).prec() : 64;
  Matrix<MpReal> V = identity_like(n, MpReal::one(p));
  MpReal two = MpReal::from_long(2, p);
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    MpReal off = MpReal::zero(p);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) off.add_mul(A(i, j), A(i, j));
    MpReal diag = MpReal::zero(p);
    for (int i = 0; i < n; ++i) diag.add_mul(A(i, i), A(i, i));
    MpReal scale = max(sqrt(diag), MpReal::one(p));
    if (sqrt(off).log2_abs() < scale.log2_abs() - static_cast<double>(p) + 6) break;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        if (A(i, j).is_zero()) continue;
        MpReal theta = (A(j, j) - A(i, i)) / (two * A(i, j));
        MpReal t = MpReal::one(p) / (abs(theta) + sqrt(theta * theta + MpReal::one(p)));
        if (theta.sign() < 0) t = -t;
        MpReal c = MpReal::one(p) / sqrt(t * t + MpReal::one(p));
        MpReal s = t * c;
        for (int k = 0; k < n; ++k) {
          MpReal aik = A(i, k), ajk = A(j, k);
          A(i, k) = c * aik - s * ajk;
          A(j, k) = s * aik + c * ajk;
        }
        for (int k = 0; k < n; ++k) {
          MpReal aki = A(k, i), akj = A(k, j);
          A(k, i) = c * aki - s * akj;
          A(k, j) = s * aki + c * akj;
        }
        for (int k = 0; k < n; ++k) {
          MpReal vki = V(k, i), vkj = V(k, j);
          V(k, i) = c * vki - s * vkj;
          V(k, j) = s * vki + c * vkj;
        }
      }
  }
  evals.resize(n);
  for (int i = 0; i < n; ++i) evals[i] = A(i, i);
  if (evecs) *evecs = std::move(V);
  return true;
}

inline MpReal min_eigenvalue(const Matrix<MpReal>& A) {
  std::vector<MpReal> w;
  jacobi_eigen(A, w);
  MpReal m = w.empty() ? MpReal::zero(64) : w[0];
  for (const auto& x : w) m = min(m, x);
  return m;
}

// ---------------------------------------------------------------------------
// Householder QR with column pivoting.  Returns the pivot order and the
// absolute values of the R diagonal (for rank decisions).

template <class T>
struct QrColPivotResult {
  std::vector<int> pivots;  // column index chosen at each step
  std::vector<T> rdiag;     // |R_kk| per step
};

template <class T>
QrColPivotResult<T> qr_col_pivot(Matrix<T> A) {
  using std::abs;
  using std::sqrt;
  const int m = A.rows(), n = A.cols();
  const int steps = std::min(m, n);
  std::vector<int> colidx(n);
  for (int j = 0; j < n; ++j) colidx[j] = j;
  std::vector<T> norms(n, T{});
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < m; ++i) norms[j] += A(i, j) * A(i, j);

  QrColPivotResult<T> out;
  for (int k = 0; k < steps; ++k) {
    // recompute residual norms honestly (n is small; avoids downdating drift)
    for (int j = k; j < n; ++j) {
      T s{};
      for (int i = k; i < m; ++i) s += A(i, j) * A(i, j);
      norms[j] = s;
    }
    int best = k;
    for (int j = k + 1; j < n; ++j)
      if (norms[j] > norms[best]) best = j;
    if (best != k) {
      for (int i = 0; i < m; ++i) std::swap(A(i, k), A(i, best));
      std::swap(colidx[k], colidx[best]);
      std::swap(norms[k], norms[best]);
    }
    // Householder vector for column k
    T alpha = sqrt(norms[k]);
    if (!(alpha > T{})) {
      out.pivots.push_back(colidx[k]);
      out.rdiag.push_back(T{});
      continue;
    }
    if (A(k, k) > T{}) alpha = -alpha;
    T v0 = A(k, k) - alpha;
    A(k, k) = alpha;
    // w = [v0, A(k+1..m,k)]; beta = 1/(alpha*v0) (classic storage-free form)
    T beta = alpha * v0;
    for (int j = k + 1; j < n; ++j) {
      T s = v0 * A(k, j);
      for (int i = k + 1; i < m; ++i) s += A(i, k) * A(i, j);
      s = s / beta;
      A(k, j) += s * v0;
      for (int i = k + 1; i < m; ++i) A(i, j) += s * A(i, k);
    }
    out.pivots.push_back(colidx[k]);
    out.rdiag.push_back(abs(alpha));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Interval positive definiteness via interval Cholesky: succeeds only if
// every pivot interval is strictly positive, which proves every symmetric
// selection of the interval matrix is positive definite.

inline bool interval_cholesky_pd(const Matrix<Interval>& A) {
  const int n = A.rows();
  Matrix<Interval> L(n, n);
  for (int j = 0; j < n; ++j) {
    Interval d = A(j, j);
    for (int k = 0; k < j; ++k) d = d - L(j, k) * L(j, k);
    if (!d.is_strictly_positive()) return false;
    Interval root = sqrt(d);
    L(j, j) = root;
    for (int i = j + 1; i < n; ++i) {
      Interval s = A(i, j);
      for (int k = 0; k < j; ++k) s = s - L(i, k) * L(j, k);
      L(i, j) = s / root;
    }
  }
  return true;
}

}  // namespace packing
