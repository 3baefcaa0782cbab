#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

#include "hsvd/error.hpp"
#include "hsvd/matrix.hpp"

namespace hsvd {

/// Numerical thresholds shared by every routine in the library.
///
/// rank_rtol classifies singular values and eigenvalues as zero relative to
/// the largest one; residual_tol gates factor residuals; breakdown_tol is the
/// pivot floor for hyperbolic orthogonalization.
struct ToleranceConfig {
  double rank_rtol = 1e-10;
  double residual_tol = 1e-8;
  double breakdown_tol = 1e-10;

  void validate() const {
    if (!(rank_rtol > 0.0) || rank_rtol > 1.0 || !(residual_tol > 0.0) || !(breakdown_tol > 0.0))
      throw error(errc::infeasible, "tolerances must be positive and rank_rtol <= 1");
  }
};

template <Scalar T>
struct EigenResult {
  std::vector<double> values;  // descending
  Matrix<T> vectors;           // column k pairs with values[k]
};

template <Scalar T>
struct SvdResult {
  std::vector<double> values;  // descending, one per column of the input
  Matrix<T> left;              // column k = A v_k / sigma_k, zero when sigma_k == 0
  Matrix<T> right;             // unitary, column k is the right singular vector
};

namespace detail {

inline constexpr int kMaxSweeps = 100;

// Unitary 2x2 rotation G = [[c, s], [-s*conj(e), c*conj(e)]] that
// annihilates the off-diagonal entry of the Hermitian block [[a, off], [conj(off), b]]
// under G^H (.) G. e is the phase of off.
template <Scalar T>
struct Rotation {
  double c = 1.0;
  double s = 0.0;
  T phase{1};
};

template <Scalar T>
Rotation<T> hermitian_rotation(double a, double b, T off) {
  const double r = std::abs(off);
  Rotation<T> rot;
  if (r == 0.0) return rot;
  rot.phase = off / r;
  const double theta = (b - a) / (2.0 * r);
  const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::hypot(theta, 1.0));
  rot.c = 1.0 / std::hypot(t, 1.0);
  rot.s = t * rot.c;
  return rot;
}

// M <- M G on columns p, q.
template <Scalar T>
void rotate_columns(Matrix<T>& m, std::size_t p, std::size_t q, const Rotation<T>& g) {
  const T ce = conj(g.phase);
  for (std::size_t k = 0; k < m.rows(); ++k) {
    const T mp = m(k, p);
    const T mq = m(k, q);
    m(k, p) = g.c * mp - g.s * ce * mq;
    m(k, q) = g.s * mp + g.c * ce * mq;
  }
}

// M <- G^H M on rows p, q.
template <Scalar T>
void rotate_rows(Matrix<T>& m, std::size_t p, std::size_t q, const Rotation<T>& g) {
  const T e = g.phase;
  for (std::size_t k = 0; k < m.cols(); ++k) {
    const T mp = m(p, k);
    const T mq = m(q, k);
    m(p, k) = g.c * mp - g.s * e * mq;
    m(q, k) = g.s * mp + g.c * e * mq;
  }
}

inline std::vector<std::size_t> descending_order(const std::vector<double>& v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] > v[b]; });
  return idx;
}

template <class Gen>
double gaussian(Gen& gen) {
  return std::normal_distribution<double>(0.0, 1.0)(gen);
}

}  // namespace detail

template <Scalar T>
double hermitian_defect(const Matrix<T>& m) {
  return frobenius_norm(m - m.adjoint());
}

/// Eigen-decomposition of a Hermitian matrix by cyclic Jacobi rotations.
///
/// Values come back in descending order; each eigenvector is scaled so its
/// largest-magnitude entry is real and positive. Throws NotHermitian when
/// ||M - M^H||_F exceeds residual_tol * (1 + ||M||_F) and NoConvergence when
/// the sweep cap is reached.
template <Scalar T>
EigenResult<T> hermitian_eigendecompose(const Matrix<T>& m, const ToleranceConfig& tol = {}) {
  if (!m.is_square()) throw error(errc::dimension_mismatch, "eigendecomposition needs a square matrix");
  const std::size_t n = m.rows();
  const double norm = frobenius_norm(m);
  if (hermitian_defect(m) > tol.residual_tol * (1.0 + norm))
    throw error(errc::not_hermitian, "||M - M^H||_F exceeds tolerance");

  Matrix<T> a = m;
  // Symmetrize exactly so rounding in the input cannot bias the rotations.
  for (std::size_t i = 0; i < n; ++i) {
    a(i, i) = T{real_part(a(i, i))};
    for (std::size_t j = i + 1; j < n; ++j) {
      const T avg = (a(i, j) + conj(a(j, i))) * 0.5;
      a(i, j) = avg;
      a(j, i) = conj(avg);
    }
  }
  Matrix<T> v = Matrix<T>::identity(n);

  const double target = std::numeric_limits<double>::epsilon() * norm;
  bool converged = false;
  for (int sweep = 0; sweep < detail::kMaxSweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) off += abs2(a(i, j));
    if (std::sqrt(2.0 * off) <= target) {
      converged = true;
      break;
    }
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        if (std::abs(a(p, q)) == 0.0) continue;
        const auto g = detail::hermitian_rotation(real_part(a(p, p)), real_part(a(q, q)), a(p, q));
        detail::rotate_columns(a, p, q, g);
        detail::rotate_rows(a, p, q, g);
        a(p, q) = T{};
        a(q, p) = T{};
        a(p, p) = T{real_part(a(p, p))};
        a(q, q) = T{real_part(a(q, q))};
        detail::rotate_columns(v, p, q, g);
      }
  }
  if (!converged) throw error(errc::no_convergence, "Jacobi sweep cap reached");

  std::vector<double> diag(n);
  for (std::size_t i = 0; i < n; ++i) diag[i] = real_part(a(i, i));
  const auto order = detail::descending_order(diag);

  EigenResult<T> out;
  out.values.resize(n);
  out.vectors = Matrix<T>(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = diag[order[k]];
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
    normalize_phase(out.vectors, k);
  }
  return out;
}

/// One-sided (Hestenes) Jacobi SVD.
///
/// Works on any m x n input, including wide and empty ones. The right factor
/// is n x n unitary and includes a basis for the null space in its trailing
/// columns.
template <Scalar T>
SvdResult<T> svd(const Matrix<T>& a) {
  const std::size_t n = a.cols();
  Matrix<T> w = a;
  Matrix<T> v = Matrix<T>::identity(n);
  // Rounding in the column dot products is about rows * eps, so demanding
  // more than that would rotate forever.
  const double eps = std::numeric_limits<double>::epsilon() * static_cast<double>(std::max<std::size_t>(a.rows(), 1));

  // Columns below this norm are rounding noise of a rank-deficient input and
  // are left alone; their relative orthogonality can never settle.
  const double floor2 = abs2(eps * frobenius_norm(a));

  bool converged = n < 2;
  for (int sweep = 0; sweep < detail::kMaxSweeps && !converged; ++sweep) {
    bool rotated = false;
    for (std::size_t i = 0; i + 1 < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        double alpha = 0.0, beta = 0.0;
        T gamma{};
        for (std::size_t k = 0; k < w.rows(); ++k) {
          alpha += abs2(w(k, i));
          beta += abs2(w(k, j));
          gamma += conj(w(k, i)) * w(k, j);
        }
        const double g = std::abs(gamma);
        if (g == 0.0 || g <= eps * std::sqrt(alpha * beta) || std::min(alpha, beta) <= floor2) continue;
        const auto rot = detail::hermitian_rotation(alpha, beta, gamma);
        detail::rotate_columns(w, i, j, rot);
        detail::rotate_columns(v, i, j, rot);
        rotated = true;
      }
    converged = !rotated;
  }
  if (!converged) throw error(errc::no_convergence, "one-sided Jacobi sweep cap reached");

  std::vector<double> sigma(n);
  for (std::size_t j = 0; j < n; ++j) sigma[j] = frobenius_norm(w.col(j));
  const auto order = detail::descending_order(sigma);

  SvdResult<T> out;
  out.values.resize(n);
  out.left = Matrix<T>(a.rows(), n);
  out.right = Matrix<T>(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t src = order[k];
    out.values[k] = sigma[src];
    for (std::size_t i = 0; i < n; ++i) out.right(i, k) = v(i, src);
    const T phase = normalize_phase(out.right, k);
    if (sigma[src] > 0.0)
      for (std::size_t i = 0; i < a.rows(); ++i) out.left(i, k) = w(i, src) * phase / sigma[src];
  }
  return out;
}

inline double rank_threshold(double largest, std::size_t rows, std::size_t cols, const ToleranceConfig& tol) {
  return tol.rank_rtol * static_cast<double>(std::max(rows, cols)) * largest;
}

/// Number of singular values strictly above rank_rtol * max(rows, cols) * sigma_max.
template <Scalar T>
std::size_t numerical_rank(const Matrix<T>& a, const ToleranceConfig& tol = {}) {
  if (a.empty()) return 0;
  const auto s = svd(a).values;
  const double thr = rank_threshold(s.front(), a.rows(), a.cols(), tol);
  return static_cast<std::size_t>(std::count_if(s.begin(), s.end(), [&](double x) { return x > thr; }));
}

/// The last `count` right singular vectors of `a` (n x count). When `a` has
/// rank n - count these span its null space.
template <Scalar T>
Matrix<T> trailing_right_singular_vectors(const Matrix<T>& a, std::size_t count) {
  const std::size_t n = a.cols();
  if (count > n) throw error(errc::dimension_mismatch, "requested more null vectors than columns");
  if (a.rows() == 0) return Matrix<T>::identity(n).block(0, n - count, n, count);
  const auto s = svd(a);
  return s.right.block(0, n - count, n, count);
}

/// Minimum-norm least-squares solution of A X = Rhs via the pseudo-inverse,
/// discarding singular values at or below the rank threshold.
template <Scalar T>
Matrix<T> solve_min_norm(const Matrix<T>& a, const Matrix<T>& rhs, const ToleranceConfig& tol = {}) {
  if (a.rows() != rhs.rows()) throw error(errc::dimension_mismatch, "solve_min_norm row mismatch");
  Matrix<T> x(a.cols(), rhs.cols());
  if (a.empty()) return x;
  const auto s = svd(a);
  const double thr = rank_threshold(s.values.front(), a.rows(), a.cols(), tol);
  for (std::size_t k = 0; k < s.values.size(); ++k) {
    if (!(s.values[k] > thr)) break;
    for (std::size_t c = 0; c < rhs.cols(); ++c) {
      T coeff{};
      for (std::size_t i = 0; i < a.rows(); ++i) coeff += conj(s.left(i, k)) * rhs(i, c);
      coeff /= s.values[k];
      for (std::size_t i = 0; i < a.cols(); ++i) x(i, c) += s.right(i, k) * coeff;
    }
  }
  return x;
}

/// Seeded i.i.d. standard Gaussian entries (real and imaginary parts are
/// independent in complex mode).
template <Scalar T, class Gen>
Matrix<T> gaussian_matrix(std::size_t rows, std::size_t cols, Gen& gen) {
  Matrix<T> out(rows, cols);
  for (auto& x : out.data()) {
    if constexpr (is_complex_v<T>) {
      const double re = detail::gaussian(gen);
      const double im = detail::gaussian(gen);
      x = cplx(re, im);
    } else {
      x = detail::gaussian(gen);
    }
  }
  return out;
}

// Orthonormalizes the columns in place with two passes of modified
// Gram-Schmidt. Columns must be linearly independent.
template <Scalar T>
void orthonormalize_columns(Matrix<T>& q) {
  for (std::size_t j = 0; j < q.cols(); ++j) {
    for (int pass = 0; pass < 2; ++pass)
      for (std::size_t k = 0; k < j; ++k) {
        T r{};
        for (std::size_t i = 0; i < q.rows(); ++i) r += conj(q(i, k)) * q(i, j);
        for (std::size_t i = 0; i < q.rows(); ++i) q(i, j) -= r * q(i, k);
      }
    double nrm = 0.0;
    for (std::size_t i = 0; i < q.rows(); ++i) nrm += abs2(q(i, j));
    nrm = std::sqrt(nrm);
    if (nrm == 0.0) throw error(errc::internal_invariant_violation, "dependent columns in orthonormalization");
    for (std::size_t i = 0; i < q.rows(); ++i) q(i, j) /= nrm;
  }
}

/// Haar-distributed random unitary (orthogonal in real mode), deterministic
/// for a fixed seed.
template <Scalar T>
Matrix<T> unitary_random(std::size_t n, std::uint64_t seed) {
  if (n == 0) throw error(errc::dimension_mismatch, "unitary_random needs n >= 1");
  std::mt19937_64 gen(seed);
  Matrix<T> q = gaussian_matrix<T>(n, n, gen);
  orthonormalize_columns(q);
  return q;
}

}  // namespace hsvd
