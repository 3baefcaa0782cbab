#pragma once

// Shared test helpers: seeded generators, independent oracles, and checked
// decomposition wrappers that assert the Gram identities on every
// factorization the tests produce.

#include <gtest/gtest.h>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include "hsvd/hsvd.hpp"

namespace hsvd::test {

template <Scalar T>
Matrix<T> random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  return gaussian_matrix<T>(rows, cols, gen);
}

template <Scalar T>
Matrix<T> random_hermitian(std::size_t n, std::uint64_t seed) {
  const auto g = random_matrix<T>(n, n, seed);
  Matrix<T> h = g + g.adjoint();
  h *= T{0.5};
  return h;
}

// det(M - x I) by Gaussian elimination with partial pivoting.
template <Scalar T>
double shifted_det_real(const Matrix<T>& m, double x) {
  const std::size_t n = m.rows();
  std::vector<std::complex<double>> a(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a[i * n + j] = std::complex<double>(m(i, j)) - (i == j ? x : 0.0);
  std::complex<double> det = 1.0;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(a[r * n + c]) > std::abs(a[piv * n + c])) piv = r;
    if (std::abs(a[piv * n + c]) == 0.0) return 0.0;
    if (piv != c) {
      for (std::size_t k = 0; k < n; ++k) std::swap(a[c * n + k], a[piv * n + k]);
      det = -det;
    }
    det *= a[c * n + c];
    for (std::size_t r = c + 1; r < n; ++r) {
      const auto f = a[r * n + c] / a[c * n + c];
      for (std::size_t k = c; k < n; ++k) a[r * n + k] -= f * a[c * n + k];
    }
  }
  return det.real();  // real for Hermitian M and real x
}

// Brute-force eigenvalue oracle for Hermitian matrices: scans the
// characteristic polynomial for sign changes on a fine grid over
// [-(||M||_F + 1), ||M||_F + 1] and bisects each bracket. Descending order.
template <Scalar T>
std::vector<double> charpoly_roots(const Matrix<T>& m, std::size_t grid = 200000) {
  const double bound = frobenius_norm(m) + 1.0;
  std::vector<double> roots;
  double x0 = -bound;
  double f0 = shifted_det_real(m, x0);
  for (std::size_t k = 1; k <= grid; ++k) {
    const double x1 = -bound + 2.0 * bound * static_cast<double>(k) / static_cast<double>(grid);
    const double f1 = shifted_det_real(m, x1);
    if ((f0 < 0.0) != (f1 < 0.0)) {
      double lo = x0, hi = x1, flo = f0;
      for (int it = 0; it < 200 && hi - lo > 1e-15 * (1.0 + std::abs(lo)); ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = shifted_det_real(m, mid);
        if ((fm < 0.0) == (flo < 0.0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      roots.push_back(0.5 * (lo + hi));
    }
    x0 = x1;
    f0 = f1;
  }
  std::sort(roots.begin(), roots.end(), std::greater<>());
  return roots;
}

// Singular values from Eigen's JacobiSVD, a separate implementation.
template <Scalar T>
std::vector<double> eigen_singular_values(const Matrix<T>& a) {
  using EMat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;
  EMat e(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) e(i, j) = a(i, j);
  Eigen::JacobiSVD<EMat> svd(e);
  const auto& s = svd.singularValues();
  return std::vector<double>(s.data(), s.data() + s.size());
}

template <Scalar T>
void expect_eq12(const Matrix<T>& b, const Signature& sig, const HsvdFactors<T>& f, double tol) {
  const double bn = frobenius_norm(b);
  const Matrix<T> sigma = build_sigma_dense<T>(f.sigma);
  const bool right = f.sigma.orientation == Orientation::right;
  const auto [d1, d2] = eq12_defects(right ? b : b.adjoint(), sig, f.U, right ? f.V : j_conjugate(sig, f.V),
                                     right ? sigma : sigma.transpose());
  EXPECT_LE(d1, tol * (1.0 + bn * bn));
  EXPECT_LE(d2, tol * (1.0 + bn * bn) * cond_scale(f.V));
}

// Right decomposition plus the postconditions every caller relies on.
template <Scalar T>
HsvdFactors<T> checked_right(const Matrix<T>& b, const Signature& sig, const ToleranceConfig& tol = {}) {
  auto f = hsvd_right(b, sig, tol);
  const double cond = cond_scale(f.V);
  EXPECT_LE(f.residual, 1e-10 * (1.0 + frobenius_norm(b)) * cond);
  EXPECT_LE(unitary_defect(f.U), 1e-10 * (1.0 + static_cast<double>(b.cols())));
  EXPECT_LE(is_j_unitary(sig, f.V, 0.0).defect, 1e-10 * (1.0 + abs2(frobenius_norm(f.V))));
  expect_eq12(b, sig, f, 1e-10);
  return f;
}

template <Scalar T>
HsvdFactors<T> checked_left(const Matrix<T>& a, const Signature& sig, const ToleranceConfig& tol = {}) {
  auto f = hsvd_left(a, sig, tol);
  EXPECT_LE(f.residual, 1e-10 * (1.0 + frobenius_norm(a)) * cond_scale(f.V));
  EXPECT_LE(is_j_unitary(sig, f.V, 0.0).defect, 1e-10 * (1.0 + abs2(frobenius_norm(f.V))));
  expect_eq12(a, sig, f, 1e-10);
  return f;
}

// Orthonormal basis of the column span (via Eigen), for subspace comparisons.
template <Scalar T>
double subspace_distance(const Matrix<T>& a, const Matrix<T>& b) {
  // || P_a - P_b ||_F with P = X (X^H X)^{-1} X^H for full-rank X.
  auto proj = [](const Matrix<T>& x) {
    using EMat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;
    EMat e(x.rows(), x.cols());
    for (std::size_t i = 0; i < x.rows(); ++i)
      for (std::size_t j = 0; j < x.cols(); ++j) e(i, j) = x(i, j);
    EMat q = e.householderQr().householderQ() * EMat::Identity(x.rows(), x.cols());
    return EMat(q * q.adjoint());
  };
  return (proj(a) - proj(b)).norm();
}

}  // namespace hsvd::test
