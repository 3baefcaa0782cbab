#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "hsvd/error.hpp"
#include "hsvd/linalg.hpp"
#include "hsvd/matrix.hpp"

namespace hsvd {

/// The pair (p, q) defining J = diag(I_p, -I_q).
struct Signature {
  std::size_t p = 0;
  std::size_t q = 0;

  Signature() = default;
  Signature(std::size_t p_, std::size_t q_) : p(p_), q(q_) {
    if (p + q == 0) throw error(errc::signature_mismatch, "signature needs p + q >= 1");
  }

  std::size_t m() const noexcept { return p + q; }
  double sign(std::size_t i) const noexcept { return i < p ? 1.0 : -1.0; }
  bool operator==(const Signature&) const = default;
};

template <Scalar T>
Matrix<T> j_matrix(const Signature& sig) {
  Matrix<T> out(sig.m(), sig.m());
  for (std::size_t i = 0; i < sig.m(); ++i) out(i, i) = T{sig.sign(i)};
  return out;
}

/// J x: rows past p are negated. Works on any number of columns.
template <Scalar T>
Matrix<T> apply_j(const Signature& sig, Matrix<T> x) {
  if (x.rows() != sig.m())
    throw error(errc::dimension_mismatch, "apply_j expects " + std::to_string(sig.m()) + " rows");
  for (std::size_t i = sig.p; i < x.rows(); ++i)
    for (std::size_t j = 0; j < x.cols(); ++j) x(i, j) = -x(i, j);
  return x;
}

/// J X J: entry (a, b) scaled by J_a J_b. This is V^{-H} for a J-unitary V.
template <Scalar T>
Matrix<T> j_conjugate(const Signature& sig, Matrix<T> x) {
  if (x.rows() != sig.m() || x.cols() != sig.m())
    throw error(errc::dimension_mismatch, "j_conjugate expects an m x m matrix");
  for (std::size_t a = 0; a < x.rows(); ++a)
    for (std::size_t b = 0; b < x.cols(); ++b)
      if (sig.sign(a) * sig.sign(b) < 0.0) x(a, b) = -x(a, b);
  return x;
}

/// x^H J y. Also accepts matrices, returning the full Gram block X^H J Y.
template <Scalar T>
Matrix<T> j_gram(const Signature& sig, const Matrix<T>& x, const Matrix<T>& y) {
  if (x.rows() != sig.m() || y.rows() != sig.m())
    throw error(errc::dimension_mismatch, "j_gram expects " + std::to_string(sig.m()) + " rows");
  return adjoint_times(x, apply_j(sig, y));
}

template <Scalar T>
T j_inner(const Signature& sig, const Matrix<T>& x, const Matrix<T>& y) {
  if (x.cols() != 1 || y.cols() != 1) throw error(errc::dimension_mismatch, "j_inner expects columns");
  return j_gram(sig, x, y)(0, 0);
}

struct JUnitaryCheck {
  bool ok = false;
  double defect = 0.0;  // ||V^H J V - J||_F
};

template <Scalar T>
JUnitaryCheck is_j_unitary(const Signature& sig, const Matrix<T>& v, double tol) {
  if (v.rows() != sig.m() || v.cols() != sig.m())
    throw error(errc::dimension_mismatch, "is_j_unitary expects an m x m matrix");
  const double d = frobenius_norm(j_gram(sig, v, v) - j_matrix<T>(sig));
  return {d <= tol, d};
}

template <Scalar T>
struct JBasisColumn {
  Matrix<T> vector;
  int j_norm_sign = 0;  // +1, -1, or 0 for isotropic
};

/// Hyperbolic Gram-Schmidt in modified form with full pivoting.
///
/// At every step the remaining candidate with the largest |<x,x>_J| is
/// normalized to J-norm +-1 and projected out of every other candidate.
/// Classical Gram-Schmidt is unusable here: the indefinite form lets the
/// accumulated projections cancel catastrophically.
///
/// Throws IsotropicBreakdown when every remaining candidate satisfies
/// |<x,x>_J| <= breakdown_tol * ||x||^2; the spanned subspace is then
/// degenerate, or at least ill-posed for this pivoting rule.
template <Scalar T>
std::vector<JBasisColumn<T>> hyperbolic_gram_schmidt(const Signature& sig, const Matrix<T>& basis,
                                                     const ToleranceConfig& tol = {}) {
  if (basis.rows() != sig.m())
    throw error(errc::dimension_mismatch, "basis columns must have length m");
  std::vector<Matrix<T>> pending;
  pending.reserve(basis.cols());
  std::vector<double> original_norm;
  for (std::size_t j = 0; j < basis.cols(); ++j) {
    pending.push_back(basis.col(j));
    original_norm.push_back(frobenius_norm(pending.back()));
  }

  std::vector<JBasisColumn<T>> out;
  out.reserve(pending.size());
  std::vector<bool> used(pending.size(), false);
  for (std::size_t step = 0; step < pending.size(); ++step) {
    std::size_t pivot = pending.size();
    double best = 0.0;
    for (std::size_t k = 0; k < pending.size(); ++k) {
      if (used[k]) continue;
      const double nrm2 = abs2(frobenius_norm(pending[k]));
      const double jn = std::abs(real_part(j_inner(sig, pending[k], pending[k])));
      const bool dependent = std::sqrt(nrm2) <= tol.breakdown_tol * original_norm[k];
      if (dependent || jn <= tol.breakdown_tol * nrm2) continue;
      if (jn > best) {
        best = jn;
        pivot = k;
      }
    }
    if (pivot == pending.size())
      throw error(errc::isotropic_breakdown,
                  "all " + std::to_string(pending.size() - step) + " remaining candidates are J-isotropic");

    used[pivot] = true;
    Matrix<T> e = pending[pivot];
    const double jn = real_part(j_inner(sig, e, e));
    const int sign = jn > 0.0 ? 1 : -1;
    e *= T{1.0 / std::sqrt(std::abs(jn))};
    for (std::size_t k = 0; k < pending.size(); ++k) {
      if (used[k]) continue;
      const T coeff = j_inner(sig, e, pending[k]) * static_cast<double>(sign);
      pending[k] -= e * coeff;
    }
    out.push_back({std::move(e), sign});
  }
  return out;
}

template <Scalar T>
struct IsotropicPairs {
  Matrix<T> plus;   // v_plus_i, J-norm +1
  Matrix<T> minus;  // v_minus_i, J-norm -1
  Matrix<T> duals;  // d_i with <c_i, d_k>_J = 2 delta_ik and <d_i, d_k>_J = 0
};

/// Completes mutually J-orthogonal isotropic columns c_i to hyperbolic pairs.
///
/// Duals d_i are taken from span(ambient): a minimum-norm least-squares solve
/// of <c_k, d>_J = 2 delta_ik, then d_i -= (<d_i,d_i>_J / 4) c_i to make each
/// dual isotropic, then for i < k, d_k -= (<d_i,d_k>_J / 2) c_i to clear the
/// cross terms. The pairs are v_plus = (c + d) / 2 and v_minus = (d - c) / 2,
/// so v_plus - v_minus = c.
template <Scalar T>
IsotropicPairs<T> isotropic_pair_complete(const Signature& sig, const Matrix<T>& c, const Matrix<T>& ambient,
                                          const ToleranceConfig& tol = {}) {
  if (c.rows() != sig.m() || ambient.rows() != sig.m())
    throw error(errc::dimension_mismatch, "isotropic_pair_complete expects length-m columns");
  const std::size_t j = c.cols();
  IsotropicPairs<T> out{Matrix<T>(sig.m(), j), Matrix<T>(sig.m(), j), Matrix<T>(sig.m(), j)};
  if (j == 0) return out;

  const Matrix<T> cc = j_gram(sig, c, c);
  for (std::size_t a = 0; a < j; ++a)
    for (std::size_t b = 0; b < j; ++b) {
      const double scale = frobenius_norm(c.col(a)) * frobenius_norm(c.col(b));
      if (std::abs(cc(a, b)) > tol.residual_tol * scale)
        throw error(errc::dual_not_found, "input columns are not mutually J-orthogonal and isotropic");
    }

  // Constraint rows: (c_k^H J A) x = 2 delta_ik for each dual i.
  const Matrix<T> g = j_gram(sig, c, ambient);
  if (numerical_rank(g, tol) < j)
    throw error(errc::dual_not_found, "ambient subspace cannot pair every isotropic column");
  Matrix<T> rhs(j, j);
  for (std::size_t i = 0; i < j; ++i) rhs(i, i) = T{2.0};
  const Matrix<T> x = solve_min_norm(g, rhs, tol);
  const double lin_residual = frobenius_norm(g * x - rhs);
  if (lin_residual > tol.residual_tol * (1.0 + frobenius_norm(g) * frobenius_norm(x)))
    throw error(errc::dual_not_found, "linear constraints for the duals are inconsistent");

  Matrix<T> d = ambient * x;
  std::vector<Matrix<T>> duals;
  for (std::size_t i = 0; i < j; ++i) duals.push_back(d.col(i));
  std::vector<Matrix<T>> cols;
  for (std::size_t i = 0; i < j; ++i) cols.push_back(c.col(i));

  for (std::size_t i = 0; i < j; ++i) {
    const double self = real_part(j_inner(sig, duals[i], duals[i]));
    duals[i] -= cols[i] * T{self / 4.0};
  }
  for (std::size_t i = 0; i < j; ++i)
    for (std::size_t k = i + 1; k < j; ++k) {
      const T cross = j_inner(sig, duals[i], duals[k]);
      duals[k] -= cols[i] * (cross / 2.0);
    }

  for (std::size_t i = 0; i < j; ++i) {
    out.duals.set_col(i, duals[i]);
    out.plus.set_col(i, (cols[i] + duals[i]) * T{0.5});
    out.minus.set_col(i, (duals[i] - cols[i]) * T{0.5});
  }
  return out;
}

/// Permutation S with S J S^T = jhat, so that V S is J-unitary whenever
/// V^H J V = jhat. The a-th +1 of jhat maps to the a-th +1 of J, likewise
/// for -1.
template <Scalar T>
Matrix<T> hyperexchange_to_junitary(const Signature& sig, const Matrix<T>& v, const std::vector<int>& jhat,
                                    const ToleranceConfig& tol = {}) {
  const std::size_t m = sig.m();
  if (v.rows() != m || v.cols() != m || jhat.size() != m)
    throw error(errc::dimension_mismatch, "hyperexchange_to_junitary expects m x m input and m signs");
  std::size_t plus = 0;
  for (int s : jhat) {
    if (s != 1 && s != -1) throw error(errc::inertia_mismatch, "jhat entries must be +1 or -1");
    if (s == 1) ++plus;
  }
  if (plus != sig.p)
    throw error(errc::inertia_mismatch,
                "jhat has " + std::to_string(plus) + " entries +1 but p = " + std::to_string(sig.p));

  Matrix<T> jh(m, m);
  for (std::size_t i = 0; i < m; ++i) jh(i, i) = T{static_cast<double>(jhat[i])};
  const double defect = frobenius_norm(j_gram(sig, v, v) - jh);
  if (defect > tol.residual_tol * (1.0 + abs2(frobenius_norm(v))))
    throw error(errc::not_hyperexchange, "||V^H J V - jhat||_F = " + std::to_string(defect));

  Matrix<T> perm(m, m);
  std::size_t next_plus = 0;
  std::size_t next_minus = sig.p;
  for (std::size_t i = 0; i < m; ++i) perm(i, jhat[i] == 1 ? next_plus++ : next_minus++) = T{1};
  return perm;
}

/// Random J-unitary matrix diag(U_p, U_q) H diag(U_p', U_q'), where H applies
/// hyperbolic rotations with rapidities drawn from [0, max_rapidity] to the
/// index pairs (i, p + i). With q = 0 (or p = 0) this is unitary_random.
template <Scalar T>
Matrix<T> j_unitary_random(const Signature& sig, std::uint64_t seed, double max_rapidity) {
  if (max_rapidity < 0.0) throw error(errc::infeasible, "max_rapidity must be non-negative");
  if (sig.q == 0 || sig.p == 0) return unitary_random<T>(sig.m(), seed);

  std::mt19937_64 gen(seed);
  auto block_unitary = [&]() {
    Matrix<T> out(sig.m(), sig.m());
    const auto up = unitary_random<T>(sig.p, gen());
    const auto uq = unitary_random<T>(sig.q, gen());
    for (std::size_t i = 0; i < sig.p; ++i)
      for (std::size_t j = 0; j < sig.p; ++j) out(i, j) = up(i, j);
    for (std::size_t i = 0; i < sig.q; ++i)
      for (std::size_t j = 0; j < sig.q; ++j) out(sig.p + i, sig.p + j) = uq(i, j);
    return out;
  };
  const Matrix<T> left = block_unitary();
  const Matrix<T> right = block_unitary();

  Matrix<T> h = Matrix<T>::identity(sig.m());
  std::uniform_real_distribution<double> rapidity(0.0, max_rapidity);
  for (std::size_t i = 0; i < std::min(sig.p, sig.q); ++i) {
    const double r = rapidity(gen);
    const std::size_t a = i, b = sig.p + i;
    h(a, a) = T{std::cosh(r)};
    h(b, b) = T{std::cosh(r)};
    h(a, b) = T{std::sinh(r)};
    h(b, a) = T{std::sinh(r)};
  }
  return left * h * right;
}

}  // namespace hsvd
