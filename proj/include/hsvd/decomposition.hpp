#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "hsvd/error.hpp"
#include "hsvd/linalg.hpp"
#include "hsvd/matrix.hpp"
#include "hsvd/signature.hpp"

namespace hsvd {

/// j, l, t characterize the decomposition; k, s and rank follow from them.
struct HsvdInvariants {
  std::size_t j = 0;
  std::size_t l = 0;
  std::size_t t = 0;
  std::size_t k = 0;
  std::size_t s = 0;
  std::size_t rank = 0;

  bool operator==(const HsvdInvariants&) const = default;
};

/// k = m - 2j - l and s = p - j - l + t. Throws Infeasible unless
/// k >= 0 and 0 <= s <= k.
inline std::pair<std::size_t, std::size_t> derive_k_s(const HsvdInvariants& inv, const Signature& sig) {
  const long long m = static_cast<long long>(sig.m());
  const long long p = static_cast<long long>(sig.p);
  const long long j = static_cast<long long>(inv.j);
  const long long l = static_cast<long long>(inv.l);
  const long long t = static_cast<long long>(inv.t);
  if (t > l) throw error(errc::infeasible, "t <= l violated");
  const long long k = m - 2 * j - l;
  const long long s = p - j - l + t;
  if (k < 0) throw error(errc::infeasible, "k = m - 2j - l is negative");
  if (s < 0) throw error(errc::infeasible, "s = p - j - l + t is negative (l - t + j <= p violated)");
  if (s > k) throw error(errc::infeasible, "s > k (t + j <= q violated)");
  return {static_cast<std::size_t>(k), static_cast<std::size_t>(s)};
}

// Builds a complete invariant record from (j, l, t).
inline HsvdInvariants make_invariants(std::size_t j, std::size_t l, std::size_t t, const Signature& sig) {
  HsvdInvariants inv{j, l, t, 0, 0, j + l};
  std::tie(inv.k, inv.s) = derive_k_s(inv, sig);
  return inv;
}

enum class Orientation { left, right };

inline std::string to_string(Orientation o) { return o == Orientation::left ? "left" : "right"; }

/// Structure of Sigma. m = p + q is always the signature dimension and n the
/// other one: right orientation Sigma is m x n (V^H B U = Sigma), left
/// orientation is n x m (A = U Sigma V^H).
struct SigmaForm {
  Orientation orientation = Orientation::right;
  std::size_t m = 0;
  std::size_t n = 0;
  Signature signature;
  HsvdInvariants invariants;
  std::vector<double> pos_values;  // diagonal of P, descending
  std::vector<double> neg_values;  // diagonal of Q, descending

  std::size_t rows() const noexcept { return orientation == Orientation::right ? m : n; }
  std::size_t cols() const noexcept { return orientation == Orientation::right ? n : m; }

  void validate() const {
    const auto& inv = invariants;
    if (m != signature.m()) throw error(errc::infeasible, "m differs from p + q");
    if (pos_values.size() != inv.l - std::min(inv.t, inv.l))
      throw error(errc::infeasible, "pos_values must hold l - t entries");
    if (neg_values.size() != inv.t) throw error(errc::infeasible, "neg_values must hold t entries");
    if (inv.rank != inv.j + inv.l) throw error(errc::infeasible, "rank != j + l");
    if (inv.l + inv.j > n) throw error(errc::infeasible, "l + j <= n violated");
    const auto [k, s] = derive_k_s(inv, signature);
    if (k != inv.k || s != inv.s) throw error(errc::infeasible, "k, s disagree with j, l, t");
    for (const auto* list : {&pos_values, &neg_values}) {
      for (std::size_t i = 0; i < list->size(); ++i) {
        if (!((*list)[i] > 0.0)) throw error(errc::infeasible, "hyperbolic singular values must be positive");
        if (i > 0 && (*list)[i] > (*list)[i - 1])
          throw error(errc::infeasible, "hyperbolic singular values must be descending");
      }
    }
  }
};

/// Dense Sigma. Right orientation, with a = l - t:
///   rows 0..a-1       carry P on columns 0..a-1
///   rows p..p+t-1     carry Q on columns a..l-1
///   rows a..a+j-1 and rows p+t..p+t+j-1 carry I_j on columns l..l+j-1
/// Left orientation is the transpose. Every other entry is exactly zero.
template <Scalar T = double>
Matrix<T> build_sigma_dense(const SigmaForm& sf) {
  sf.validate();
  const auto& inv = sf.invariants;
  const std::size_t p = sf.signature.p;
  const std::size_t a = inv.l - inv.t;
  Matrix<T> right(sf.m, sf.n);
  for (std::size_t i = 0; i < a; ++i) right(i, i) = T{sf.pos_values[i]};
  for (std::size_t i = 0; i < inv.t; ++i) right(p + i, a + i) = T{sf.neg_values[i]};
  for (std::size_t i = 0; i < inv.j; ++i) {
    right(a + i, inv.l + i) = T{1};
    right(p + inv.t + i, inv.l + i) = T{1};
  }
  return sf.orientation == Orientation::right ? right : right.transpose();
}

template <Scalar T>
struct HsvdFactors {
  Matrix<T> U;  // n x n unitary
  Matrix<T> V;  // m x m J-unitary
  SigmaForm sigma;
  double residual = 0.0;
  ToleranceConfig tolerances;
};

namespace detail {

template <Scalar T>
void require_rows(const Matrix<T>& b, const Signature& sig) {
  if (b.rows() != sig.m())
    throw error(errc::signature_mismatch, "matrix has " + std::to_string(b.rows()) + " rows but p + q = " +
                                              std::to_string(sig.m()));
}

// Eigen-structure of B^H J B with the zero/positive/negative split.
template <Scalar T>
struct Spectrum {
  EigenResult<T> eig;
  std::vector<std::size_t> positive;  // descending lambda
  std::vector<std::size_t> negative;  // descending |lambda|
  std::vector<std::size_t> zero;
  std::size_t rank_b = 0;
};

template <Scalar T>
Spectrum<T> classify_spectrum(const Matrix<T>& b, const Signature& sig, const ToleranceConfig& tol) {
  require_rows(b, sig);
  tol.validate();
  const Matrix<T> m = adjoint_times(b, apply_j(sig, b));
  Spectrum<T> out;
  out.eig = hermitian_eigendecompose(m, tol);
  const auto& lam = out.eig.values;
  // Scale by sigma_max(B)^2, which bounds |lambda|. The eigenvalues alone are
  // no scale: when B^H J B vanishes they are all rounding noise.
  const auto sv = b.empty() ? std::vector<double>{} : svd(b).values;
  const double smax = sv.empty() ? 0.0 : sv.front();
  const std::size_t dim = std::max(b.rows(), b.cols());
  const double thr = rank_threshold(smax * smax, dim, dim, tol);
  for (std::size_t i = 0; i < lam.size(); ++i) {
    if (lam[i] > thr)
      out.positive.push_back(i);
    else if (lam[i] < -thr)
      out.negative.push_back(i);
    else
      out.zero.push_back(i);
  }
  std::reverse(out.negative.begin(), out.negative.end());
  const double sthr = rank_threshold(smax, b.rows(), b.cols(), tol);
  out.rank_b = static_cast<std::size_t>(std::count_if(sv.begin(), sv.end(), [&](double x) { return x > sthr; }));
  const std::size_t l = out.positive.size() + out.negative.size();
  if (out.rank_b < l)
    throw error(errc::internal_invariant_violation, "rank(B) < rank(B^H J B); tolerance is inconsistent");
  return out;
}

template <Scalar T>
HsvdInvariants invariants_from(const Spectrum<T>& sp, const Signature& sig) {
  const std::size_t l = sp.positive.size() + sp.negative.size();
  return make_invariants(sp.rank_b - l, l, sp.negative.size(), sig);
}

}  // namespace detail

/// l = rank(B^H J B), t = its count of negative eigenvalues,
/// j = rank(B) - l, with k and s derived.
template <Scalar T>
HsvdInvariants compute_invariants(const Matrix<T>& b, const Signature& sig, const ToleranceConfig& tol = {}) {
  return detail::invariants_from(detail::classify_spectrum(b, sig, tol), sig);
}

/// Eigenvalues of B^H J B in descending order.
template <Scalar T>
std::vector<double> gram_eigenvalues(const Matrix<T>& b, const Signature& sig, const ToleranceConfig& tol = {}) {
  return detail::classify_spectrum(b, sig, tol).eig.values;
}

/// Pair of defects for the identities
///   (B^H J B) U = U (Sigma^T J Sigma)   and   (J B B^H) V = V (J Sigma Sigma^T)
/// evaluated in the right orientation (B is m x n, Sigma is m x n).
template <Scalar T>
std::pair<double, double> eq12_defects(const Matrix<T>& b, const Signature& sig, const Matrix<T>& u,
                                       const Matrix<T>& v, const Matrix<T>& sigma) {
  const Matrix<T> gram = adjoint_times(b, apply_j(sig, b));
  const Matrix<T> st_j_s = adjoint_times(sigma, apply_j(sig, sigma));
  const Matrix<T> jbbh = apply_j(sig, b * b.adjoint());
  const Matrix<T> j_s_st = apply_j(sig, sigma * sigma.adjoint());
  return {frobenius_norm(gram * u - u * st_j_s), frobenius_norm(jbbh * v - v * j_s_st)};
}

/// Hyperbolic SVD with the J-unitary factor on the left: V^H B U = Sigma.
///
/// U's columns are eigenvectors of B^H J B (positive, then negative, then the
/// j vectors of ker(B^H J B) outside ker(B), then ker(B)). V's matching
/// columns are sign(lambda) J B u / sqrt|lambda|; the degenerate directions
/// c_i = J B u_i are isotropic and get paired via isotropic_pair_complete.
/// The rest of V is a J-orthonormal basis of the part of ker(B^H) that is
/// J-orthogonal to the duals.
template <Scalar T>
HsvdFactors<T> hsvd_right(const Matrix<T>& b, const Signature& sig, const ToleranceConfig& tol = {}) {
  const auto sp = detail::classify_spectrum(b, sig, tol);
  const HsvdInvariants inv = detail::invariants_from(sp, sig);
  const std::size_t m = sig.m();
  const std::size_t n = b.cols();
  const std::size_t j = inv.j;
  const auto& lam = sp.eig.values;
  const auto& w = sp.eig.vectors;

  const Matrix<T> w_pos = select_columns(w, std::span<const std::size_t>(sp.positive));
  const Matrix<T> w_neg = select_columns(w, std::span<const std::size_t>(sp.negative));
  const Matrix<T> z = select_columns(w, std::span<const std::size_t>(sp.zero));

  // Split ker(B^H J B) into the j directions B does not annihilate and ker(B).
  Matrix<T> y(n, 0), ker(n, 0);
  if (z.cols() > 0) {
    if (j > z.cols()) throw error(errc::internal_invariant_violation, "j exceeds dim ker(B^H J B)");
    const auto cs = svd(b * z);
    const Matrix<T> rotated = z * cs.right;
    y = rotated.block(0, 0, n, j);
    ker = rotated.block(0, j, n, z.cols() - j);
  }
  Matrix<T> u = hconcat<T>({&w_pos, &w_neg, &y, &ker}, n);

  const Matrix<T> jb = apply_j(sig, b);
  Matrix<T> v_pos = jb * w_pos;
  for (std::size_t i = 0; i < sp.positive.size(); ++i) {
    const double scale = 1.0 / std::sqrt(lam[sp.positive[i]]);
    for (std::size_t r = 0; r < m; ++r) v_pos(r, i) *= scale;
  }
  Matrix<T> v_neg = jb * w_neg;
  for (std::size_t i = 0; i < sp.negative.size(); ++i) {
    const double scale = -1.0 / std::sqrt(-lam[sp.negative[i]]);
    for (std::size_t r = 0; r < m; ++r) v_neg(r, i) *= scale;
  }
  const Matrix<T> c = jb * y;

  const Matrix<T> nondeg = hconcat<T>({&v_pos, &v_neg}, m);
  IsotropicPairs<T> pairs{Matrix<T>(m, 0), Matrix<T>(m, 0), Matrix<T>(m, 0)};
  if (j > 0) {
    const Matrix<T> ambient = trailing_right_singular_vectors(apply_j(sig, nondeg).adjoint(), m - inv.l);
    pairs = isotropic_pair_complete(sig, c, ambient, tol);
  }

  // Completion: J-orthogonal complement of everything placed so far.
  Matrix<T> comp_pos(m, 0), comp_neg(m, 0);
  if (inv.k > 0) {
    const Matrix<T> placed = hconcat<T>({&nondeg, &c, &pairs.duals}, m);
    Matrix<T> x = trailing_right_singular_vectors(apply_j(sig, placed).adjoint(), inv.k);
    // Rotate onto eigenvectors of the J-Gram matrix so that pivoted
    // Gram-Schmidt never starts from isotropic candidates.
    const auto g = hermitian_eigendecompose(j_gram(sig, x, x), tol);
    x = x * g.vectors;
    const auto basis = hyperbolic_gram_schmidt(sig, x, tol);
    std::vector<Matrix<T>> pos, neg;
    for (const auto& col : basis) (col.j_norm_sign > 0 ? pos : neg).push_back(col.vector);
    if (pos.size() != inv.s || neg.size() != inv.k - inv.s)
      throw error(errc::internal_invariant_violation, "completion inertia differs from (s, k - s)");
    comp_pos = Matrix<T>(m, pos.size());
    comp_neg = Matrix<T>(m, neg.size());
    for (std::size_t i = 0; i < pos.size(); ++i) comp_pos.set_col(i, pos[i]);
    for (std::size_t i = 0; i < neg.size(); ++i) comp_neg.set_col(i, neg[i]);
    for (std::size_t i = 0; i < comp_pos.cols(); ++i) normalize_phase(comp_pos, i);
    for (std::size_t i = 0; i < comp_neg.cols(); ++i) normalize_phase(comp_neg, i);
  }

  Matrix<T> v = hconcat<T>({&v_pos, &pairs.plus, &comp_pos, &v_neg, &pairs.minus, &comp_neg}, m);

  HsvdFactors<T> out;
  out.sigma.orientation = Orientation::right;
  out.sigma.m = m;
  out.sigma.n = n;
  out.sigma.signature = sig;
  out.sigma.invariants = inv;
  for (std::size_t i : sp.positive) out.sigma.pos_values.push_back(std::sqrt(lam[i]));
  for (std::size_t i : sp.negative) out.sigma.neg_values.push_back(std::sqrt(-lam[i]));
  out.residual = frobenius_norm(adjoint_times(v, b) * u - build_sigma_dense<T>(out.sigma));
  out.U = std::move(u);
  out.V = std::move(v);
  out.tolerances = tol;
  return out;
}

/// Hyperbolic SVD with the J-unitary factor on the right: A = U Sigma V^H,
/// A is n x m. Runs hsvd_right on B = A^H; then U = U0, Sigma = Sigma0^T and
/// V = J V0 J.
template <Scalar T>
HsvdFactors<T> hsvd_left(const Matrix<T>& a, const Signature& sig, const ToleranceConfig& tol = {}) {
  if (a.cols() != sig.m())
    throw error(errc::signature_mismatch, "matrix has " + std::to_string(a.cols()) + " columns but p + q = " +
                                              std::to_string(sig.m()));
  HsvdFactors<T> f = hsvd_right(a.adjoint(), sig, tol);
  f.V = j_conjugate(sig, f.V);
  f.sigma.orientation = Orientation::left;
  f.residual = frobenius_norm(a - f.U * build_sigma_dense<T>(f.sigma) * f.V.adjoint());
  return f;
}

/// The q = 0 special case: an ordinary SVD V^H B U = Sigma.
template <Scalar T>
HsvdFactors<T> ordinary_svd(const Matrix<T>& b, const ToleranceConfig& tol = {}) {
  HsvdFactors<T> f = hsvd_right(b, Signature(b.rows(), 0), tol);
  if (f.sigma.invariants.j != 0 || f.sigma.invariants.t != 0)
    throw error(errc::internal_invariant_violation, "j or t nonzero with a definite signature");
  return f;
}

}  // namespace hsvd
