#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "hsvd/decomposition.hpp"
#include "hsvd/error.hpp"
#include "hsvd/linalg.hpp"
#include "hsvd/matrix.hpp"
#include "hsvd/signature.hpp"

namespace hsvd {

/// Quality report for a factor triple against its input matrix.
struct VerifyReport {
  double residual = 0.0;
  double unitary_defect = 0.0;
  double j_unitary_defect = 0.0;
  bool sigma_pattern_ok = false;
  bool invariants_match = false;
  std::pair<double, double> eq12_defects{0.0, 0.0};

  // Thresholds the defects were compared against.
  double residual_bound = 0.0;
  double unitary_bound = 0.0;
  double j_unitary_bound = 0.0;
  std::pair<double, double> eq12_bounds{0.0, 0.0};

  bool residual_ok() const { return residual <= residual_bound; }
  bool unitary_ok() const { return unitary_defect <= unitary_bound; }
  bool j_unitary_ok() const { return j_unitary_defect <= j_unitary_bound; }
  bool eq12_ok() const { return eq12_defects.first <= eq12_bounds.first && eq12_defects.second <= eq12_bounds.second; }
  bool passed() const {
    return residual_ok() && unitary_ok() && j_unitary_ok() && sigma_pattern_ok && invariants_match && eq12_ok();
  }
};

/// Growth factor for a J-unitary V, whose norm is unbounded: 1 + ||V||_F^2 / m.
template <Scalar T>
double cond_scale(const Matrix<T>& v) {
  return 1.0 + abs2(frobenius_norm(v)) / static_cast<double>(std::max<std::size_t>(v.rows(), 1));
}

/// Checks factors of either orientation. `input` is B (m x n) for right
/// factors and A (n x m) for left factors. Bounds scale with ||input||_F and
/// with cond_scale(V); the Gram identities are evaluated on the right
/// view B = A^H, V0 = J V J.
template <Scalar T>
VerifyReport check_factors(const Matrix<T>& input, const Signature& sig, const HsvdFactors<T>& f,
                           const ToleranceConfig& tol = {}) {
  const std::size_t m = sig.m();
  const bool right = f.sigma.orientation == Orientation::right;
  const Matrix<T> b = right ? input : input.adjoint();
  if (b.rows() != m) throw error(errc::dimension_mismatch, "input does not match p + q");
  const std::size_t n = b.cols();
  if (f.U.rows() != n || f.U.cols() != n) throw error(errc::dimension_mismatch, "U must be n x n");
  if (f.V.rows() != m || f.V.cols() != m) throw error(errc::dimension_mismatch, "V must be m x m");
  if (f.sigma.m != m || f.sigma.n != n) throw error(errc::dimension_mismatch, "Sigma dimensions disagree with input");

  VerifyReport r;
  Matrix<T> sigma_dense;
  try {
    if (!(f.sigma.signature == sig)) throw error(errc::infeasible, "signature mismatch");
    sigma_dense = build_sigma_dense<T>(f.sigma);
    r.sigma_pattern_ok = true;
  } catch (const error&) {
    r.sigma_pattern_ok = false;
  }

  const double bnorm = frobenius_norm(b);
  const double cond = cond_scale(f.V);
  const double rt = tol.residual_tol;

  if (r.sigma_pattern_ok) {
    r.residual = right ? frobenius_norm(adjoint_times(f.V, b) * f.U - sigma_dense)
                       : frobenius_norm(input - f.U * sigma_dense * f.V.adjoint());
    const Matrix<T> sigma_right = right ? sigma_dense : sigma_dense.transpose();
    const Matrix<T> v0 = right ? f.V : j_conjugate(sig, f.V);
    r.eq12_defects = eq12_defects(b, sig, f.U, v0, sigma_right);
  } else {
    r.residual = std::numeric_limits<double>::infinity();
    r.eq12_defects = {r.residual, r.residual};
  }
  r.unitary_defect = unitary_defect(f.U);
  r.j_unitary_defect = is_j_unitary(sig, f.V, 0.0).defect;

  try {
    r.invariants_match = compute_invariants(b, sig, tol) == f.sigma.invariants;
  } catch (const error&) {
    r.invariants_match = false;
  }

  r.residual_bound = rt * (1.0 + bnorm) * cond;
  r.unitary_bound = rt * (1.0 + static_cast<double>(n));
  r.j_unitary_bound = rt * (1.0 + abs2(frobenius_norm(f.V)));
  r.eq12_bounds = {rt * (1.0 + bnorm * bnorm), rt * (1.0 + bnorm * bnorm) * cond};
  return r;
}

/// Parameters of a synthetic matrix with prescribed invariants.
struct SynthSpec {
  Signature signature;
  std::size_t n = 1;
  HsvdInvariants invariants;
  std::vector<double> pos_values;
  std::vector<double> neg_values;
  std::uint64_t seed = 0;
  double max_rapidity = 1.0;

  SigmaForm sigma_form() const {
    SigmaForm sf;
    sf.orientation = Orientation::right;
    sf.m = signature.m();
    sf.n = n;
    sf.signature = signature;
    sf.invariants = invariants;
    sf.pos_values = pos_values;
    sf.neg_values = neg_values;
    return sf;
  }

  void validate() const {
    const auto& inv = invariants;
    if (inv.t > inv.l) throw error(errc::infeasible, "t <= l violated");
    if (inv.l - inv.t + inv.j > signature.p) throw error(errc::infeasible, "l - t + j <= p violated");
    if (inv.t + inv.j > signature.q) throw error(errc::infeasible, "t + j <= q violated");
    if (inv.l + inv.j > n) throw error(errc::infeasible, "l + j <= n violated");
    if (n == 0) throw error(errc::infeasible, "n >= 1 violated");
    if (max_rapidity < 0.0) throw error(errc::infeasible, "rapidity >= 0 violated");
    sigma_form().validate();
  }
};

/// SynthSpec with hyperbolic singular values drawn from [0.5, 3] (distinct,
/// descending) using `seed`.
inline SynthSpec make_synth_spec(const Signature& sig, std::size_t n, std::size_t j, std::size_t l, std::size_t t,
                                 std::uint64_t seed, double max_rapidity) {
  SynthSpec spec;
  spec.signature = sig;
  spec.n = n;
  spec.seed = seed;
  spec.max_rapidity = max_rapidity;
  if (t > l) throw error(errc::infeasible, "t <= l violated");
  if (l - t + j > sig.p) throw error(errc::infeasible, "l - t + j <= p violated");
  if (t + j > sig.q) throw error(errc::infeasible, "t + j <= q violated");
  if (l + j > n) throw error(errc::infeasible, "l + j <= n violated");
  spec.invariants = make_invariants(j, l, t, sig);
  std::mt19937_64 gen(seed ^ 0x9e3779b97f4a7c15ULL);
  std::uniform_real_distribution<double> dist(0.5, 3.0);
  auto draw = [&](std::size_t count) {
    std::vector<double> v(count);
    for (auto& x : v) x = dist(gen);
    std::sort(v.begin(), v.end(), std::greater<>());
    return v;
  };
  spec.pos_values = draw(l - t);
  spec.neg_values = draw(t);
  spec.validate();
  return spec;
}

template <Scalar T>
struct SynthCase {
  Matrix<T> B;
  HsvdFactors<T> truth;
};

/// B = (J V J) Sigma U^H for given gauges, so that V^H B U = Sigma exactly
/// in exact arithmetic.
template <Scalar T>
SynthCase<T> synth_case_with_gauges(const SynthSpec& spec, const Matrix<T>& u, const Matrix<T>& v) {
  spec.validate();
  const Signature& sig = spec.signature;
  if (u.rows() != spec.n || u.cols() != spec.n || v.rows() != sig.m() || v.cols() != sig.m())
    throw error(errc::dimension_mismatch, "gauge shapes do not match the spec");
  SynthCase<T> out;
  out.truth.sigma = spec.sigma_form();
  const Matrix<T> sigma = build_sigma_dense<T>(out.truth.sigma);
  out.B = j_conjugate(sig, v) * sigma * u.adjoint();
  out.truth.U = u;
  out.truth.V = v;
  out.truth.residual = frobenius_norm(adjoint_times(v, out.B) * u - sigma);
  return out;
}

template <Scalar T>
SynthCase<T> synth_case(const SynthSpec& spec) {
  spec.validate();
  const Matrix<T> u = unitary_random<T>(spec.n, spec.seed);
  const Matrix<T> v = j_unitary_random<T>(spec.signature, spec.seed + 1, spec.max_rapidity);
  return synth_case_with_gauges(spec, u, v);
}

/// Bundle for the 1 x 2 matrix A = (0, 1) with J = diag(1, -1): it has a
/// J-unitary decomposition with Sigma = (0 | 1), but none with Sigma = (d, 0),
/// which is what a hyperexchange-form factorization would give.
struct Lemma1Report {
  // (a) left decomposition
  bool decomposition_ok = false;
  double residual = 0.0;
  double j_unitary_defect = 0.0;
  Matrix<double> sigma;
  HsvdInvariants invariants;

  // (b) infeasibility of A = u (d, 0) V^T over all of O(1,1). Every element
  // is [[s1 cosh r, s2 sinh r], [s1 sinh r, s2 cosh r]], so v11 = s1 cosh r
  // and |v11| >= 1 while u d v11 = 0 forces v11 = 0.
  double min_abs_v11 = 0.0;         // over the scan; analytic value 1
  double min_residual_scan = 0.0;   // min over (r, s1, u d) of ||A - u(d,0)V^T||
  double residual_lower_bound = 0.0;  // analytic infimum 1/sqrt(2)
  bool contradiction_confirmed = false;

  // (c) hyperexchange factorization converted to J-unitary form.
  bool hyperexchange_roundtrip_ok = false;
};

inline Lemma1Report lemma1_fixture() {
  Lemma1Report rep;
  const Signature sig(1, 1);
  const Matrix<double> a{{0.0, 1.0}};

  ToleranceConfig tight;
  tight.residual_tol = 1e-12;
  const auto f = hsvd_left(a, sig, tight);
  rep.residual = f.residual;
  rep.j_unitary_defect = is_j_unitary(sig, f.V, 0.0).defect;
  rep.sigma = build_sigma_dense(f.sigma);
  rep.invariants = f.sigma.invariants;
  rep.decomposition_ok = rep.residual <= 1e-12 && rep.j_unitary_defect <= 1e-12 &&
                         rep.sigma == Matrix<double>{{0.0, 1.0}};

  // With x = u d s1 free, ||A - x (cosh r, sinh r)||^2 is minimized at
  // x = sinh r / cosh 2r, leaving cosh^2 r / cosh 2r > 1/2.
  rep.residual_lower_bound = 1.0 / std::sqrt(2.0);
  rep.min_abs_v11 = std::numeric_limits<double>::infinity();
  rep.min_residual_scan = std::numeric_limits<double>::infinity();
  for (int s1 : {1, -1}) {
    for (int step = -4000; step <= 4000; ++step) {
      const double r = step * 0.00125;
      const double v11 = s1 * std::cosh(r);
      const double v21 = s1 * std::sinh(r);
      rep.min_abs_v11 = std::min(rep.min_abs_v11, std::abs(v11));
      const double x = v21 / (v11 * v11 + v21 * v21);  // optimal u*d
      const double res = std::hypot(x * v11, 1.0 - x * v21);
      rep.min_residual_scan = std::min(rep.min_residual_scan, res);
    }
  }
  rep.contradiction_confirmed =
      rep.min_abs_v11 >= 1.0 && rep.min_residual_scan > rep.residual_lower_bound;

  // Hyperexchange form: U = 1, Sigma_hx = (1, 0), V = [[0,1],[1,0]] with
  // V^T J V = diag(-1, 1).
  const Matrix<double> v_hx{{0.0, 1.0}, {1.0, 0.0}};
  const Matrix<double> sigma_hx{{1.0, 0.0}};
  const std::vector<int> jhat{-1, 1};
  const Matrix<double> perm = hyperexchange_to_junitary(sig, v_hx, jhat);
  const Matrix<double> fj = v_hx * perm;
  const Matrix<double> sigma_new = sigma_hx * perm;
  rep.hyperexchange_roundtrip_ok = frobenius_norm(a - sigma_new * fj.transpose()) <= 1e-15 &&
                                   is_j_unitary(sig, fj, 1e-15).ok && sigma_new == rep.sigma &&
                                   frobenius_norm(a - sigma_hx * v_hx.transpose()) <= 1e-15;
  return rep;
}

}  // namespace hsvd
