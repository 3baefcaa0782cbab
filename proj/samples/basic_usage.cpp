// Decomposes a 2 x 1 matrix against J = diag(1, -1) and prints the factors.
#include <cstdio>

#include "hsvd/hsvd.hpp"

int main() {
  using hsvd::Matrix;
  const Matrix<double> b{{1.0}, {2.0}};
  const hsvd::Signature sig(1, 1);

  const auto f = hsvd::hsvd_right(b, sig);
  const auto& inv = f.sigma.invariants;
  std::printf("j=%zu l=%zu t=%zu k=%zu s=%zu\n", inv.j, inv.l, inv.t, inv.k, inv.s);
  for (double v : f.sigma.pos_values) std::printf("P: %.17g\n", v);
  for (double v : f.sigma.neg_values) std::printf("Q: %.17g\n", v);

  const auto sigma = hsvd::build_sigma_dense(f.sigma);
  std::printf("Sigma = (%g, %g)^T\n", sigma(0, 0), sigma(1, 0));
  std::printf("V =\n");
  for (std::size_t i = 0; i < f.V.rows(); ++i) std::printf("  % .12f % .12f\n", f.V(i, 0), f.V(i, 1));
  std::printf("residual %.3g, J-unitary defect %.3g\n", f.residual, hsvd::is_j_unitary(sig, f.V, 1e-12).defect);
}
