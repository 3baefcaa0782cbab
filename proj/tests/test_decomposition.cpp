#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "support.hpp"

namespace hsvd {
namespace {

using test::checked_left;
using test::checked_right;
using test::random_matrix;

TEST(ComputeInvariants, FirstWorkedExample) {
  const auto inv = compute_invariants(Matrix<double>{{1}, {2}}, Signature(1, 1));
  EXPECT_EQ(inv.j, 0u);
  EXPECT_EQ(inv.l, 1u);
  EXPECT_EQ(inv.t, 1u);
  EXPECT_EQ(inv.k, 1u);
  EXPECT_EQ(inv.s, 1u);
  EXPECT_EQ(inv.rank, 1u);
  const auto eig = gram_eigenvalues(Matrix<double>{{1}, {2}}, Signature(1, 1));
  ASSERT_EQ(eig.size(), 1u);
  EXPECT_DOUBLE_EQ(eig[0], -3.0);
}

TEST(ComputeInvariants, DegenerateWorkedExample) {
  const auto inv = compute_invariants(Matrix<double>{{2}, {2}}, Signature(1, 1));
  EXPECT_EQ(inv, (HsvdInvariants{1, 0, 0, 0, 0, 1}));
}

TEST(ComputeInvariants, ZeroMatrix) {
  const auto inv = compute_invariants(Matrix<cplx>(5, 3), Signature(3, 2));
  EXPECT_EQ(inv, (HsvdInvariants{0, 0, 0, 5, 3, 0}));
}

TEST(ComputeInvariants, SignatureMismatch) {
  try {
    compute_invariants(Matrix<double>(3, 1), Signature(1, 1));
    FAIL();
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::signature_mismatch);
  }
}

TEST(DeriveKS, Examples) {
  EXPECT_EQ(derive_k_s(HsvdInvariants{0, 1, 1}, Signature(1, 1)), (std::pair<std::size_t, std::size_t>{1, 1}));
  EXPECT_EQ(derive_k_s(HsvdInvariants{1, 0, 0}, Signature(1, 1)), (std::pair<std::size_t, std::size_t>{0, 0}));
  EXPECT_EQ(derive_k_s(HsvdInvariants{1, 2, 1}, Signature(3, 3)), (std::pair<std::size_t, std::size_t>{2, 1}));
}

TEST(DeriveKS, InfeasibleCombinations) {
  for (const auto& inv : {HsvdInvariants{2, 0, 0}, HsvdInvariants{0, 2, 0}, HsvdInvariants{1, 1, 1},
                          HsvdInvariants{0, 1, 2}}) {
    try {
      derive_k_s(inv, Signature(1, 1));
      FAIL() << inv.j << inv.l << inv.t;
    } catch (const error& e) {
      EXPECT_EQ(e.code(), errc::infeasible);
    }
  }
}

SigmaForm right_form(const Signature& sig, std::size_t n, HsvdInvariants inv, std::vector<double> pos,
                     std::vector<double> neg) {
  SigmaForm sf;
  sf.m = sig.m();
  sf.n = n;
  sf.signature = sig;
  inv.rank = inv.j + inv.l;
  std::tie(inv.k, inv.s) = derive_k_s(inv, sig);
  sf.invariants = inv;
  sf.pos_values = std::move(pos);
  sf.neg_values = std::move(neg);
  return sf;
}

TEST(BuildSigmaDense, Examples) {
  const double r3 = std::sqrt(3.0);
  EXPECT_EQ(build_sigma_dense(right_form(Signature(1, 1), 1, {0, 1, 1}, {}, {r3})), (Matrix<double>{{0}, {r3}}));
  EXPECT_EQ(build_sigma_dense(right_form(Signature(1, 1), 1, {1, 0, 0}, {}, {})), (Matrix<double>{{1}, {1}}));
  EXPECT_EQ(build_sigma_dense(right_form(Signature(2, 0), 2, {0, 2, 0}, {3, 1}, {})),
            (Matrix<double>{{3, 0}, {0, 1}}));
  auto left = right_form(Signature(1, 1), 1, {0, 1, 1}, {}, {1.0});
  left.orientation = Orientation::left;
  EXPECT_EQ(build_sigma_dense(left), (Matrix<double>{{0, 1}}));
}

TEST(BuildSigmaDense, MixedLayout) {
  // p = 3, q = 3, n = 4, j = 1, l = 2, t = 1: a = 1.
  const auto s = build_sigma_dense(right_form(Signature(3, 3), 4, {1, 2, 1}, {5}, {2}));
  Matrix<double> expected(6, 4);
  expected(0, 0) = 5;
  expected(3, 1) = 2;
  expected(1, 2) = 1;
  expected(4, 2) = 1;
  EXPECT_EQ(s, expected);
}

TEST(BuildSigmaDense, RejectsUnsortedValues) {
  EXPECT_THROW(build_sigma_dense(right_form(Signature(2, 0), 2, {0, 2, 0}, {1, 3}, {})), error);
}

TEST(HsvdRight, FirstWorkedExample) {
  const Matrix<double> b{{1}, {2}};
  const auto f = checked_right(b, Signature(1, 1));
  const double r3 = std::sqrt(3.0);
  EXPECT_EQ(f.sigma.invariants, (HsvdInvariants{0, 1, 1, 1, 1, 1}));
  ASSERT_EQ(f.sigma.neg_values.size(), 1u);
  EXPECT_NEAR(f.sigma.neg_values[0], r3, 1e-14);
  EXPECT_NEAR(std::abs(f.U(0, 0)), 1.0, 1e-15);
  // Up to sign, V = [(2, 1) | (1, 2)] / sqrt(3).
  EXPECT_NEAR(std::abs(f.V(0, 0)), 2 / r3, 1e-14);
  EXPECT_NEAR(std::abs(f.V(1, 0)), 1 / r3, 1e-14);
  EXPECT_NEAR(std::abs(f.V(0, 1)), 1 / r3, 1e-14);
  EXPECT_NEAR(std::abs(f.V(1, 1)), 2 / r3, 1e-14);
  EXPECT_LE(f.residual, 1e-14);
}

TEST(HsvdRight, DegenerateWorkedExample) {
  const Matrix<double> b{{2}, {2}};
  const auto f = checked_right(b, Signature(1, 1));
  EXPECT_EQ(f.sigma.invariants, (HsvdInvariants{1, 0, 0, 0, 0, 1}));
  EXPECT_EQ(build_sigma_dense(f.sigma), (Matrix<double>{{1}, {1}}));
  EXPECT_DOUBLE_EQ(f.U(0, 0), 1.0);
  EXPECT_NEAR(f.V(0, 0), 1.25, 1e-15);
  EXPECT_NEAR(f.V(0, 1), -0.75, 1e-15);
  EXPECT_NEAR(f.V(1, 0), -0.75, 1e-15);
  EXPECT_NEAR(f.V(1, 1), 1.25, 1e-15);
  EXPECT_LE(f.residual, 1e-15);
}

TEST(HsvdRight, DefiniteIdentity) {
  const auto f = checked_right(Matrix<double>::identity(2), Signature(2, 0));
  EXPECT_EQ(f.U, Matrix<double>::identity(2));
  EXPECT_EQ(f.V, Matrix<double>::identity(2));
  EXPECT_EQ(f.sigma.pos_values, (std::vector<double>{1, 1}));
}

TEST(HsvdRight, ZeroMatrixIsAllCompletion) {
  const Signature sig(2, 3);
  const auto f = checked_right(Matrix<cplx>(5, 2), sig);
  EXPECT_EQ(f.sigma.invariants.k, 5u);
  EXPECT_EQ(f.sigma.invariants.s, 2u);
  EXPECT_LE(is_j_unitary(sig, f.V, 0.0).defect, 1e-12);
}

TEST(HsvdLeft, OneByTwoExample) {
  const Matrix<double> a{{0, 1}};
  const auto f = checked_left(a, Signature(1, 1));
  EXPECT_EQ(f.sigma.orientation, Orientation::left);
  EXPECT_EQ(build_sigma_dense(f.sigma), (Matrix<double>{{0, 1}}));
  EXPECT_LE(f.residual, 1e-14);
  const Matrix<double> sigma = build_sigma_dense(f.sigma);
  EXPECT_LE(frobenius_norm(f.U * sigma * f.V.adjoint() - a), 1e-14);
}

TEST(HsvdLeft, ZeroInput) {
  const Signature sig(2, 1);
  const auto f = checked_left(Matrix<double>(2, 3), sig);
  EXPECT_EQ(f.sigma.invariants, (HsvdInvariants{0, 0, 0, 3, 2, 0}));
}

TEST(HsvdLeft, ColumnCountMustMatchSignature) {
  try {
    hsvd_left(Matrix<double>(2, 2), Signature(2, 1));
    FAIL();
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::signature_mismatch);
  }
}

TEST(OrdinarySvd, Examples) {
  const auto d = ordinary_svd(Matrix<double>{{3, 0}, {0, 1}});
  EXPECT_EQ(d.sigma.pos_values, (std::vector<double>{3, 1}));
  const auto c = ordinary_svd(Matrix<double>{{1}, {2}});
  ASSERT_EQ(c.sigma.pos_values.size(), 1u);
  EXPECT_NEAR(c.sigma.pos_values[0], std::sqrt(5.0), 1e-15);
  EXPECT_LE(unitary_defect(c.V), 1e-15);
}

TEST(OrdinarySvd, MatchesIndependentOracle) {
  const auto a = random_matrix<double>(4, 3, 31);
  const auto f = ordinary_svd(a);
  const auto oracle = test::eigen_singular_values(a);
  ASSERT_EQ(f.sigma.pos_values.size(), oracle.size());
  for (std::size_t i = 0; i < oracle.size(); ++i) EXPECT_NEAR(f.sigma.pos_values[i], oracle[i], 1e-10);
  EXPECT_LE(unitary_defect(f.V), 1e-12);
}

template <Scalar T>
void synthetic_roundtrip(const Signature& sig, std::size_t n, std::size_t j, std::size_t l, std::size_t t,
                         std::uint64_t seed) {
  const auto spec = make_synth_spec(sig, n, j, l, t, seed, 1.0);
  const auto sc = synth_case<T>(spec);
  const auto f = checked_right(sc.B, sig);
  EXPECT_EQ(f.sigma.invariants, spec.invariants);
  for (std::size_t i = 0; i < spec.pos_values.size(); ++i)
    EXPECT_NEAR(f.sigma.pos_values[i], spec.pos_values[i], 1e-9);
  for (std::size_t i = 0; i < spec.neg_values.size(); ++i)
    EXPECT_NEAR(f.sigma.neg_values[i], spec.neg_values[i], 1e-9);
}

TEST(HsvdRight, SyntheticRoundTripReal) {
  synthetic_roundtrip<double>(Signature(3, 3), 4, 1, 2, 1, 5);
  synthetic_roundtrip<double>(Signature(2, 4), 5, 2, 2, 2, 6);
  synthetic_roundtrip<double>(Signature(4, 1), 2, 0, 2, 0, 7);
}

TEST(HsvdRight, SyntheticRoundTripComplex) {
  synthetic_roundtrip<cplx>(Signature(3, 3), 4, 1, 2, 1, 8);
  synthetic_roundtrip<cplx>(Signature(2, 2), 3, 2, 0, 0, 9);
  synthetic_roundtrip<cplx>(Signature(1, 5), 6, 0, 1, 1, 10);
}

TEST(HsvdProperties, GaugeInvariance) {
  // W B Q with W J-unitary and Q unitary has the same invariants and values.
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Signature sig(1 + seed % 3, 1 + seed % 2);
    const auto b = random_matrix<cplx>(sig.m(), 3, seed);
    const auto w = j_unitary_random<cplx>(sig, seed + 50, 0.8);
    const auto q = unitary_random<cplx>(3, seed + 60);
    const auto f0 = checked_right(b, sig);
    const auto f1 = checked_right(Matrix<cplx>(w * b * q), sig);
    EXPECT_EQ(f0.sigma.invariants, f1.sigma.invariants);
    for (std::size_t i = 0; i < f0.sigma.pos_values.size(); ++i)
      EXPECT_NEAR(f0.sigma.pos_values[i], f1.sigma.pos_values[i], 1e-8 * (1 + f0.sigma.pos_values[i]));
    for (std::size_t i = 0; i < f0.sigma.neg_values.size(); ++i)
      EXPECT_NEAR(f0.sigma.neg_values[i], f1.sigma.neg_values[i], 1e-8 * (1 + f0.sigma.neg_values[i]));
  }
}

TEST(HsvdProperties, Scaling) {
  const Signature sig(2, 2);
  const auto b = random_matrix<double>(4, 3, 77);
  const auto f0 = checked_right(b, sig);
  const auto f1 = checked_right(Matrix<double>(b * -2.5), sig);
  EXPECT_EQ(f0.sigma.invariants, f1.sigma.invariants);
  for (std::size_t i = 0; i < f0.sigma.pos_values.size(); ++i)
    EXPECT_NEAR(f1.sigma.pos_values[i], 2.5 * f0.sigma.pos_values[i], 1e-10);
  for (std::size_t i = 0; i < f0.sigma.neg_values.size(); ++i)
    EXPECT_NEAR(f1.sigma.neg_values[i], 2.5 * f0.sigma.neg_values[i], 1e-10);
}

TEST(HsvdProperties, DefiniteSignatureHasNoNegativeOrIsotropicPart) {
  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    const auto b = random_matrix<double>(1 + seed % 5, 1 + seed % 4, seed);
    const auto f = checked_right(b, Signature(b.rows(), 0));
    EXPECT_EQ(f.sigma.invariants.j, 0u);
    EXPECT_EQ(f.sigma.invariants.t, 0u);
  }
}

TEST(HsvdProperties, ValueCountBound) {
  std::mt19937_64 gen(404);
  for (int trial = 0; trial < 30; ++trial) {
    const Signature sig(gen() % 4, 1 + gen() % 3);
    const std::size_t n = 1 + gen() % 4;
    const std::size_t r = gen() % (std::min(sig.m(), n) + 1);
    const auto b = random_matrix<cplx>(sig.m(), r, gen()) * random_matrix<cplx>(r, n, gen());
    const auto f = checked_right(b, sig);
    const auto& inv = f.sigma.invariants;
    EXPECT_LE(inv.l, std::min(sig.m() - 2 * inv.j, n - inv.j));
    EXPECT_EQ(inv.rank, numerical_rank(b));
  }
}

}  // namespace
}  // namespace hsvd
