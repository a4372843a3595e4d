#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "support/random_states.hpp"
#include "subcool/qudit.hpp"

using namespace subcool;
using subcool::testing::max_abs;

TEST(SpinOperators, SpinHalfIsHalfPauli) {
  const auto S = spin_operators(2);
  Matrix sz(2, 2), sx(2, 2);
  sz << 0.5, 0, 0, -0.5;
  sx << 0, 0.5, 0.5, 0;
  EXPECT_LT(max_abs(S.sz - sz), 1e-15);
  EXPECT_LT(max_abs(S.sx - sx), 1e-15);
  EXPECT_DOUBLE_EQ(S.s, 0.5);
}

TEST(SpinOperators, SpinOneStandardMatrices) {
  const auto S = spin_operators(3);
  Matrix sx(3, 3);
  sx << 0, 1, 0, 1, 0, 1, 0, 1, 0;
  sx /= std::sqrt(2.0);
  EXPECT_LT(max_abs(S.sx - sx), 1e-15);
  EXPECT_LT(max_abs(S.sz - Matrix(RealVector::LinSpaced(3, 1, -1).cast<Complex>().asDiagonal())),
            1e-15);
}

TEST(SpinOperators, CasimirSpinTwo) {
  const auto S = spin_operators(5);
  const Matrix c = S.sx * S.sx + S.sy * S.sy + S.sz * S.sz;
  EXPECT_LT(max_abs(c - 6.0 * Matrix::Identity(5, 5)), 1e-12);
}

TEST(SpinOperators, SzDiagonalDescending) {
  for (int d = 2; d <= 8; ++d) {
    const auto S = spin_operators(d);
    for (int i = 0; i < d; ++i) {
      EXPECT_DOUBLE_EQ(S.sz(i, i).real(), S.s - i);
    }
    EXPECT_LT(max_abs(S.sx - S.sx.adjoint()), 1e-15);
    EXPECT_LT(max_abs(S.sy - S.sy.adjoint()), 1e-15);
  }
}

TEST(SpinOperators, RejectsDimensionBelowTwo) {
  EXPECT_THROW(spin_operators(1), InvalidArgument);
  EXPECT_THROW(spin_operators(0), InvalidArgument);
}

TEST(EnergyOrder, SpinOne) {
  // Index i carries m = 1 - i, so m = -1 is index 2.
  EXPECT_EQ(energy_order(3, 1.0), (std::vector<int>{2, 1, 0}));
  EXPECT_EQ(energy_order(3, -1.0), (std::vector<int>{0, 1, 2}));
  EXPECT_EQ(energy_order(2, 1.0).front(), 1);
  EXPECT_THROW(energy_order(3, 0.0), InvalidArgument);
}

TEST(DensityMatrix, RejectsInvalid) {
  Matrix m = Matrix::Identity(2, 2);
  EXPECT_THROW(DensityMatrix({2}, m), InvalidArgument);  // trace 2
  m << 0.5, 0.1, 0.2, 0.5;
  EXPECT_THROW(DensityMatrix({2}, m), InvalidArgument);  // not Hermitian
  m << 1.5, 0, 0, -0.5;
  EXPECT_THROW(DensityMatrix({2}, m), InvalidArgument);  // negative
  EXPECT_THROW(DensityMatrix({3}, Matrix::Identity(2, 2) / 2.0), InvalidArgument);
  EXPECT_NO_THROW(DensityMatrix({2}, Matrix::Identity(2, 2) / 2.0));
}

TEST(ThermalState, InfiniteTemperatureIsMaximallyMixed) {
  for (int d = 2; d <= 6; ++d) {
    EXPECT_LT(max_abs(thermal_state(d, 1.0, 0.0).matrix() - Matrix::Identity(d, d) / d), 1e-15);
  }
}

TEST(ThermalState, ZeroTemperatureIsGround) {
  const auto rho = thermal_state(3, 1.0, INFINITY);
  EXPECT_DOUBLE_EQ(rho.matrix()(2, 2).real(), 1.0);
  EXPECT_DOUBLE_EQ(rho.trace(), 1.0);
}

TEST(ThermalState, SpinHalfGibbsWeights) {
  // Ground m = -1/2 carries e^{1/2}, excited m = +1/2 carries e^{-1/2}.
  const auto rho = thermal_state(2, 1.0, 1.0);
  const double ground = std::exp(0.5) / (std::exp(0.5) + std::exp(-0.5));
  EXPECT_NEAR(rho.matrix()(1, 1).real(), ground, 1e-15);
  EXPECT_NEAR(rho.matrix()(0, 0).real(), 1.0 - ground, 1e-15);
}

TEST(LowLyingMixture, Ranks) {
  EXPECT_DOUBLE_EQ(low_lying_mixture(3, 1).matrix()(2, 2).real(), 1.0);
  EXPECT_LT(max_abs(low_lying_mixture(4, 4).matrix() - Matrix::Identity(4, 4) / 4.0), 1e-15);
  const auto two = low_lying_mixture(3, 2).matrix();
  EXPECT_DOUBLE_EQ(two(2, 2).real(), 0.5);
  EXPECT_DOUBLE_EQ(two(1, 1).real(), 0.5);
  EXPECT_DOUBLE_EQ(two(0, 0).real(), 0.0);
  EXPECT_THROW(low_lying_mixture(3, 0), InvalidArgument);
  EXPECT_THROW(low_lying_mixture(3, 4), InvalidArgument);
}

TEST(Projector, LowEnergySupport) {
  const auto p = Projector::low_energy(4, 2, 0, 1.0);
  EXPECT_EQ(p.support, (std::vector<int>{3, 2}));
  EXPECT_DOUBLE_EQ(p.local.trace().real(), 2.0);
  EXPECT_LT(max_abs(p.local * p.local - p.local), 1e-15);
}

TEST(TensorProduct, MaximallyMixed) {
  const auto a = thermal_state(2, 1.0, 0.0);
  const auto b = thermal_state(3, 1.0, 0.0);
  const auto ab = tensor_product(a, b);
  EXPECT_EQ(ab.dims(), (std::vector<int>{2, 3}));
  EXPECT_LT(max_abs(ab.matrix() - Matrix::Identity(6, 6) / 6.0), 1e-15);
}

TEST(TensorProduct, BasisProjectors) {
  Matrix e0 = Matrix::Zero(2, 2), e1 = Matrix::Zero(2, 2);
  e0(0, 0) = 1;
  e1(1, 1) = 1;
  const Matrix k = kron(e0, e1);
  Matrix expected = Matrix::Zero(4, 4);
  expected(1, 1) = 1;
  EXPECT_LT(max_abs(k - expected), 1e-15);
}

TEST(TensorProduct, TraceMultiplies) {
  std::mt19937 rng(7);
  for (int t = 0; t < 10; ++t) {
    const Matrix a = subcool::testing::random_matrix(rng, 3);
    const Matrix b = subcool::testing::random_matrix(rng, 2);
    EXPECT_LT(std::abs(kron(a, b).trace() - a.trace() * b.trace()), 1e-12);
  }
}

TEST(Embed, SzOnFirstSite) {
  const auto S = spin_operators(3);
  const int dims[] = {3, 3};
  const Matrix op = embed_operator(S.sz, 0, dims);
  // |m=1> (x) |m=0> is index 0*3 + 1.
  Vector v = Vector::Zero(9);
  v(1) = 1;
  EXPECT_LT((op * v - v).norm(), 1e-15);
}

TEST(Embed, IdentityAndDisjointCommute) {
  std::mt19937 rng(3);
  const int dims[] = {2, 3, 2};
  EXPECT_LT(max_abs(embed_operator(Matrix::Identity(3, 3), 1, dims) - Matrix::Identity(12, 12)),
            1e-15);
  const Matrix A = subcool::testing::random_matrix(rng, 2);
  const Matrix B = subcool::testing::random_matrix(rng, 3);
  const Matrix a = embed_operator(A, 0, dims), b = embed_operator(B, 1, dims);
  EXPECT_LT(max_abs(a * b - b * a), 1e-12);
  EXPECT_THROW(embed_operator(A, 3, dims), InvalidArgument);
  EXPECT_THROW(embed_operator(A, 1, dims), InvalidArgument);
}

TEST(Embed, BlockAndProductAgree) {
  std::mt19937 rng(5);
  const int dims[] = {2, 3, 2, 3};
  const Matrix A = subcool::testing::random_matrix(rng, 3);
  const Matrix B = subcool::testing::random_matrix(rng, 2);
  const std::pair<int, Matrix> factors[] = {{1, A}, {2, B}};
  EXPECT_LT(max_abs(embed_product(factors, dims) - embed_block(kron(A, B), 1, dims)), 1e-12);
}

TEST(PartialTrace, ProductRecovery) {
  std::mt19937 rng(11);
  const auto a = subcool::testing::random_density(rng, {3});
  const auto b = subcool::testing::random_density(rng, {2});
  const auto ab = tensor_product(a, b);
  const int keep_a[] = {0}, keep_b[] = {1};
  EXPECT_LT(max_abs(partial_trace(ab, keep_a).matrix() - a.matrix()), 1e-14);
  EXPECT_LT(max_abs(partial_trace(ab, keep_b).matrix() - b.matrix()), 1e-14);
}

TEST(PartialTrace, MaximallyEntangledQutrits) {
  Vector psi = Vector::Zero(9);
  for (int i = 0; i < 3; ++i) psi(4 * i) = 1.0 / std::sqrt(3.0);
  const DensityMatrix rho({3, 3}, psi * psi.adjoint());
  const int keep[] = {1};
  EXPECT_LT(max_abs(partial_trace(rho, keep).matrix() - Matrix::Identity(3, 3) / 3.0), 1e-15);
}

TEST(PartialTrace, UnitTraceOnRandomStates) {
  std::mt19937 rng(13);
  for (int t = 0; t < 10; ++t) {
    const auto rho = subcool::testing::random_density(rng, {2, 3, 2});
    const int keep[] = {2, 0};
    const auto r = partial_trace(rho, keep);
    EXPECT_NEAR(r.trace(), 1.0, 1e-12);
    EXPECT_EQ(r.dims(), (std::vector<int>{2, 2}));
  }
}

TEST(PartialTrace, RejectsBadKeepList) {
  const auto rho = thermal_state(2, 1.0, 0.0);
  const auto both = tensor_product(rho, rho);
  const int dup[] = {0, 0}, out_of_range[] = {2};
  EXPECT_THROW(partial_trace(both, dup), InvalidArgument);
  EXPECT_THROW(partial_trace(both, out_of_range), InvalidArgument);
}

TEST(Fidelity, SelfAndPureReduction) {
  std::mt19937 rng(17);
  const auto rho = subcool::testing::random_density(rng, {4});
  EXPECT_NEAR(uhlmann_fidelity(rho, rho), 1.0, 1e-12);
  const auto ground = low_lying_mixture(3, 1);
  EXPECT_NEAR(uhlmann_fidelity(ground, thermal_state(3, 1.0, 0.0)), 1.0 / 3.0, 1e-14);
}

TEST(Fidelity, SymmetricOnRandomPair) {
  std::mt19937 rng(19);
  const auto a = subcool::testing::random_density(rng, {3});
  const auto b = subcool::testing::random_density(rng, {3});
  EXPECT_NEAR(uhlmann_fidelity(a, b), uhlmann_fidelity(b, a), 1e-10);
}

TEST(Fidelity, OrthogonalStatesGiveZero) {
  EXPECT_NEAR(uhlmann_fidelity(thermal_state(3, 1.0, INFINITY), thermal_state(3, -1.0, INFINITY)),
              0.0, 1e-14);
}

TEST(Fidelity, DimensionMismatchThrows) {
  EXPECT_THROW(uhlmann_fidelity(thermal_state(2, 1.0, 0.0), thermal_state(3, 1.0, 0.0)),
               InvalidArgument);
}
