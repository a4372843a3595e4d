#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>
#include <unsupported/Eigen/MatrixFunctions>

#include "support/random_states.hpp"
#include "subcool/oracles.hpp"
#include "subcool/protocol.hpp"

using namespace subcool;
using subcool::testing::max_abs;

namespace {

ProtocolConfig xxz(int d, double J, double delta, double tau, int steps, int rank = 1) {
  ProtocolConfig c;
  c.layout = {Topology::chain, 1, d};
  c.hamiltonian = XXZParams{J, delta, 1.0};
  c.tau = tau;
  c.steps = steps;
  c.rank = rank;
  return c;
}

// Tr[(P (x) I) U rho U^+] for one step, built with a plain matrix exponential.
double one_step_probability(int d, int k, double J, double delta, double tau) {
  const Matrix H = build_xxz({Topology::chain, 1, d}, J, delta, 1.0);
  const Matrix U = (Complex(0, -tau) * H).exp();
  Matrix reg = Matrix::Zero(d, d), proj = Matrix::Zero(d, d);
  for (int i = 0; i < k; ++i) {
    reg(d - 1 - i, d - 1 - i) = 1.0 / k;  // h > 0: lowest energy at the last index
    proj(d - 1 - i, d - 1 - i) = 1.0;
  }
  const Matrix rho = kron(reg, Matrix::Identity(d, d) / static_cast<double>(d));
  const Matrix P = kron(proj, Matrix::Identity(d, d));
  return (P * U * rho * U.adjoint()).trace().real();
}

}  // namespace

TEST(Measurement, FullRankKeepsState) {
  std::mt19937 rng(61);
  const auto rho = subcool::testing::random_density(rng, {3, 3});
  const auto out = apply_measurement(rho, Projector::low_energy(3, 3, 0));
  EXPECT_NEAR(out.probability, 1.0, 1e-12);
  EXPECT_LT(max_abs(out.state.matrix() - rho.matrix()), 1e-12);
}

TEST(Measurement, ProjectsOntoSupport) {
  std::mt19937 rng(67);
  const auto rho = subcool::testing::random_density(rng, {3, 2});
  const auto proj = Projector::low_energy(3, 1, 0);
  const auto out = apply_measurement(rho, proj);
  double expected = 0;
  for (int j = 0; j < 2; ++j) expected += rho.matrix()(2 * 2 + j, 2 * 2 + j).real();
  EXPECT_NEAR(out.probability, expected, 1e-14);
  EXPECT_NEAR(out.state.trace(), 1.0, 1e-12);
  for (int i = 0; i < 4; ++i) EXPECT_LT(std::abs(out.state.matrix()(i, i)), 1e-15);
}

TEST(Measurement, MaximallyMixedGivesRankOverDimension) {
  const auto rho = tensor_product(thermal_state(4, 1.0, 0.0), thermal_state(4, 1.0, 0.0));
  for (int k = 1; k <= 4; ++k) {
    EXPECT_NEAR(apply_measurement(rho, Projector::low_energy(4, k, 0)).probability, k / 4.0,
                1e-14);
  }
}

TEST(Measurement, EmptyBranchIsExtinct) {
  const auto excited = thermal_state(3, -1.0, INFINITY);  // ground of -Sz is m = +1
  const auto rho = tensor_product(excited, thermal_state(3, 1.0, 0.0));
  try {
    apply_measurement(rho, Projector::low_energy(3, 1, 0));
    FAIL() << "expected ExtinctionError";
  } catch (const ExtinctionError& e) {
    EXPECT_EQ(e.step(), 0);
    EXPECT_LT(e.probability(), kExtinctionThreshold);
  }
}

TEST(ZenoRun, NoEvolutionKeepsInitialFidelity) {
  const auto r = zeno_run(xxz(3, 1.0, 0.0, 0.0, 5));
  EXPECT_NEAR(r.initial_fidelities[0], 1.0 / 3.0, 1e-14);
  for (const auto& s : r.steps) {
    EXPECT_NEAR(s.fidelities[0], 1.0 / 3.0, 1e-12);
    EXPECT_NEAR(s.step_probability, 1.0, 1e-12);
  }
}

TEST(ZenoRun, SpinHalfFullTransferInOneStep) {
  const double jtau = std::numbers::pi / 4;
  const auto r = zeno_run(xxz(2, oracles::coupling_scale(2), 0.0, jtau, 1));
  EXPECT_NEAR(r.final_fidelities()[0], 1.0, 1e-12);
  EXPECT_NEAR(r.cumulative_probability(), 0.5, 1e-12);
}

TEST(ZenoRun, QutritMatchesClosedForm) {
  const auto r = zeno_run(xxz(3, 1.0, 0.0, 1.2, 30));
  ASSERT_EQ(r.steps.size(), 30u);
  for (int n = 1; n <= 30; ++n) {
    EXPECT_NEAR(r.steps[n - 1].fidelities[0], oracles::fidelity_xx_rank1(3, n, 1.2), 1e-10)
        << "N=" << n;
  }
}

TEST(ZenoRun, CumulativeProbabilityIsProduct) {
  const auto r = zeno_run(xxz(4, 1.0, 1.0, 0.9, 20, 2));
  double p = 1.0;
  for (const auto& s : r.steps) {
    p *= s.step_probability;
    EXPECT_NEAR(s.cumulative_probability, p, 1e-14);
    EXPECT_NEAR(s.log_cumulative_probability, std::log(p), 1e-10);
  }
}

TEST(ZenoRun, StarRingTargetsAgree) {
  ProtocolConfig c;
  c.layout = {Topology::star, 3, 3};
  c.hamiltonian = SpinStarParams{1.0, 1.0};
  c.tau = 0.8;
  c.steps = 15;
  c.rank = 2;
  const auto r = zeno_run(c);
  for (const auto& s : r.steps) {
    EXPECT_NEAR(s.fidelities[1], s.fidelities[0], 1e-12);
    EXPECT_NEAR(s.fidelities[2], s.fidelities[0], 1e-12);
  }
}

TEST(ZenoRun, RejectsInvalidConfig) {
  auto c = xxz(3, 1.0, 0.0, 1.0, 5);
  c.rank = 4;
  EXPECT_THROW(zeno_run(c), InvalidArgument);
  c = xxz(3, 1.0, 0.0, 1.0, -1);
  EXPECT_THROW(zeno_run(c), InvalidArgument);
  c = xxz(3, 1.0, 0.0, 1.0, 5);
  c.target_betas = {1.0, 2.0};
  EXPECT_THROW(zeno_run(c), InvalidArgument);
  c.layout.topology = Topology::star;
  EXPECT_THROW(zeno_run(c), InvalidArgument);
}

TEST(ZenoSpectrum, UncoupledModuliAreOne) {
  const auto s = zeno_spectrum(xxz(3, 0.0, 0.0, 1.0, 1));
  ASSERT_EQ(s.eigenvalues.size(), 9u);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(std::abs(s.eigenvalues[i]), 1.0, 1e-12);
  for (int i = 3; i < 9; ++i) EXPECT_LT(std::abs(s.eigenvalues[i]), 1e-12);
}

TEST(ZenoSpectrum, DominantStateIsCold) {
  const auto c = xxz(3, 1.0, 0.0, 1.2, 1);
  const auto s = zeno_spectrum(c);
  const auto reduced = dominant_reduced_state(s, c.layout, 1);
  EXPECT_GT(uhlmann_fidelity(reduced, low_lying_mixture(3, 1)), 0.99);
  for (std::size_t i = 1; i < s.eigenvalues.size(); ++i) {
    EXPECT_LE(std::abs(s.eigenvalues[i]), std::abs(s.eigenvalues[i - 1]) + 1e-12);
  }
}

TEST(DeltaP, UncoupledIsZero) {
  for (int k = 2; k <= 4; ++k) {
    EXPECT_NEAR(delta_p(xxz(4, 0.0, 1.0, 1.0, 10), k).delta, 0.0, 1e-13);
  }
}

TEST(DeltaP, SingleStepMatchesDirectTrace) {
  for (int k = 2; k <= 3; ++k) {
    const auto r = delta_p(xxz(3, 1.0, 1.0, 0.7, 1), k);
    EXPECT_NEAR(r.p_rank_k, one_step_probability(3, k, 1.0, 1.0, 0.7), 1e-12);
    EXPECT_NEAR(r.p_rank_k_minus_1, one_step_probability(3, k - 1, 1.0, 1.0, 0.7), 1e-12);
    EXPECT_NEAR(r.delta, r.p_rank_k - r.p_rank_k_minus_1, 1e-15);
  }
}

TEST(DeltaP, PinnedValue) {
  const auto r = delta_p(xxz(4, 1.0, 1.0, 1.2, 50), 2);
  EXPECT_NEAR(r.delta, 0.14426828898288219, 1e-12);
  EXPECT_NEAR(r.p_rank_k_minus_1, 0.25, 1e-12);
}

TEST(DeltaP, RejectsRankOne) {
  EXPECT_THROW(delta_p(xxz(3, 1.0, 0.0, 1.0, 5), 1), InvalidArgument);
  EXPECT_THROW(delta_p(xxz(3, 1.0, 0.0, 1.0, 5), 4), InvalidArgument);
}
