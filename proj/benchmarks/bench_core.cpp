#include <random>

#include <benchmark/benchmark.h>

#include "subcool/evolution.hpp"
#include "subcool/hamiltonians.hpp"
#include "subcool/protocol.hpp"

using namespace subcool;

namespace {

ProtocolConfig chain(int L, int d, int steps) {
  ProtocolConfig c;
  c.layout = {Topology::chain, L, d};
  c.hamiltonian = XXZParams{1.0, 1.0, 1.0};
  c.tau = 1.2;
  c.steps = steps;
  c.rank = d > 2 ? 2 : 1;
  return c;
}

Matrix random_state(int D) {
  std::mt19937 rng(7);
  std::normal_distribution<double> n;
  Matrix a(D, D);
  for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = Complex(n(rng), n(rng));
  Matrix rho = a * a.adjoint();
  return rho / rho.trace();
}

}  // namespace

static void BM_Propagator(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const Matrix H = build_xxz({Topology::chain, 1, d}, 1.0, 1.0, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(propagator(H, 1.2));
  state.SetLabel("D=" + std::to_string(d * d));
}
BENCHMARK(BM_Propagator)->Arg(3)->Arg(8)->Arg(16)->Arg(31)->Unit(benchmark::kMicrosecond);

static void BM_ZenoRunTwoSites(benchmark::State& state) {
  const auto c = chain(1, static_cast<int>(state.range(0)), 200);
  const StepMap map = build_step_map(c);
  for (auto _ : state) benchmark::DoNotOptimize(zeno_run(c, map));
}
BENCHMARK(BM_ZenoRunTwoSites)->Arg(3)->Arg(5)->Arg(10)->Unit(benchmark::kMicrosecond);

static void BM_ZenoRunChain(benchmark::State& state) {
  const auto c = chain(4, 3, 50);
  const StepMap map = build_step_map(c);
  for (auto _ : state) benchmark::DoNotOptimize(zeno_run(c, map));
}
BENCHMARK(BM_ZenoRunChain)->Unit(benchmark::kMillisecond);

static void BM_PartialTrace(benchmark::State& state) {
  const std::vector<int> dims(5, 3);
  const Matrix rho = random_state(243);
  const int keep[] = {2};
  for (auto _ : state) benchmark::DoNotOptimize(partial_trace(rho, dims, keep));
}
BENCHMARK(BM_PartialTrace)->Unit(benchmark::kMicrosecond);

static void BM_LindbladStep(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const SystemLayout layout{Topology::chain, 1, d};
  const Matrix H = build_xxz(layout, 1.0, 1.0, 1.0);
  BathSpec bath;
  bath.temperature = 1.0;
  bath.gamma = 1e-3;
  bath.target_site = 1;
  const LindbladPropagator map(H, bath, layout.dims(), 1.2);
  const Matrix rho = random_state(d * d);
  for (auto _ : state) benchmark::DoNotOptimize(map.apply(rho));
}
BENCHMARK(BM_LindbladStep)->Arg(3)->Arg(4)->Arg(6)->Unit(benchmark::kMicrosecond);
BENCHMARK_MAIN();
