#include <benchmark/benchmark.h>

#include "cases.hpp"

using namespace sspf;
using namespace sspf::testing;

static void BM_ResidualChi(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const RadialCase c = radial_cases(false)[2];
  const ScalarField f = sample_radial(c.gas, c.ic, radial_grid(n, false));
  for (auto _ : state) benchmark::DoNotOptimize(residual_chi(f, c.gas));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(f.grid().size()));
}
BENCHMARK(BM_ResidualChi)->Arg(65)->Arg(129)->Arg(257);

static void BM_SolveRadial(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const RadialCase c = radial_cases(false)[2];
  const GridSpec g = radial_grid(n, false);
  const ScalarField exact = sample_radial(c.gas, c.ic, g);
  for (auto _ : state) benchmark::DoNotOptimize(solve_dirichlet(g, exact, c.gas));
}
BENCHMARK(BM_SolveRadial)->Arg(33)->Arg(65)->Arg(129)->Unit(benchmark::kMillisecond);

static void BM_RadialProfile(benchmark::State& state) {
  const RadialCase c = radial_cases(false)[2];
  for (auto _ : state) benchmark::DoNotOptimize(solve_radial(c.gas, 2, c.ic, 1.5, 1001));
}
BENCHMARK(BM_RadialProfile)->Unit(benchmark::kMicrosecond);

static void BM_VerifyMaxPrinciple(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const ScalarField f = quiescent_field(GridSpec::from_extent({n, n}, {-0.7, -0.7}, {0.7, 0.7}));
  const GasModel gas = quiescent_gas();
  const BarrierSpec b = make_barrier(f.grid(), 1.0, 0.05);
  for (auto _ : state) benchmark::DoNotOptimize(verify_max_principle(f, gas, b, 0.05));
}
BENCHMARK(BM_VerifyMaxPrinciple)->Arg(65)->Arg(257)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
