#include <benchmark/benchmark.h>

#include <vector>

#include "airylat/initial_states.hpp"
#include "airylat/propagators.hpp"
#include "airylat/special_functions.hpp"

namespace {

using namespace airylat;

void BM_AiryAi(benchmark::State& state) {
  double x = -20.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(airy_ai(x));
    x = x > 10.0 ? -20.0 : x + 0.013;
  }
}
BENCHMARK(BM_AiryAi);

void BM_BesselJ0(benchmark::State& state) {
  double u = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(bessel_j0(u));
    u = u > 30.0 ? 0.0 : u + 0.007;
  }
}
BENCHMARK(BM_BesselJ0);

// Sites on the support; the Airy state needs its main lobe on the grid.
void BM_FreeExact(benchmark::State& state) {
  const long n = state.range(0);
  const LatticeGrid g(0.2, -n + 200, 199);
  const WaveState s0 = build_airy_state(g, ApertureSpec::hard());
  for (auto _ : state) {
    benchmark::DoNotOptimize(evolve_free_exact(s0, 50.0));
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_FreeExact)->Arg(1024)->Arg(4096)->Arg(16384)->Unit(benchmark::kMicrosecond);

void BM_DrivenGaugedPeriod(benchmark::State& state) {
  const LatticeGrid g(1.0, -1024, 1023);
  const WaveState s0 = imprint_phase(build_gaussian_state(g, 0.0, 8.0), 1.45);
  const LinearPotential drive = DriveSchedule::constant(2.0 * 3.141592653589793, 1.691);
  const StepperConfig cfg = StepperConfig::defaults_for(drive, 1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(evolve_gauged_exact(s0, drive, 1.0, cfg));
  }
}
BENCHMARK(BM_DrivenGaugedPeriod)->Unit(benchmark::kMicrosecond);

void BM_CrankNicolsonStep(benchmark::State& state) {
  const long n = state.range(0);
  const LatticeGrid g(1.0, -n / 2, n / 2 - 1);
  WaveState s = imprint_phase(build_gaussian_state(g, 0.0, 8.0), 1.0);
  const std::vector<double> pot(g.size(), 0.0);
  for (auto _ : state) {
    s = step_crank_nicolson(s, pot, 0.01);
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_CrankNicolsonStep)->Arg(400)->Arg(4096)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
