#include <benchmark/benchmark.h>

#include "optoent/config.hpp"
#include "optoent/linalg.hpp"
#include "optoent/sweeps.hpp"
#include "optoent/units.hpp"

namespace {

using namespace optoent;

SystemParams operating_point() {
  ExperimentSetup s = build_setup(reference_config()).with_power(2.0 * units::kMicrowatt);
  s.params = s.params.with_detuning(0.7 * s.params.omega_m);
  return s.params;
}

void BM_FindRoots(benchmark::State& state) {
  const SystemParams p = operating_point();
  for (auto _ : state) benchmark::DoNotOptimize(find_roots(p));
}
BENCHMARK(BM_FindRoots);

void BM_Eigenvalues(benchmark::State& state) {
  const SystemParams p = operating_point();
  const ReducedModel rm = reduce(solve_steady_state(p), p);
  const MatrixX R = rm.R;
  for (auto _ : state) benchmark::DoNotOptimize(eigenvalues(R));
}
BENCHMARK(BM_Eigenvalues);

void BM_SolveLyapunov(benchmark::State& state) {
  const SystemParams p = operating_point();
  const ReducedModel rm = reduce(solve_steady_state(p), p);
  const MatrixX R = rm.R, D = rm.D;
  for (auto _ : state) benchmark::DoNotOptimize(solve_lyapunov(R, D));
}
BENCHMARK(BM_SolveLyapunov);

void BM_EvaluatePoint(benchmark::State& state) {
  const SystemParams p = operating_point();
  for (auto _ : state) benchmark::DoNotOptimize(evaluate(p));
}
BENCHMARK(BM_EvaluatePoint);

void BM_DetuningSweep(benchmark::State& state) {
  const ExperimentSetup setup = build_setup(reference_config());
  for (auto _ : state) {
    benchmark::DoNotOptimize(sweep_detuning(setup, {0.5, 1.5, 100}, {70.0}, {}, 1));
  }
}
BENCHMARK(BM_DetuningSweep)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
