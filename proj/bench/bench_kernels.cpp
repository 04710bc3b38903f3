// Serial reference vs OpenMP path for the three parallel kernels. The two
// paths produce identical numbers (see the unit tests); this only times them.
// Thread count follows OMP_NUM_THREADS.

#include <benchmark/benchmark.h>

#include "wedge/io.hpp"
#include "wedge/optimizer.hpp"
#include "wedge/parallel.hpp"
#include "wedge/potential.hpp"

using namespace wedge;

namespace {

Execution exec_of(const benchmark::State& state) {
  return state.range(0) ? Execution::parallel : Execution::serial;
}

void label(benchmark::State& state) {
  state.SetLabel(state.range(0) ? "openmp x" + std::to_string(worker_count()) : "serial");
}

void BM_PotentialGrid(benchmark::State& state) {
  const WedgeGeometry g(4.712389);
  potential::GridRequest req;
  req.radial_count = 32;
  req.angular_count = 256;
  for (auto _ : state) benchmark::DoNotOptimize(potential::potential_grid(g, req, exec_of(state)));
  label(state);
}

void BM_Multistart(benchmark::State& state) {
  opt::OptimizerConfig c;
  c.execution = exec_of(state);
  for (auto _ : state)
    benchmark::DoNotOptimize(opt::optimize_state(trial::StateKind::ground, 2.0, c));
  label(state);
}

void BM_DensityGrid(benchmark::State& state) {
  const auto s = trial::SeparableState::ground({1.0, 0.4, 0.7, 0.1}, 2.0);
  potential::GridRequest req;
  req.radial_count = 256;
  req.angular_count = 256;
  for (auto _ : state) benchmark::DoNotOptimize(io::density_grid(s, req, exec_of(state)));
  label(state);
}

}  // namespace

BENCHMARK(BM_PotentialGrid)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_Multistart)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_DensityGrid)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
