#include <benchmark/benchmark.h>

#include "mapof/dynamics.hpp"
#include "mapof/geometry.hpp"
#include "mapof/scenario.hpp"
#include "mapof/tuning.hpp"

namespace {

void BM_BuildPartition(benchmark::State& state) {
  const mapof::Vec2 target{18.0, -1.0};
  const mapof::Vec2 obstacle{6.0, 0.0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(mapof::build_partition(target, obstacle, 3.0, 8.0, 4.5));
  }
}
BENCHMARK(BM_BuildPartition);

void BM_ClassifyRegion(benchmark::State& state) {
  const auto pm = mapof::build_partition({18.0, -1.0}, {6.0, 0.0}, 3.0, 8.0, 4.5);
  mapof::Vec2 xi{1.0, 1.5};
  for (auto _ : state) {
    benchmark::DoNotOptimize(mapof::classify_region(xi, pm));
    xi.y = -xi.y;
  }
}
BENCHMARK(BM_ClassifyRegion);

void BM_Rk4Step(benchmark::State& state) {
  mapof::SimState s{0.0, {-5.0, 2.0}, {0.0, 0.0}};
  for (auto _ : state) {
    s = mapof::rk4_step(s, {0.1, -0.2}, 1e-3);
    benchmark::DoNotOptimize(s);
  }
}
BENCHMARK(BM_Rk4Step);

void BM_Tune(benchmark::State& state) {
  const mapof::Gains g{3.77, 1.90, 20.0, 4.37};
  for (auto _ : state) benchmark::DoNotOptimize(mapof::tune(g));
}
BENCHMARK(BM_Tune);

void BM_SimulateScenario(benchmark::State& state) {
  const auto cfg = *mapof::find_builtin(state.range(0) == 1 ? "scenario1" : "scenario2");
  const auto report = mapof::tune(cfg.gains, mapof::tuning_options(cfg));
  const auto setup = mapof::make_setup(cfg, 0, mapof::resolve_dwell(cfg, report));
  for (auto _ : state) benchmark::DoNotOptimize(mapof::simulate(setup));
}
BENCHMARK(BM_SimulateScenario)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
