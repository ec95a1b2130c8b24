#include <benchmark/benchmark.h>

#include "expanderlab/generators.hpp"

using namespace expanderlab;

static void BM_ShootCurve(benchmark::State& state) {
  ShootingConfig c;
  c.integrator_order = static_cast<int>(state.range(0));
  c.tol_residual = 1.0;
  for (auto _ : state) benchmark::DoNotOptimize(shoot_expander_curve(c));
}
BENCHMARK(BM_ShootCurve)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

static void BM_ShootRotationalCap(benchmark::State& state) {
  ShootingConfig c;
  for (auto _ : state) benchmark::DoNotOptimize(shoot_rotational_expander(c, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_ShootRotationalCap)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

static void BM_DefaultSweep(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(generate_sweep({}, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_DefaultSweep)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();
