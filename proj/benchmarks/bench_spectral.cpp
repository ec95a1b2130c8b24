#include <benchmark/benchmark.h>

#include "expanderlab/generators.hpp"
#include "expanderlab/spectral.hpp"

using namespace expanderlab;

static void BM_HyperplaneBottom(benchmark::State& state) {
  const auto op = ground_state_transform(make_hyperplane(1), PotentialKind::DriftOnly,
                                         {static_cast<std::size_t>(state.range(0)), 12.0});
  for (auto _ : state) benchmark::DoNotOptimize(bottom_spectrum(op, 5));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_HyperplaneBottom)->RangeMultiplier(2)->Range(1001, 16001)->Complexity();

static void BM_CylinderTransformAndBottom(benchmark::State& state) {
  ShootingConfig c;
  const auto s = make_curve_cylinder(shoot_expander_curve(c), 2);
  for (auto _ : state) {
    const auto op = ground_state_transform(s, PotentialKind::Stability);
    benchmark::DoNotOptimize(bottom_spectrum(op, 5));
  }
}
BENCHMARK(BM_CylinderTransformAndBottom)->Unit(benchmark::kMillisecond);
