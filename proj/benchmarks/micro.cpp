#include <benchmark/benchmark.h>

#include "bipi/packing.hpp"
#include "bipi/scenarios.hpp"

using namespace bipi;

namespace {

void BM_KernelGradient(benchmark::State& state) {
  const KernelSpec k(0.04);
  Vec2 d{0.013, 0.021};
  for (auto _ : state) {
    benchmark::DoNotOptimize(grad_w(d, k));
    d.x1 += 1e-12;
  }
}
BENCHMARK(BM_KernelGradient);

void BM_WallSample(benchmark::State& state) {
  const KernelSpec k(0.04);
  const BoundarySet b = refine_segments(trapezoid(), 0.02);
  const WallEvaluator ev(b, k);
  WallSample s;
  // near the bottom-left corner: several segments in reach
  const Vec2 x{0.12, 0.015};
  for (auto _ : state) {
    ev.evaluate(x, s);
    benchmark::DoNotOptimize(s.gamma);
  }
}
BENCHMARK(BM_WallSample);

// One packing iteration on the trapezoid at spacing 1 / range(0).
void packing_iteration(benchmark::State& state, Phase phase) {
  const double dx = 1.0 / static_cast<double>(state.range(0));
  const BoundarySet b = refine_segments(trapezoid(), dx);
  Packer p(b, PackingConfig::from_resolution(dx, 2.0), seed_grid(b, dx));
  p.begin_step_2a();
  if (phase == Phase::Step2c) {
    p.freeze();
    p.begin_step_2c();
  }
  for (auto _ : state) benchmark::DoNotOptimize(p.iterate(phase));
  state.counters["N"] = static_cast<double>(p.particles().size());
  state.counters["n_pack"] = static_cast<double>(p.packable_ids().size());
}

void BM_Step2a(benchmark::State& state) { packing_iteration(state, Phase::Step2a); }
void BM_Step2c(benchmark::State& state) { packing_iteration(state, Phase::Step2c); }
BENCHMARK(BM_Step2a)->Arg(25)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Step2c)->Arg(25)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
