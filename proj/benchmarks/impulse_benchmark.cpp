// Copyright 2026 The impulse authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include <cmath>

#include "impulse/operator.hpp"
#include "impulse/simulate.hpp"
#include "impulse/stability.hpp"
#include "impulse/stationary.hpp"

namespace impulse {
namespace {

void BM_PushPlanBuild(benchmark::State& state) {
  const auto sys = example_system();
  const GridSpec grid(sys.domain(), static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    PushPlan plan(sys.f(), grid);
    benchmark::DoNotOptimize(plan.nonzeros());
  }
}
BENCHMARK(BM_PushPlanBuild)->RangeMultiplier(4)->Range(256, 16384);

void BM_ApplyT(benchmark::State& state) {
  const auto base = example_system();
  const ImpulseSystem sys(base.f(), base.g(), ImpulseTimeDistribution::geometric(0.5));
  const GridSpec grid(sys.domain(), static_cast<std::size_t>(state.range(0)));
  const std::size_t K = static_cast<std::size_t>(state.range(1));
  const TransferOperator T(sys, grid, K);
  auto mu = stationary_times_uniform(sys.times(), grid, K);
  for (auto _ : state) {
    mu = T.apply(mu);
    benchmark::DoNotOptimize(mu.tail_mass());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(grid.bins() * K));
}
BENCHMARK(BM_ApplyT)->Args({1024, 2})->Args({1024, 64})->Args({4096, 64});

void BM_Ensemble(benchmark::State& state) {
  const auto sys = example_system();
  const EnsembleOptions opts{200, static_cast<std::size_t>(state.range(0)), 1, 1};
  for (auto _ : state) {
    auto e = simulate_ensemble(sys, UniformStart{}, opts);
    benchmark::DoNotOptimize(e.size());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * 200);
}
BENCHMARK(BM_Ensemble)->Arg(1000)->Arg(80000)->Unit(benchmark::kMillisecond);

void BM_FindSplitting(benchmark::State& state) {
  const IntervalDomain d(0.0, 2.0);
  const double r = std::sqrt(2.0);
  const ImpulseSystem sys(IntervalMap::affine(d, 1.0 - r / 2.0, r), IntervalMap::power(d, 0.5),
                          ImpulseTimeDistribution::geometric(0.5));
  for (auto _ : state) {
    auto c = find_splitting(sys, static_cast<std::size_t>(state.range(0)));
    benchmark::DoNotOptimize(c);
  }
}
BENCHMARK(BM_FindSplitting)->Arg(8)->Arg(32);

void BM_SynchronizationTest(benchmark::State& state) {
  const auto sys = example_system();
  for (auto _ : state) {
    auto r = synchronization_test(sys, 1000, 200, 1e-6, 3);
    benchmark::DoNotOptimize(r.fraction);
  }
}
BENCHMARK(BM_SynchronizationTest)->Unit(benchmark::kMillisecond);

void BM_CollapsedStationary(benchmark::State& state) {
  const auto sys = example_system();
  const CollapsedIFS cifs(sys);
  for (auto _ : state) {
    auto nu = collapsed_stationary(cifs, static_cast<std::size_t>(state.range(0)), 1000, 1e-14);
    benchmark::DoNotOptimize(nu.residual);
  }
}
BENCHMARK(BM_CollapsedStationary)->Arg(1024)->Arg(8192);

}  // namespace
}  // namespace impulse

BENCHMARK_MAIN();
