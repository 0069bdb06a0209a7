#include <benchmark/benchmark.h>

#include <vector>

#include "fatigue/density.hpp"
#include "fatigue/ensemble.hpp"
#include "fatigue/random.hpp"

using namespace fatigue;

namespace {

ForwardScenario scenario() {
  ForwardScenario sc;
  sc.load.sigma_max = 120.0;
  sc.base = midpoint_params();
  return sc;
}

std::vector<double> normal_sample(std::size_t n) {
  Rng rng = make_rng(1, 0, 0);
  std::vector<double> x(n);
  for (auto& v : x) v = normal01(rng);
  return x;
}

void BM_PropagateSerial(benchmark::State& state) {
  const SampleMatrix m = draw_matrix(table_distributions(), static_cast<std::size_t>(state.range(0)), 1, 1);
  const ForwardScenario sc = scenario();
  for (auto _ : state) benchmark::DoNotOptimize(serial::propagate(m, sc));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_PropagateParallel(benchmark::State& state) {
  const SampleMatrix m = draw_matrix(table_distributions(), static_cast<std::size_t>(state.range(0)), 1, 1);
  const ForwardScenario sc = scenario();
  for (auto _ : state) benchmark::DoNotOptimize(propagate(m, sc));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_KdeSerial(benchmark::State& state) {
  const auto x = normal_sample(static_cast<std::size_t>(state.range(0)));
  const auto grid = default_grid(x, silverman_bandwidth(x));
  for (auto _ : state) benchmark::DoNotOptimize(serial::kde(x, grid));
}

void BM_KdeParallel(benchmark::State& state) {
  const auto x = normal_sample(static_cast<std::size_t>(state.range(0)));
  const auto grid = default_grid(x, silverman_bandwidth(x));
  for (auto _ : state) benchmark::DoNotOptimize(kde(x, grid));
}

}  // namespace

BENCHMARK(BM_PropagateSerial)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_PropagateParallel)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_KdeSerial)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_KdeParallel)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
