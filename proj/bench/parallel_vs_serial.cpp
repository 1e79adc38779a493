// OpenMP kernels against their serial reference implementations.

#include <benchmark/benchmark.h>

#include "josephson/monodromy.hpp"
#include "josephson/rotation.hpp"

using namespace josephson;

namespace {

void BM_ScanGridParallel(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(scan_grid({0.0, 3.0, n}, {0.0, 3.0, n}, 1.0, 128));
  state.SetItemsProcessed(state.iterations() * n * n);
}

void BM_ScanGridSerial(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(scan_grid_serial({0.0, 3.0, n}, {0.0, 3.0, n}, 1.0, 128));
  state.SetItemsProcessed(state.iterations() * n * n);
}

std::vector<JosephsonParams> sweep_points(int n) {
  std::vector<JosephsonParams> pts;
  for (int i = 0; i < n; ++i) pts.push_back({0.1 * (i % 30), 0.25 * i, 1.0 + 0.01 * i});
  return pts;
}

void BM_MonodromySweepParallel(benchmark::State& state) {
  const auto pts = sweep_points(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(monodromy_sweep(pts));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(pts.size()));
}

void BM_MonodromySweepSerial(benchmark::State& state) {
  const auto pts = sweep_points(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(monodromy_sweep_serial(pts));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(pts.size()));
}

}  // namespace

BENCHMARK(BM_ScanGridParallel)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_ScanGridSerial)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_MonodromySweepParallel)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_MonodromySweepSerial)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
