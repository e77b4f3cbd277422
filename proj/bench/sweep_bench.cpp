#include <cstdint>

#include <benchmark/benchmark.h>

#include "reftor/checks.hpp"
#include "reftor/workbench.hpp"

using namespace reftor;

namespace {

void run(benchmark::State& state, double (*f)(std::uint64_t), bool parallel) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    const checks::Sweep s = checks::run_sweep(
        n, [&](int i) { return f(mix_seed(3, 0, static_cast<std::uint64_t>(i))); }, parallel);
    benchmark::DoNotOptimize(s.values.data());
  }
  state.SetItemsProcessed(state.iterations() * n);
}

void BM_GradedDetSerial(benchmark::State& s) { run(s, checks::torsion_vs_graded_det, false); }
void BM_GradedDetParallel(benchmark::State& s) { run(s, checks::torsion_vs_graded_det, true); }
void BM_SplitSerial(benchmark::State& s) {
  run(s, [](std::uint64_t x) { return checks::split_consistency(x, true); }, false);
}
void BM_SplitParallel(benchmark::State& s) {
  run(s, [](std::uint64_t x) { return checks::split_consistency(x, true); }, true);
}

}  // namespace

BENCHMARK(BM_GradedDetSerial)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_GradedDetParallel)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_SplitSerial)->Arg(64)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_SplitParallel)->Arg(64)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
