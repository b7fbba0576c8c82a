// Serial loops against their OpenMP counterparts. Thread count follows
// OMP_NUM_THREADS.

#include <benchmark/benchmark.h>

#include <filesystem>
#include <numeric>
#include <vector>

#include "leias/sweep.hpp"

using namespace leias;

namespace {

std::vector<std::uint64_t> seeds(std::int64_t n) {
  std::vector<std::uint64_t> s(static_cast<std::size_t>(n));
  std::iota(s.begin(), s.end(), 1);
  return s;
}

const ScenarioConfig& nominal() {
  static const ScenarioConfig c =
      load_config(std::filesystem::path(LEIAS_SCENARIOS) / "nominal.json");
  return c;
}

template <bool Parallel>
void BM_Training(benchmark::State& state) {
  const auto s = seeds(state.range(0));
  const ScenarioConfig c;
  for (auto _ : state) {
    auto r = Parallel ? sweep::training(c, 500, s) : sweep::reference::training(c, 500, s);
    benchmark::DoNotOptimize(r);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <bool Parallel>
void BM_Verification(benchmark::State& state) {
  const auto s = seeds(state.range(0));
  for (auto _ : state) {
    auto r = Parallel ? sweep::verification(nominal(), s)
                      : sweep::reference::verification(nominal(), s);
    benchmark::DoNotOptimize(r);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <bool Parallel>
void BM_HardRules(benchmark::State& state) {
  const RangeThresholds t{};
  for (auto _ : state) {
    auto r = Parallel ? sweep::hard_rules(t, state.range(0), 1)
                      : sweep::reference::hard_rules(t, state.range(0), 1);
    benchmark::DoNotOptimize(r);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * 2);
}

}  // namespace

BENCHMARK(BM_Training<false>)->Name("training/serial")->Arg(20)->Arg(80)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Training<true>)->Name("training/omp")->Arg(20)->Arg(80)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Verification<false>)->Name("verification/serial")->Arg(20)->Arg(200)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Verification<true>)->Name("verification/omp")->Arg(20)->Arg(200)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_HardRules<false>)->Name("hard_rules/serial")->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_HardRules<true>)->Name("hard_rules/omp")->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
