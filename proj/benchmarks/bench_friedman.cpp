#include <benchmark/benchmark.h>

#include "instgen/friedman.hpp"
#include "instgen/rng.hpp"

using namespace instgen;

namespace {

void BM_FriedmanTest(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto k = static_cast<std::size_t>(state.range(1));
  Rng rng(1);
  PenaltyMatrix m(n, std::vector<double>(k));
  for (auto& row : m) {
    for (std::size_t j = 0; j < k; ++j) row[j] = rng.uniform01() + 0.05 * static_cast<double>(j);
  }
  for (auto _ : state) benchmark::DoNotOptimize(friedman_test(m, 0.05));
}
BENCHMARK(BM_FriedmanTest)->Args({5, 10})->Args({20, 10})->Args({50, 50});

}  // namespace
