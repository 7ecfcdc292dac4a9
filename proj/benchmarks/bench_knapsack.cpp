#include <benchmark/benchmark.h>

#include <chrono>

#include "instgen/builtin.hpp"
#include "instgen/rng.hpp"

using namespace instgen;

namespace {

ValueMap random_knapsack(std::int64_t n, std::uint64_t seed) {
  Rng rng(seed);
  IntArray w, v;
  std::int64_t total = 0;
  for (std::int64_t i = 0; i < n; ++i) {
    w.push_back(rng.uniform_int(1, 60));
    v.push_back(w.back() + rng.uniform_int(0, 40));
    total += w.back();
  }
  return {{"weight", w}, {"value", v}, {"capacity", total / 2}};
}

template <SolverRecord (*Solve)(const BuiltinContext&)>
void BM_Knapsack(benchmark::State& state) {
  const auto values = random_knapsack(state.range(0), 11);
  const std::map<std::string, std::string> options{{"node_cost", "0.001"}, {"iterations", "5000"}};
  RunOptions run;
  run.time_limit = 1e9;
  for (auto _ : state) {
    BuiltinContext ctx{values, options, run, std::chrono::steady_clock::now()};
    benchmark::DoNotOptimize(Solve(ctx));
  }
}
BENCHMARK_TEMPLATE(BM_Knapsack, solve_knapsack_bnb)->Arg(10)->Arg(20)->Arg(30);
BENCHMARK_TEMPLATE(BM_Knapsack, solve_knapsack_greedy)->Arg(30);
BENCHMARK_TEMPLATE(BM_Knapsack, solve_knapsack_hill)->Arg(30);

}  // namespace
