#include <benchmark/benchmark.h>

#include "instgen/gensolve.hpp"
#include "instgen/model.hpp"

using namespace instgen;

namespace {

const char* kModel = R"(
param n: 4..20
param wlo: 1..40
param spread: 0..60
param tight: 10..90
find weight: array[n] of int(1..100)
find value: array[n] of int(1..500)
find capacity: int(1..2000)
such that forall(i in 1..n)(weight[i] >= wlo + spread * i / n)
such that forall(i in 1..n)(value[i] >= 2 * weight[i])
such that 100 * capacity >= tight * sum(weight)
such that 100 * capacity <= tight * sum(weight) + 300
)";

void BM_ParseModel(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(parse_generator_model(kModel));
}
BENCHMARK(BM_ParseModel);

void BM_SolveGenerator(benchmark::State& state) {
  const auto model = parse_generator_model(kModel);
  const GeneratorConfiguration cfg{"c1", {{"n", state.range(0)}, {"wlo", 10}, {"spread", 20}, {"tight", 50}}};
  SolutionHistory history;
  for (auto _ : state) {
    auto r = solve_generator(model, cfg, history, 10, 10);
    benchmark::DoNotOptimize(r);
  }
}
BENCHMARK(BM_SolveGenerator)->Arg(4)->Arg(10)->Arg(20);

// Each iteration excludes one more earlier solution.
void BM_SolveWithGrowingHistory(benchmark::State& state) {
  const auto model = parse_generator_model(kModel);
  const GeneratorConfiguration cfg{"c1", {{"n", 8}, {"wlo", 10}, {"spread", 20}, {"tight", 50}}};
  SolutionHistory history;
  for (auto _ : state) {
    auto r = solve_generator(model, cfg, history, 10, 10);
    if (r.instance) record_solution(history, cfg.id, *r.instance);
  }
  state.counters["history"] = static_cast<double>(history.total());
}
BENCHMARK(BM_SolveWithGrowingHistory)->Iterations(200);

}  // namespace
