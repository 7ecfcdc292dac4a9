#include <benchmark/benchmark.h>

#include "instgen/rng.hpp"
#include "instgen/scoring.hpp"

using namespace instgen;

namespace {

void BM_BordaComplete(benchmark::State& state) {
  const auto ns = static_cast<std::size_t>(state.range(0));
  const auto ni = static_cast<std::size_t>(state.range(1));
  Rng rng(3);
  std::vector<std::string> solvers, insts;
  for (std::size_t s = 0; s < ns; ++s) solvers.push_back("s" + std::to_string(s));
  std::map<RecordKey, ComparableRecord> recs;
  for (std::size_t i = 0; i < ni; ++i) {
    insts.push_back("i" + std::to_string(i));
    for (const auto& s : solvers) {
      ComparableRecord r;
      r.kind = ProblemKind::Minimise;
      r.solved = rng.uniform01() < 0.8;
      r.quality = r.solved ? std::optional<std::int64_t>(rng.uniform_int(1, 5)) : std::nullopt;
      r.time = rng.uniform01() * 100;
      recs[{s, insts.back()}] = r;
    }
  }
  for (auto _ : state) benchmark::DoNotOptimize(borda_complete(recs, solvers, insts));
}
BENCHMARK(BM_BordaComplete)->Args({3, 20})->Args({5, 100})->Args({10, 250});

}  // namespace
