#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "instgen/runner.hpp"

namespace instgen {

/// Bounded knapsack data read from an instance: `weight`, `value`,
/// `capacity` and an optional `count` (default 1 per item).
struct Knapsack {
  std::vector<std::int64_t> weight;
  std::vector<std::int64_t> value;
  std::vector<std::int64_t> count;
  std::int64_t capacity = 0;

  static Knapsack from_values(const ValueMap& values);
  std::size_t size() const { return weight.size(); }
  bool feasible(const std::vector<std::int64_t>& take) const;
  std::int64_t objective(const std::vector<std::int64_t>& take) const;
};

/// `take = [...];\nobjective = N;\n`
std::string knapsack_payload(const std::vector<std::int64_t>& take, std::int64_t objective);

/// Context shared by the in-process solvers.
///
/// When the `node_cost` option is set, time is virtual: every search node
/// (or local-search move) costs that many seconds, which makes run times
/// deterministic. Otherwise wall-clock time since `start` is used.
struct BuiltinContext {
  const ValueMap& instance;
  const std::map<std::string, std::string>& options;
  RunOptions run;
  std::chrono::steady_clock::time_point start;
};

/// Branch and bound with a fractional upper bound; claims optimality when
/// the tree is exhausted.
SolverRecord solve_knapsack_bnb(const BuiltinContext& ctx);
/// Ratio-greedy fill; never claims optimality.
SolverRecord solve_knapsack_greedy(const BuiltinContext& ctx);
/// Stochastic hill climbing (add / drop / swap moves, sideways moves
/// accepted). Options: `iterations` (default 20000). Emits an improvement
/// trace, never claims optimality, never reports Unsat.
SolverRecord solve_knapsack_hill(const BuiltinContext& ctx);
/// Deliberately returns an infeasible packing.
SolverRecord solve_knapsack_buggy(const BuiltinContext& ctx);

/// Solver whose latency is a programmed function of one instance value:
/// latency = offset + scale * value(param)^power seconds.
///
/// Other options: `unsat_param` + `unsat_above` (answer Unsat when that
/// value exceeds the threshold), `objective_param` (report that value as
/// the objective and claim optimality), `memory` (bytes needed; over the
/// limit gives Error) and `sleep` = 1 to really sleep instead of reporting
/// virtual time.
SolverRecord solve_synthetic(const BuiltinContext& ctx);

SolverRecord run_builtin(const BuiltinSolver& solver, const ProblemModel& problem,
                         const CandidateInstance& instance, const RunOptions& options);

double option_or(const std::map<std::string, std::string>& options, const std::string& key, double fallback);

}  // namespace instgen
