#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "instgen/evaluate.hpp"
#include "instgen/friedman.hpp"
#include "instgen/space.hpp"

namespace instgen {

struct TunerConfig {
  std::size_t total_budget = 2000;
  std::size_t first_race_size = 0;  // 0 = max(6, ceil(total_budget / 40))
  std::size_t min_survivors = 2;
  double elimination_alpha = 0.05;
  std::size_t instances_per_step = 1;  // blocks added per step
  std::size_t first_test_after = 5;    // steps before the first test
  std::size_t race_budget = 0;         // 0 = total_budget / 5
  std::uint64_t seed = 0;
  std::size_t workers = 1;  // concurrent evaluations within a step

  void validate() const;
  std::size_t effective_first_race_size() const;
  std::size_t effective_race_budget() const;
};

/// One line of the progress log.
struct LogEntry {
  int iteration = 0;
  int step = 0;
  std::string config_id;
  Penalty penalty = 0.0;
  RunStatus status = RunStatus::Others;
  std::string instance_id;
  std::string assignment;  // GeneratorConfiguration::to_text()

  bool operator==(const LogEntry&) const = default;
};

/// CSV with header `iteration,step,config,penalty,status,instance,assignment`.
std::string log_header_line();
std::string format_log_line(const LogEntry& e);
std::vector<LogEntry> parse_log(const std::string& text);

struct EvalContext {
  int iteration = 0;
  int step = 0;
};

struct EvalOutcome {
  Penalty penalty = 0.0;
  RunStatus status = RunStatus::Others;
  std::string instance_id;
};

/// Must be safe to call concurrently for distinct configurations when
/// `workers` > 1.
using Evaluator = std::function<EvalOutcome(const GeneratorConfiguration&, const EvalContext&)>;

struct RaceState {
  std::vector<GeneratorConfiguration> alive;
  PenaltyMatrix matrix;  // rows = blocks, columns = alive
  std::size_t evaluations_used = 0;
};

struct TunerReport {
  std::vector<GeneratorConfiguration> elites;  // best first
  std::vector<LogEntry> log;
  std::map<RunStatus, std::size_t> status_counts;
  int iterations = 0;
  bool aborted = false;
};

struct TunerHooks {
  /// Called for every fresh (not replayed) evaluation, in log order.
  std::function<void(const LogEntry&)> on_entry;
  /// Previously logged evaluations to replay instead of re-evaluating.
  std::vector<LogEntry> replay;
  /// Checked between steps; when set, the partial report is returned.
  const std::atomic<bool>* abort = nullptr;
};

/// Runs one race. Configurations with an infinite penalty are dropped as
/// soon as it is observed; statistical elimination starts after
/// `first_test_after` steps and never leaves fewer than `min_survivors`.
/// The race ends once at most `min_survivors` remain (after at least one
/// step) or the next full step would exceed `race_budget`. Returns the
/// survivors, best first.
using StepRunner = std::function<std::vector<EvalOutcome>(const std::vector<GeneratorConfiguration>&, int step)>;

std::vector<GeneratorConfiguration> race(const std::vector<GeneratorConfiguration>& configs,
                                         const StepRunner& run_step, std::size_t race_budget,
                                         const TunerConfig& config, RaceState& state);

/// Iterated racing until the evaluation budget is spent. Deterministic
/// given the seed and a deterministic evaluator.
TunerReport run_tuning(const ParameterSpace& space, const Evaluator& evaluator, const TunerConfig& config,
                       const TunerHooks& hooks = {});

}  // namespace instgen
