#pragma once

#include <filesystem>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <variant>

#include "instgen/gensolve.hpp"
#include "instgen/runner.hpp"

namespace instgen {

/// Tuner feedback for one evaluation; lower is better.
using Penalty = double;

inline constexpr Penalty kPlusInfinity = std::numeric_limits<double>::infinity();
/// Returned when the base solver scores 0 against a favoured solver that
/// scores above 0. Below every finite score ratio.
inline constexpr Penalty kLargeNegative = -1e6;

inline bool is_plus_infinity(Penalty p) { return p == kPlusInfinity; }

struct GradedPolicy {
  SolverAdapter solver;
  double t_min = 10.0;
  double t_max = 1200.0;
  TypeSet types;
  /// Complete solver establishing optima for a local-search `solver`.
  std::optional<SolverAdapter> oracle;
  double oracle_budget = 0.0;  // 0 = 3 * t_max

  void validate() const;
  GradedThresholds thresholds(ProblemKind kind = ProblemKind::Decision) const {
    return {t_min, t_max, types, kind};
  }
};

struct DiscriminatingPolicy {
  SolverAdapter favoured;
  SolverAdapter base;
  double t_min = 10.0;  // applies to the base solver
  double t_max = 1200.0;
  TypeSet types;

  void validate() const;
};

using Policy = std::variant<GradedPolicy, DiscriminatingPolicy>;

struct EvaluationLimits {
  double translate_limit = 300.0;
  double generator_limit = 600.0;
  std::uint64_t mem_limit = 8ULL << 30;
  std::uint64_t seed = 0;
  /// Campaign directory receiving `instances/` and `records/`; nothing is
  /// archived when empty.
  std::filesystem::path archive_dir;
};

/// Everything known about one evaluation, as archived.
struct EvaluationRecord {
  std::string config_id;
  std::string instance_id;  // empty when the generator gave no instance
  GeneratorOutcome generator = GeneratorOutcome::Unsat;
  double generator_time = 0.0;
  Penalty penalty = 0.0;
  RunStatus status = RunStatus::Others;
  /// Keyed by role: "solver" (graded) or "favoured" / "base".
  std::map<std::string, SolverRecord> records;
  /// Effective record of a local-search solver (time-to-best as time).
  std::optional<SolverRecord> effective;
  std::optional<OracleResult> oracle;
  std::optional<PairScore> scores;  // a = favoured, b = base
  std::string message;
};

std::string to_json(const EvaluationRecord& r);
EvaluationRecord evaluation_from_json(const std::string& text);
std::string to_json(const SolverRecord& r);
SolverRecord solver_record_from_json(const std::string& text);

/// Penalty of an (effective) record under the graded criteria: -1 when
/// graded, 0 otherwise.
Penalty graded_penalty(const SolverRecord& record, const GradedPolicy& policy,
                       ProblemKind kind = ProblemKind::Decision);

/// Record as seen by the graded criteria for a local-search solver: the
/// time becomes the time at which the trace first reaches the oracle
/// optimum. No proved optimum, infeasibility or never reaching it turn the
/// record into a Timeout.
SolverRecord effective_local_search_record(const SolverRecord& record, const OracleResult& oracle,
                                           ProblemKind kind, double t_max);

struct DiscriminatingVerdict {
  Penalty penalty = 0.0;
  RunStatus status = RunStatus::Others;
  std::optional<PairScore> scores;
};

DiscriminatingVerdict judge_discriminating(const SolverRecord& favoured, const SolverRecord& base,
                                           const DiscriminatingPolicy& policy, ProblemKind kind);

Penalty discriminating_penalty(const SolverRecord& favoured, const SolverRecord& base,
                               const DiscriminatingPolicy& policy, ProblemKind kind);

struct EvaluationResult {
  Penalty penalty = 0.0;
  RunStatus status = RunStatus::Others;
  std::optional<CandidateInstance> instance;
  EvaluationRecord record;
};

/// Generates one instance for `config` (excluding its history), runs the
/// policy's solvers on it and returns the penalty. Never throws for
/// generator or solver failures; they map to penalties and statuses.
EvaluationResult evaluate_configuration(const GeneratorModel& model, const GeneratorConfiguration& config,
                                        SolutionHistory& history, const Policy& policy,
                                        const ProblemModel& problem, const EvaluationLimits& limits);

/// Deterministic per-instance seed.
std::uint64_t run_seed(std::uint64_t campaign_seed, const std::string& instance_id);

}  // namespace instgen
