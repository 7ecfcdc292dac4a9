#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "instgen/gensolve.hpp"
#include "instgen/instance.hpp"
#include "instgen/scoring.hpp"

namespace instgen {

/// The problem the generated instances belong to.
///
/// `checker` selects the built-in solution verifier: "knapsack" checks
/// `take` payloads against weight/value/capacity(/count) data; "none"
/// accepts every payload and trusts the reported objective.
struct ProblemModel {
  std::string name = "problem";
  ProblemKind kind = ProblemKind::Decision;
  std::string checker = "none";
  std::filesystem::path model_path;  // passed to external adapters as {model}
};

enum class SolverKind { Complete, LocalSearch };

const char* to_string(SolverKind k);

/// In-process toy solver. Ids: "knapsack-bnb", "knapsack-greedy",
/// "knapsack-hill", "knapsack-buggy", "synthetic" (see builtin.hpp).
struct BuiltinSolver {
  std::string id;
  std::map<std::string, std::string> options;
};

/// Shell command with `{model}`, `{instance}`, `{time_limit_ms}` and
/// `{seed}` placeholders, optionally run under a limiter prefix
/// (e.g. `runsolver -M 8192 --`).
///
/// The instance file holds the decision variables only, unless
/// `include_parameters` is set.
struct ExternalCommand {
  std::string command;
  std::string limiter_prefix;
  bool include_parameters = false;
};

struct SolverAdapter {
  std::string name;
  SolverKind kind = SolverKind::Complete;
  std::variant<BuiltinSolver, ExternalCommand> mode;
};

/// Throws ValidationError when a template lacks `{model}`, `{instance}` or
/// `{time_limit_ms}`, or a builtin id is unknown.
void validate_adapter(const SolverAdapter& adapter);

enum class SolverStatus { Sat, Unsat, Timeout, Error };

const char* to_string(SolverStatus s);
SolverStatus solver_status_from_string(const std::string& s);

enum class CheckState { Unchecked, Correct, Incorrect };

struct TracePoint {
  double time = 0.0;
  std::int64_t objective = 0;
};

/// Outcome of one solver on one instance.
///
/// A Timeout record may still carry the best solution found so far.
struct SolverRecord {
  SolverStatus status = SolverStatus::Error;
  double time = 0.0;  // wall-clock seconds from spawn, translation included
  std::optional<std::int64_t> objective;
  bool optimal_claimed = false;
  std::optional<std::string> solution;
  std::optional<double> time_to_best;
  std::vector<TracePoint> trace;
  CheckState check = CheckState::Unchecked;
  std::string message;
};

struct RunOptions {
  double time_limit = 1200.0;  // seconds
  std::uint64_t mem_limit = 8ULL << 30;  // bytes, 0 = unlimited
  std::uint64_t seed = 0;
  /// Scratch directory for instance files and per-run logs of external
  /// adapters; a temporary directory is used when empty.
  std::filesystem::path work_dir;
  /// Distinguishes log files of several runs on the same instance.
  std::string log_tag;
};

inline constexpr double kKillGrace = 2.0;

/// Runs the adapter on the instance and checks any returned solution.
/// Never throws for solver failures: they become Error records.
SolverRecord run_solver(const SolverAdapter& adapter, const ProblemModel& problem,
                        const CandidateInstance& instance, const RunOptions& options);

struct SolutionCheck {
  bool feasible = false;
  std::optional<std::int64_t> objective;  // recomputed
  bool objective_mismatch = false;
  std::string reason;
};

/// Verifies a solution payload (`name = value;` lines) against the problem
/// constraints and recomputes the objective. Throws CheckError on payloads
/// that cannot be interpreted.
SolutionCheck check_solution(const ProblemModel& problem, const ValueMap& instance,
                             const std::string& payload,
                             std::optional<std::int64_t> reported_objective = std::nullopt);

struct OracleResult {
  std::optional<std::int64_t> optimum;
  bool proved = false;
  bool infeasible = false;  // proved unsatisfiable
  double time = 0.0;
};

/// Runs a complete solver with an extended budget to establish the optimum.
OracleResult oracle_optimum(const ProblemModel& problem, const CandidateInstance& instance,
                            const SolverAdapter& oracle, double budget, RunOptions options);

/// Earliest trace time whose objective equals the optimum.
std::optional<double> measure_time_to_best(std::span<const TracePoint> trace, std::int64_t optimum);

/// Parses MiniZinc-convention solver output: solutions end with
/// `----------`, search completion is `==========`, infeasibility is
/// `=====UNSATISFIABLE=====`; `objective = <int>` inside a block.
/// `line_times` holds the arrival time of each output line (may be empty).
SolverRecord parse_solver_output(const std::string& output, const std::vector<double>& line_times,
                                 ProblemKind kind, bool timed_out, int exit_code, double elapsed);

// ---------------------------------------------------------------------------
// Run classification

enum class InstanceType { Sat, Unsat };

struct TypeSet {
  bool sat = true;
  bool unsat = true;
  bool contains(InstanceType t) const { return t == InstanceType::Sat ? sat : unsat; }
  bool operator==(const TypeSet&) const = default;
};

/// Parses "sat", "unsat" or "sat,unsat".
TypeSet parse_types(const std::string& s);
std::string to_string(const TypeSet& t);

/// Type implied by a record: Sat for any feasible answer, Unsat for a
/// proof of infeasibility, none otherwise.
std::optional<InstanceType> instance_type(const SolverRecord& r);

enum class RunStatus {
  GeneratorUnsolved,
  Graded,
  TooDifficult,
  TooEasySat,
  TooEasyUnsat,
  Others,
  DisFound,
  WrongType,
  BaseTooEasy,
  FavouredTimeout,
  ZeroScores,
  FavouredLost,
};

const char* to_string(RunStatus s);
RunStatus run_status_from_string(const std::string& s);
const std::vector<RunStatus>& graded_statuses();
const std::vector<RunStatus>& discriminating_statuses();

struct GradedThresholds {
  double t_min = 10.0;
  double t_max = 1200.0;
  TypeSet types;
  /// For optimisation problems only an optimality claim counts as solved.
  ProblemKind kind = ProblemKind::Decision;
};

struct DiscriminatingThresholds {
  double t_min = 10.0;  // base solver only
  double t_max = 1200.0;
  TypeSet types;
  ProblemKind kind = ProblemKind::Decision;
};

/// Status of a graded evaluation. `record` is the effective
/// record (time-to-best substituted for local search) and is ignored when
/// the generator produced no instance.
RunStatus classify_run(GeneratorOutcome generator, const SolverRecord* record,
                       const GradedThresholds& thresholds);

RunStatus classify_run(GeneratorOutcome generator, const SolverRecord* favoured,
                       const SolverRecord* base, const DiscriminatingThresholds& thresholds);

/// Scoring view of a record: solved means a correct solution (possibly
/// from a timed-out optimisation run) or a proof of infeasibility.
ComparableRecord to_comparable(const SolverRecord& r, ProblemKind kind);

}  // namespace instgen
