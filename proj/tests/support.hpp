#pragma once

// Shared fixtures and independent reference implementations for the unit
// and acceptance tests. Nothing here calls into the code it checks.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "instgen/evaluate.hpp"
#include "instgen/rng.hpp"
#include "instgen/runner.hpp"
#include "instgen/scoring.hpp"

namespace testsupport {

class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

instgen::ValueMap knapsack_values(const std::vector<std::int64_t>& weight, const std::vector<std::int64_t>& value,
                                  std::int64_t capacity, const std::vector<std::int64_t>& count = {});
instgen::CandidateInstance make_instance(const std::string& id, instgen::ValueMap values);

/// Random knapsack with `n` items, weights 1..30, values 1..60, counts 1..2.
instgen::ValueMap random_knapsack(instgen::Rng& rng, int n);

/// Exhaustive optimum over every take vector; nullopt when capacity < 0.
std::optional<std::int64_t> brute_force_optimum(const instgen::ValueMap& values);

instgen::SolverAdapter builtin(const std::string& name, const std::string& id,
                               std::map<std::string, std::string> options = {},
                               instgen::SolverKind kind = instgen::SolverKind::Complete);

/// Synthetic solver with latency offset + scale * value(param).
instgen::SolverAdapter synthetic(const std::string& name, const std::string& param, double scale,
                                 double offset = 0.0);

// Scoring reference, written from the algorithm description with no
// shared code.
struct RefRecord {
  bool solved;
  bool optimal;
  std::optional<std::int64_t> quality;
  double time;
};
std::pair<double, double> ref_minizinc_score(const RefRecord& a, const RefRecord& b, instgen::ProblemKind kind);
instgen::ComparableRecord to_comparable(const RefRecord& r, instgen::ProblemKind kind);

/// Random consistent record set: optimality claims only on the true best
/// quality.
std::vector<RefRecord> random_records(instgen::Rng& rng, std::size_t n, instgen::ProblemKind kind);

// Friedman reference: ranks by counting, statistic through the
// (A - C) route, critical difference through the 2n(1 - T/(n(k-1)))(A - C)
// route.
struct RefFriedman {
  double statistic;
  double critical_difference_sq_over_t2;  // CD^2 / t^2
  std::vector<double> rank_sums;
};
RefFriedman ref_friedman(const std::vector<std::vector<double>>& m);

// Hand-encoded truth table of the three penalty algorithms.
struct TruthCase {
  std::string label;
  instgen::GeneratorOutcome generator;
  // graded: one record; discriminating: favoured + base
  bool discriminating;
  instgen::ProblemKind kind;
  instgen::TypeSet types;
  instgen::SolverRecord a;
  instgen::SolverRecord b;
  instgen::Penalty expected;
  instgen::RunStatus expected_status;
};
std::vector<TruthCase> truth_table();
inline constexpr double kTruthTMin = 10.0;
inline constexpr double kTruthTMax = 100.0;

instgen::SolverRecord rec(instgen::SolverStatus s, double time, std::optional<std::int64_t> objective = std::nullopt,
                          bool optimal = false);

}  // namespace testsupport
