#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace instgen {

enum class ProblemKind { Decision, Minimise, Maximise };

const char* to_string(ProblemKind k);
ProblemKind problem_kind_from_string(const std::string& s);

/// What the pairwise comparison needs to know about one solver run.
///
/// Records compared together are assumed consistent: an optimality claim is
/// only made for a truly optimal quality, so no other record has a strictly
/// better quality.
struct ComparableRecord {
  bool solved = false;   // correct solution or correct unsatisfiability
  bool optimal = false;  // optimality claimed
  std::optional<std::int64_t> quality;
  double time = 0.0;
  ProblemKind kind = ProblemKind::Decision;
};

struct PairScore {
  double a = 0.0;
  double b = 0.0;
  bool operator==(const PairScore&) const = default;
};

/// True when `a` is clearly better than `b` in terms of solution quality.
bool is_better(const ComparableRecord& a, const ComparableRecord& b);

/// MiniZinc complete score of a against b. Both unsolved scores (0, 0);
/// both solved with equal quality split by normalised time, (0.5, 0.5)
/// when both times are zero.
PairScore minizinc_score(const ComparableRecord& a, const ComparableRecord& b);

/// One accumulated ordered-pair score, exported as a CSV row.
struct PairEntry {
  std::string solver;
  std::string instance;
  std::string opponent;
  double score = 0.0;
  bool operator==(const PairEntry&) const = default;
};

struct BordaTable {
  std::vector<std::string> solvers;
  std::map<std::string, double> totals;
  std::map<std::string, std::map<std::string, double>> cells;        // solver -> instance -> score
  std::map<std::string, std::map<std::string, double>> per_problem;  // solver -> problem -> score
  std::vector<PairEntry> entries;

  /// Solvers by decreasing total, ties by name.
  std::vector<std::string> ranking() const;
};

using RecordKey = std::pair<std::string, std::string>;  // (solver, instance)

/// Borda (complete) aggregation over every ordered solver pair and every
/// instance. `problem_of` maps instances to a problem name for the
/// per-problem totals; unmapped instances count under "". Throws
/// MissingRecord.
BordaTable borda_complete(const std::map<RecordKey, ComparableRecord>& records,
                          const std::vector<std::string>& solvers,
                          const std::vector<std::string>& instances,
                          const std::map<std::string, std::string>& problem_of = {});

/// `solver,instance,opponent,score` with a header line.
std::string borda_to_csv(const BordaTable& table);
std::vector<PairEntry> borda_entries_from_csv(const std::string& csv);
/// Totals, per-problem totals and ranking.
std::string borda_summary_json(const BordaTable& table);
BordaTable borda_from_json(const std::string& json);

}  // namespace instgen
