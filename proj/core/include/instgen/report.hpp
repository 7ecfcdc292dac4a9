#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "instgen/campaign.hpp"
#include "instgen/scoring.hpp"

namespace instgen {

/// Instance ids of graded evaluations, sorted.
std::vector<std::string> graded_instances(const CampaignArchive& archive);

struct CombinedSet {
  std::uint64_t seed = 0;
  std::size_t k = 0;
  std::map<std::string, std::vector<std::string>> selected;  // source -> ids
  std::map<std::string, std::filesystem::path> sources;      // source -> campaign dir
  std::vector<std::string> warnings;

  bool operator==(const CombinedSet&) const = default;
};

/// Uniform sample without replacement of min(k, graded) instances per
/// source campaign (partial Fisher-Yates on the portable generator, over
/// the sorted ids). Sources without graded instances contribute nothing
/// and add a warning.
CombinedSet build_combined_set(const std::map<std::string, CampaignArchive>& archives, std::size_t k,
                               std::uint64_t seed);

std::string to_json(const CombinedSet& set);
CombinedSet combined_set_from_json(const std::string& text);

struct StatusRow {
  std::string status;
  std::size_t count = 0;
  double fraction = 0.0;
  bool operator==(const StatusRow&) const = default;
};

/// Counts over the tuner log; statuses that never occur are omitted.
std::vector<StatusRow> status_frequencies(const std::vector<LogEntry>& log);
std::vector<StatusRow> status_frequencies(const CampaignArchive& archive);
std::string status_table_to_csv(const std::vector<StatusRow>& rows);
std::vector<StatusRow> status_table_from_csv(const std::string& csv);

struct TimeSummary {
  std::size_t count = 0;
  double min = 0, q1 = 0, median = 0, q3 = 0, max = 0;
  bool operator==(const TimeSummary&) const = default;
};

/// Quartiles by linear interpolation between order statistics.
TimeSummary summarize_times(std::vector<double> times);

struct TimePoint {
  std::string solver;
  std::string instance;
  double time = 0.0;
  bool operator==(const TimePoint&) const = default;
};

/// Solving times of the graded instances of a graded campaign (the
/// effective time for local-search solvers).
std::vector<TimePoint> graded_times(const CampaignArchive& archive);
std::map<std::string, TimeSummary> time_distribution(const std::vector<TimePoint>& series);
std::string time_series_to_csv(const std::vector<TimePoint>& series);
std::vector<TimePoint> time_series_from_csv(const std::string& csv);
std::string time_summary_to_csv(const std::map<std::string, TimeSummary>& summary);
std::map<std::string, TimeSummary> time_summary_from_csv(const std::string& csv);

struct CombinedRecord {
  std::string solver;
  std::string instance;
  std::string source;
  SolverRecord record;
};

struct CombinedReport {
  std::vector<CombinedRecord> runs;
  BordaTable borda;
  std::map<std::string, std::size_t> flagged;     // incorrect answers per solver
  std::map<std::string, std::size_t> sat_records; // Sat records per solver
};

struct CombinedOptions {
  double time_limit = 1200.0;
  std::uint64_t mem_limit = 8ULL << 30;
  std::uint64_t seed = 0;
  std::size_t workers = 1;
  std::filesystem::path work_dir;  // per-run logs of external solvers
};

/// Runs every solver on every selected instance, checks solutions and
/// aggregates Borda scores. Instances are looked up in the source
/// campaigns; the problem comes from the first source.
CombinedReport evaluate_combined(const CombinedSet& set, const std::map<std::string, SolverAdapter>& solvers,
                                 const ProblemModel& problem, const CombinedOptions& options);

std::string combined_runs_to_csv(const CombinedReport& report);
std::vector<CombinedRecord> combined_runs_from_csv(const std::string& csv);
/// Borda totals, ranking, flagged counts.
std::string combined_summary_json(const CombinedReport& report);

struct DiscriminationRow {
  std::string instance;
  double score_favoured = 0.0;
  double score_base = 0.0;
  Penalty penalty = 0.0;
  bool operator==(const DiscriminationRow&) const = default;
};

struct DiscriminationReport {
  std::string favoured;
  std::string base;
  std::vector<DiscriminationRow> rows;  // penalty < 0 only, sorted by instance
  std::size_t count() const { return rows.size(); }
  std::vector<double> winning_scores() const;
};

DiscriminationReport discrimination_report(const CampaignArchive& archive);
std::string discrimination_to_csv(const DiscriminationReport& report);
std::vector<DiscriminationRow> discrimination_from_csv(const std::string& csv);

/// Re-checks every archived solution; returns (instance, role, verdict)
/// lines for records whose stored check disagrees or is incorrect.
struct RecheckResult {
  std::size_t checked = 0;
  std::size_t incorrect = 0;
  std::size_t disagreements = 0;
  std::vector<std::string> lines;
};

RecheckResult recheck_archive(const CampaignArchive& archive);

/// Writes every report of the campaign under `reports/`.
void write_reports(const CampaignArchive& archive);

}  // namespace instgen
