#include "instgen/report.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <set>
#include <thread>

#include <json.hpp>

#include "instgen/csv.hpp"
#include "instgen/errors.hpp"
#include "instgen/rng.hpp"

namespace instgen {

namespace fs = std::filesystem;
using nlohmann::json;

std::vector<std::string> graded_instances(const CampaignArchive& archive) {
  std::vector<std::string> ids;
  for (const auto& [id, rec] : archive.records) {
    if (rec.status == RunStatus::Graded) ids.push_back(id);
  }
  return ids;  // map order is sorted
}

CombinedSet build_combined_set(const std::map<std::string, CampaignArchive>& archives, std::size_t k,
                               std::uint64_t seed) {
  CombinedSet set;
  set.seed = seed;
  set.k = k;
  Rng rng(seed);
  for (const auto& [source, archive] : archives) {
    set.sources[source] = archive.root;
    auto ids = graded_instances(archive);
    if (ids.empty()) set.warnings.push_back("campaign '" + source + "' has no graded instances");
    const std::size_t take = std::min(k, ids.size());
    for (std::size_t i = 0; i < take; ++i) {
      const auto j = static_cast<std::size_t>(
          rng.uniform_int(static_cast<std::int64_t>(i), static_cast<std::int64_t>(ids.size()) - 1));
      std::swap(ids[i], ids[j]);
    }
    ids.resize(take);
    set.selected[source] = std::move(ids);
  }
  return set;
}

std::string to_json(const CombinedSet& set) {
  json j;
  j["seed"] = set.seed;
  j["k"] = set.k;
  j["selected"] = set.selected;
  j["sources"] = json::object();
  for (const auto& [s, p] : set.sources) j["sources"][s] = p.string();
  j["warnings"] = set.warnings;
  return j.dump(2) + "\n";
}

CombinedSet combined_set_from_json(const std::string& text) {
  try {
    const auto j = json::parse(text);
    CombinedSet set;
    set.seed = j.at("seed").get<std::uint64_t>();
    set.k = j.at("k").get<std::size_t>();
    set.selected = j.at("selected").get<std::map<std::string, std::vector<std::string>>>();
    for (const auto& [s, p] : j.at("sources").items()) set.sources[s] = p.get<std::string>();
    set.warnings = j.at("warnings").get<std::vector<std::string>>();
    return set;
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad combined set: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Status frequencies

std::vector<StatusRow> status_frequencies(const std::vector<LogEntry>& log) {
  std::map<RunStatus, std::size_t> counts;
  for (const auto& e : log) ++counts[e.status];
  std::vector<StatusRow> rows;
  for (const auto& [status, n] : counts) {
    rows.push_back({to_string(status), n, static_cast<double>(n) / static_cast<double>(log.size())});
  }
  return rows;
}

std::vector<StatusRow> status_frequencies(const CampaignArchive& archive) {
  return status_frequencies(archive.log);
}

std::string status_table_to_csv(const std::vector<StatusRow>& rows) {
  CsvWriter w({"status", "count", "fraction"});
  for (const auto& r : rows) w.row({r.status, std::to_string(r.count), format_double(r.fraction)});
  return w.str();
}

std::vector<StatusRow> status_table_from_csv(const std::string& csv) {
  std::vector<StatusRow> rows;
  for (const auto& r : read_csv(csv, {"status", "count", "fraction"})) {
    rows.push_back({r[0], static_cast<std::size_t>(parse_double(r[1])), parse_double(r[2])});
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Time distributions

TimeSummary summarize_times(std::vector<double> t) {
  TimeSummary s;
  s.count = t.size();
  if (t.empty()) return s;
  std::sort(t.begin(), t.end());
  auto q = [&](double p) {
    const double h = p * static_cast<double>(t.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const auto hi = std::min(lo + 1, t.size() - 1);
    return t[lo] + (h - static_cast<double>(lo)) * (t[hi] - t[lo]);
  };
  s.min = t.front();
  s.q1 = q(0.25);
  s.median = q(0.5);
  s.q3 = q(0.75);
  s.max = t.back();
  return s;
}

std::vector<TimePoint> graded_times(const CampaignArchive& archive) {
  std::vector<TimePoint> out;
  const auto& solver = archive.config.solver;
  for (const auto& [id, rec] : archive.records) {
    if (rec.status != RunStatus::Graded) continue;
    double t = 0.0;
    if (rec.effective) {
      t = rec.effective->time;
    } else if (auto it = rec.records.find("solver"); it != rec.records.end()) {
      t = it->second.time;
    } else {
      continue;
    }
    out.push_back({solver, id, t});
  }
  return out;
}

std::map<std::string, TimeSummary> time_distribution(const std::vector<TimePoint>& series) {
  std::map<std::string, std::vector<double>> by;
  for (const auto& p : series) by[p.solver].push_back(p.time);
  std::map<std::string, TimeSummary> out;
  for (auto& [s, v] : by) out[s] = summarize_times(std::move(v));
  return out;
}

std::string time_series_to_csv(const std::vector<TimePoint>& series) {
  CsvWriter w({"solver", "instance", "time"});
  for (const auto& p : series) w.row({p.solver, p.instance, format_double(p.time)});
  return w.str();
}

std::vector<TimePoint> time_series_from_csv(const std::string& csv) {
  std::vector<TimePoint> out;
  for (const auto& r : read_csv(csv, {"solver", "instance", "time"})) out.push_back({r[0], r[1], parse_double(r[2])});
  return out;
}

namespace {
const std::vector<std::string> kSummaryHeader = {"solver", "count", "min", "q1", "median", "q3", "max"};
}

std::string time_summary_to_csv(const std::map<std::string, TimeSummary>& summary) {
  CsvWriter w(kSummaryHeader);
  for (const auto& [s, t] : summary) {
    w.row({s, std::to_string(t.count), format_double(t.min), format_double(t.q1), format_double(t.median),
           format_double(t.q3), format_double(t.max)});
  }
  return w.str();
}

std::map<std::string, TimeSummary> time_summary_from_csv(const std::string& csv) {
  std::map<std::string, TimeSummary> out;
  for (const auto& r : read_csv(csv, kSummaryHeader)) {
    out[r[0]] = {static_cast<std::size_t>(parse_double(r[1])), parse_double(r[2]), parse_double(r[3]),
                 parse_double(r[4]), parse_double(r[5]), parse_double(r[6])};
  }
  return out;
}

// ---------------------------------------------------------------------------
// Combined evaluation

CombinedReport evaluate_combined(const CombinedSet& set, const std::map<std::string, SolverAdapter>& solvers,
                                 const ProblemModel& problem, const CombinedOptions& options) {
  struct Job {
    std::string solver;
    std::string source;
    std::string id;
  };
  std::vector<Job> jobs;
  std::map<std::string, CandidateInstance> instances;  // key = source/id
  std::vector<std::string> keys;
  for (const auto& [source, ids] : set.selected) {
    const auto dir = set.sources.at(source) / "instances";
    for (const auto& id : ids) {
      const auto key = source + "/" + id;
      auto inst = read_instance(dir, id);
      inst.id = key;
      instances.emplace(key, std::move(inst));
      keys.push_back(key);
    }
  }
  for (const auto& [name, adapter] : solvers) {
    for (const auto& [source, ids] : set.selected) {
      for (const auto& id : ids) jobs.push_back({name, source, id});
    }
  }

  CombinedReport report;
  report.runs.resize(jobs.size());
  auto run_job = [&](std::size_t i) {
    const auto& job = jobs[i];
    const auto key = job.source + "/" + job.id;
    RunOptions ro;
    ro.time_limit = options.time_limit;
    ro.mem_limit = options.mem_limit;
    ro.seed = run_seed(options.seed, key);
    ro.work_dir = options.work_dir;
    ro.log_tag = "combined";
    report.runs[i] = {job.solver, key, job.source, run_solver(solvers.at(job.solver), problem, instances.at(key), ro)};
  };
  if (options.workers <= 1) {
    for (std::size_t i = 0; i < jobs.size(); ++i) run_job(i);
  } else {
    std::atomic<std::size_t> cursor{0};
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < std::min(options.workers, jobs.size()); ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = cursor++; i < jobs.size(); i = cursor++) run_job(i);
      });
    }
    for (auto& t : pool) t.join();
  }

  std::map<RecordKey, ComparableRecord> records;
  std::vector<std::string> names;
  for (const auto& [name, a] : solvers) {
    names.push_back(name);
    report.flagged[name] = 0;
    report.sat_records[name] = 0;
  }
  for (const auto& r : report.runs) {
    records[{r.solver, r.instance}] = to_comparable(r.record, problem.kind);
    if (r.record.status == SolverStatus::Sat) ++report.sat_records[r.solver];
    if (r.record.check == CheckState::Incorrect) ++report.flagged[r.solver];
  }
  std::map<std::string, std::string> problem_of;
  for (const auto& k : keys) problem_of[k] = problem.name;
  report.borda = borda_complete(records, names, keys, problem_of);
  return report;
}

namespace {
const std::vector<std::string> kRunsHeader = {"solver", "instance", "source", "status", "time",
                                              "objective", "check", "record"};
}

std::string combined_runs_to_csv(const CombinedReport& report) {
  CsvWriter w(kRunsHeader);
  for (const auto& r : report.runs) {
    const char* check = r.record.check == CheckState::Incorrect ? "incorrect"
                        : r.record.check == CheckState::Correct ? "correct"
                                                                : "unchecked";
    w.row({r.solver, r.instance, r.source, to_string(r.record.status), format_double(r.record.time),
           r.record.objective ? std::to_string(*r.record.objective) : "", check, to_json(r.record)});
  }
  return w.str();
}

std::vector<CombinedRecord> combined_runs_from_csv(const std::string& csv) {
  std::vector<CombinedRecord> out;
  for (const auto& r : read_csv(csv, kRunsHeader)) out.push_back({r[0], r[1], r[2], solver_record_from_json(r[7])});
  return out;
}

std::string combined_summary_json(const CombinedReport& report) {
  json j = json::parse(borda_summary_json(report.borda));
  j["flagged"] = report.flagged;
  j["sat_records"] = report.sat_records;
  return j.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Discrimination

std::vector<double> DiscriminationReport::winning_scores() const {
  std::vector<double> v;
  for (const auto& r : rows) v.push_back(r.score_favoured);
  return v;
}

DiscriminationReport discrimination_report(const CampaignArchive& archive) {
  DiscriminationReport rep;
  rep.favoured = archive.config.favoured;
  rep.base = archive.config.base;
  for (const auto& [id, rec] : archive.records) {
    if (!(rec.penalty < 0) || !rec.scores) continue;
    rep.rows.push_back({id, rec.scores->a, rec.scores->b, rec.penalty});
  }
  return rep;
}

namespace {
const std::vector<std::string> kDisHeader = {"instance", "score_favoured", "score_base", "penalty"};
}

std::string discrimination_to_csv(const DiscriminationReport& report) {
  CsvWriter w(kDisHeader);
  for (const auto& r : report.rows) {
    w.row({r.instance, format_double(r.score_favoured), format_double(r.score_base), format_double(r.penalty)});
  }
  return w.str();
}

std::vector<DiscriminationRow> discrimination_from_csv(const std::string& csv) {
  std::vector<DiscriminationRow> out;
  for (const auto& r : read_csv(csv, kDisHeader)) {
    out.push_back({r[0], parse_double(r[1]), parse_double(r[2]), parse_double(r[3])});
  }
  return out;
}

// ---------------------------------------------------------------------------

RecheckResult recheck_archive(const CampaignArchive& archive) {
  RecheckResult res;
  const auto& problem = archive.config.problem;
  for (const auto& [id, rec] : archive.records) {
    if (id.empty()) continue;
    const auto inst = archive.instance(id);
    for (const auto& [role, r] : rec.records) {
      if (!r.solution) continue;
      ++res.checked;
      bool ok = false;
      std::string why;
      try {
        const auto c = check_solution(problem, inst.values, *r.solution, r.objective);
        ok = c.feasible && !c.objective_mismatch;
        why = c.reason;
      } catch (const Error& e) {
        why = e.what();
      }
      const bool stored_ok = r.check != CheckState::Incorrect;
      if (!ok) ++res.incorrect;
      if (ok != stored_ok) ++res.disagreements;
      if (!ok || ok != stored_ok) {
        res.lines.push_back(id + " " + role + " " + (ok ? "correct" : "incorrect") +
                            (ok != stored_ok ? " (archive says otherwise)" : "") + (why.empty() ? "" : ": " + why));
      }
    }
  }
  return res;
}

void write_reports(const CampaignArchive& archive) {
  const CampaignPaths paths{archive.root};
  const auto statuses = status_frequencies(archive);
  write_file(paths.reports() / "status.csv", status_table_to_csv(statuses));
  json summary;
  summary["kind"] = to_string(archive.config.kind);
  summary["evaluations"] = archive.log.size();
  summary["instances"] = archive.instance_ids.size();
  summary["status"] = json::object();
  for (const auto& r : statuses) summary["status"][r.status] = r.count;
  if (archive.config.kind == CampaignKind::Graded) {
    const auto series = graded_times(archive);
    write_file(paths.reports() / "times.csv", time_series_to_csv(series));
    write_file(paths.reports() / "time_summary.csv", time_summary_to_csv(time_distribution(series)));
    summary["graded"] = series.size();
  } else {
    const auto dis = discrimination_report(archive);
    write_file(paths.reports() / "discrimination.csv", discrimination_to_csv(dis));
    const auto s = summarize_times(dis.winning_scores());
    summary["discriminating"] = dis.count();
    summary["winning_score"] = {{"min", s.min}, {"q1", s.q1}, {"median", s.median}, {"q3", s.q3}, {"max", s.max}};
  }
  write_file(paths.reports() / "summary.json", summary.dump(2) + "\n");
}

}  // namespace instgen
