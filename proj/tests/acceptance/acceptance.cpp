// Acceptance checks. Each criterion prints one PASS/FAIL line; the exit
// status is the number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <boost/math/distributions/students_t.hpp>

#include "instgen/builtin.hpp"
#include "instgen/campaign.hpp"
#include "instgen/evaluate.hpp"
#include "instgen/friedman.hpp"
#include "instgen/report.hpp"
#include "instgen/rng.hpp"
#include "instgen/scoring.hpp"
#include "support.hpp"

using namespace instgen;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// ---------------------------------------------------------------------------

Outcome truth_tables() {
  const auto t0 = Clock::now();
  const auto cases = testsupport::truth_table();
  const auto solvable = parse_generator_model("param p: 1..10\nfind x: int(0..20)\nsuch that x >= p");
  const auto unsat = parse_generator_model("param p: 1..10\nfind x: int(1..5)\nsuch that x > p + 5");
  const GeneratorConfiguration cfg{"c1", {{"p", 3}}};
  ProblemModel decision;

  std::size_t mismatches = 0;
  std::string first;
  for (const auto& tc : cases) {
    Penalty got = 0;
    RunStatus status = RunStatus::Others;
    if (tc.discriminating) {
      DiscriminatingPolicy d;
      d.favoured = testsupport::synthetic("f", "x", 1);
      d.base = testsupport::synthetic("b", "x", 2);
      d.t_min = testsupport::kTruthTMin;
      d.t_max = testsupport::kTruthTMax;
      d.types = tc.types;
      if (tc.generator == GeneratorOutcome::Solution) {
        const auto v = judge_discriminating(tc.a, tc.b, d, tc.kind);
        got = v.penalty;
        status = v.status;
      } else {
        EvaluationLimits lim;
        lim.translate_limit = tc.generator == GeneratorOutcome::TranslateTimeout ? 0 : 10;
        lim.generator_limit = tc.generator == GeneratorOutcome::SolveTimeout ? 0 : 10;
        SolutionHistory h;
        const auto& m = tc.generator == GeneratorOutcome::Unsat ? unsat : solvable;
        const auto r = evaluate_configuration(m, cfg, h, d, decision, lim);
        got = r.penalty;
        status = r.record.generator == tc.generator ? r.status : RunStatus::Others;
      }
    } else {
      GradedPolicy g;
      g.solver = testsupport::synthetic("s", "x", 1);
      g.t_min = testsupport::kTruthTMin;
      g.t_max = testsupport::kTruthTMax;
      g.types = tc.types;
      if (tc.generator == GeneratorOutcome::Solution) {
        got = graded_penalty(tc.a, g, tc.kind);
        status = classify_run(tc.generator, &tc.a, g.thresholds(tc.kind));
      } else {
        EvaluationLimits lim;
        lim.translate_limit = tc.generator == GeneratorOutcome::TranslateTimeout ? 0 : 10;
        lim.generator_limit = tc.generator == GeneratorOutcome::SolveTimeout ? 0 : 10;
        SolutionHistory h;
        const auto& m = tc.generator == GeneratorOutcome::Unsat ? unsat : solvable;
        const auto r = evaluate_configuration(m, cfg, h, g, decision, lim);
        got = r.penalty;
        status = r.record.generator == tc.generator ? r.status : RunStatus::Others;
      }
    }
    if (got != tc.expected || status != tc.expected_status) {
      ++mismatches;
      if (first.empty()) {
        first = " first mismatch '" + tc.label + "': got " + std::to_string(got) + "/" + to_string(status);
      }
    }
  }
  const double secs = seconds_since(t0);
  return {cases.size() >= 40 && mismatches == 0 && secs < 1.0,
          std::to_string(cases.size()) + " cases, " + std::to_string(mismatches) + " mismatches, " +
              fmt("%.3f s", secs) + first};
}

// ---------------------------------------------------------------------------

Outcome scoring_oracle() {
  const auto t0 = Clock::now();
  Rng rng(20240611);
  std::size_t pairs = 0, score_bad = 0, total_bad = 0;
  double worst = 0;
  for (int set = 0; set < 1000; ++set) {
    const auto kind = static_cast<ProblemKind>(rng.uniform_int(0, 2));
    const auto ns = static_cast<std::size_t>(rng.uniform_int(3, 5));
    const auto ni = static_cast<std::size_t>(rng.uniform_int(5, 20));
    std::vector<std::string> solvers, insts;
    for (std::size_t s = 0; s < ns; ++s) solvers.push_back("s" + std::to_string(s));
    std::map<RecordKey, ComparableRecord> recs;
    std::map<std::string, double> ref_totals;
    for (std::size_t i = 0; i < ni; ++i) {
      insts.push_back("i" + std::to_string(i));
      const auto rr = testsupport::random_records(rng, ns, kind);
      for (std::size_t s = 0; s < ns; ++s) recs[{solvers[s], insts.back()}] = testsupport::to_comparable(rr[s], kind);
      for (std::size_t s = 0; s < ns; ++s) {
        for (std::size_t t = 0; t < ns; ++t) {
          if (s == t) continue;
          const auto ref = testsupport::ref_minizinc_score(rr[s], rr[t], kind);
          const auto got = minizinc_score(testsupport::to_comparable(rr[s], kind), testsupport::to_comparable(rr[t], kind));
          const double d = std::max(std::abs(got.a - ref.first), std::abs(got.b - ref.second));
          worst = std::max(worst, d);
          score_bad += d > 1e-12 ? 1 : 0;
          ++pairs;
          ref_totals[solvers[s]] += ref.first;
        }
      }
    }
    const auto table = borda_complete(recs, solvers, insts);
    for (const auto& s : solvers) {
      const double d = std::abs(table.totals.at(s) - ref_totals[s]);
      worst = std::max(worst, d);
      total_bad += d > 1e-12 ? 1 : 0;
    }
  }
  const double secs = seconds_since(t0);
  return {score_bad == 0 && total_bad == 0 && secs < 10.0,
          "1000 sets, " + std::to_string(pairs) + " ordered pairs, " + std::to_string(score_bad) +
              " score and " + std::to_string(total_bad) + " total mismatches, max diff " + fmt("%.2g", worst) +
              ", " + fmt("%.2f s", secs)};
}

// ---------------------------------------------------------------------------

Outcome friedman() {
  Rng rng(31337);
  std::size_t stat_bad = 0, cd_bad = 0, cd_checked = 0;
  double worst = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto n = static_cast<std::size_t>(rng.uniform_int(2, 20));
    const auto k = static_cast<std::size_t>(rng.uniform_int(2, 10));
    PenaltyMatrix m(n, std::vector<double>(k));
    const bool ties = rng.uniform01() < 0.5;
    const double trend = rng.uniform01() < 0.5 ? 0.3 : 0.0;
    for (auto& row : m) {
      for (std::size_t j = 0; j < k; ++j) {
        row[j] = (ties ? static_cast<double>(rng.uniform_int(-1, 2)) : rng.uniform01()) + trend * static_cast<double>(j);
      }
    }
    const auto got = friedman_test(m, 0.05);
    const auto ref = testsupport::ref_friedman(m);
    const double d = std::abs(got.statistic - ref.statistic);
    worst = std::max(worst, d);
    stat_bad += d > 1e-9 ? 1 : 0;
    if (got.significant) {
      ++cd_checked;
      const double df = static_cast<double>((n - 1) * (k - 1));
      const double t = boost::math::quantile(boost::math::students_t(df), 0.975);
      const double cd = t * std::sqrt(ref.critical_difference_sq_over_t2);
      cd_bad += std::abs(cd - got.critical_difference) > 1e-9 * std::max(1.0, cd) ? 1 : 0;
    }
  }

  std::size_t invariance_bad = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto n = static_cast<std::size_t>(rng.uniform_int(3, 15));
    const auto k = static_cast<std::size_t>(rng.uniform_int(2, 8));
    PenaltyMatrix m(n, std::vector<double>(k));
    for (std::size_t i = 0; i < n; ++i) {
      // half the rows get a clear trend so that some cases eliminate
      for (std::size_t j = 0; j < k; ++j) {
        m[i][j] = static_cast<double>(rng.uniform_int(0, 4)) + (i % 2 ? static_cast<double>(j) : 0.0);
      }
    }
    auto t = m;
    for (auto& row : t) {
      const double s = 0.1 + rng.uniform01();
      const double o = rng.uniform01() * 50 - 25;
      const int form = static_cast<int>(rng.uniform_int(0, 2));
      for (auto& v : row) {
        v = form == 0 ? s * v + o : form == 1 ? std::exp(s * v) + o : std::cbrt(v) * s + o;
      }
    }
    if (friedman_eliminate(m, 0.05) != friedman_eliminate(t, 0.05)) ++invariance_bad;
  }
  return {stat_bad == 0 && cd_bad == 0 && invariance_bad == 0,
          "200 matrices, max statistic diff " + fmt("%.2g", worst) + ", CD routes agree on " +
              std::to_string(cd_checked - cd_bad) + "/" + std::to_string(cd_checked) + ", rank invariance " +
              std::to_string(200 - invariance_bad) + "/200"};
}

// ---------------------------------------------------------------------------

Outcome exhaustion() {
  const auto t0 = Clock::now();
  const auto model = parse_generator_model(
      "param k: 1..7\nfind a: int(1..7)\nfind b: int(1..7)\nsuch that a < b\nsuch that b <= k");
  const GeneratorConfiguration cfg{"c1", {{"k", 7}}};
  std::size_t expected = 0;
  for (int a = 1; a <= 7; ++a) {
    for (int b = 1; b <= 7; ++b) expected += a < b ? 1 : 0;
  }
  GradedPolicy g;
  g.solver = testsupport::synthetic("s", "a", 1);
  g.t_min = 1;
  g.t_max = 100;
  SolutionHistory h;
  std::set<std::pair<std::int64_t, std::int64_t>> seen;
  std::size_t produced = 0;
  for (std::size_t i = 0; i < expected; ++i) {
    const auto r = evaluate_configuration(model, cfg, h, g, ProblemModel{}, {});
    if (!r.instance) break;
    ++produced;
    seen.insert({get_int(r.instance->values, "a"), get_int(r.instance->values, "b")});
  }
  const auto last = evaluate_configuration(model, cfg, h, g, ProblemModel{}, {});
  const double secs = seconds_since(t0);
  const bool ok = expected == 21 && produced == expected && seen.size() == expected &&
                  is_plus_infinity(last.penalty) && last.record.generator == GeneratorOutcome::Unsat &&
                  secs < 30.0;
  return {ok, "S = " + std::to_string(expected) + ", " + std::to_string(seen.size()) +
                  " distinct instances, evaluation S+1: generator " + to_string(last.record.generator) +
                  " penalty " + std::to_string(last.penalty) + ", " + fmt("%.2f s", secs)};
}

// ---------------------------------------------------------------------------

const char* kLatencyModel = R"(
param p: 1..100
find x: int(0..30)
)";

fs::path make_campaign(const fs::path& dir, const std::string& config, const std::string& model) {
  fs::create_directories(dir);
  write_file(CampaignPaths{dir}.config(), config);
  write_file(CampaignPaths{dir}.model(), model);
  return dir;
}

std::string synthetic_json(const std::string& param, double scale, double offset) {
  std::ostringstream o;
  o << R"({"kind": "complete", "builtin": "synthetic", "options": {"param": ")" << param << R"(", "scale": ")"
    << scale << R"(", "offset": ")" << offset << R"("}})";
  return o.str();
}

Outcome graded_campaign() {
  const auto t0 = Clock::now();
  // latency 2p; graded iff 40 <= 2p < 100, i.e. 20 <= p < 50
  const std::string config = R"({
    "kind": "graded",
    "problem": {"name": "latency", "kind": "decision", "checker": "none"},
    "solvers": {"syn": )" + synthetic_json("p", 2, 0) + R"(},
    "solver": "syn", "t_min": 40, "t_max": 100, "seed": 17,
    "tuner": {"budget": 300}
  })";
  testsupport::TempDir tmp;
  std::string logs[2];
  CampaignArchive archive;
  for (int run = 0; run < 2; ++run) {
    const auto dir = make_campaign(tmp.path() / ("g" + std::to_string(run)), config, kLatencyModel);
    run_campaign(dir);
    logs[run] = read_file(CampaignPaths{dir}.log());
    if (run == 0) archive = load_campaign(dir);
  }
  const auto graded = graded_instances(archive);
  std::size_t in_band = 0;
  for (const auto& id : graded) {
    const auto p = get_int(archive.instance(id).values, "p");
    in_band += p >= 20 && p < 50 ? 1 : 0;
  }
  const double frac = graded.empty() ? 0.0 : static_cast<double>(in_band) / static_cast<double>(graded.size());
  const double secs = seconds_since(t0);
  const bool ok = archive.log.size() <= 300 && graded.size() >= 20 && frac >= 0.9 && logs[0] == logs[1] && secs < 120;
  return {ok, std::to_string(archive.log.size()) + " evaluations, " + std::to_string(graded.size()) + " graded, " +
                  fmt("%.1f%%", 100 * frac) + " with p in [20, 50), rerun log " +
                  (logs[0] == logs[1] ? "identical" : "differs") + ", " + fmt("%.1f s", secs)};
}

// ---------------------------------------------------------------------------

Outcome discriminating_campaigns() {
  const auto t0 = Clock::now();
  // A = 2p, B = 200 - 2p; they cross at p* = 50
  const std::string solvers = R"({"A": )" + synthetic_json("p", 2, 0) + R"(, "B": )" +
                              synthetic_json("p", -2, 200) + "}";
  testsupport::TempDir tmp;
  std::string detail;
  bool ok = true;
  for (const auto& [fav, base] : {std::pair<std::string, std::string>{"A", "B"}, {"B", "A"}}) {
    const std::string config = R"({
      "kind": "discriminating",
      "problem": {"name": "latency", "kind": "decision", "checker": "none"},
      "solvers": )" + solvers + R"(,
      "favoured": ")" + fav + R"(", "base": ")" + base + R"(", "t_min": 10, "t_max": 300, "seed": 23,
      "tuner": {"budget": 300}
    })";
    const auto dir = make_campaign(tmp.path() / fav, config, kLatencyModel);
    run_campaign(dir);
    const auto archive = load_campaign(dir);
    // discriminating: the favoured solver outscores the base solver
    std::size_t found = 0, wrong_side = 0;
    for (const auto& row : discrimination_report(archive).rows) {
      if (row.score_favoured <= row.score_base) continue;
      ++found;
      const auto p = get_int(archive.instance(row.instance).values, "p");
      const bool correct = fav == "A" ? p < 50 : p > 50;
      wrong_side += correct ? 0 : 1;
    }
    ok = ok && archive.log.size() <= 300 && found >= 10 && wrong_side == 0;
    detail += "favouring " + fav + ": " + std::to_string(found) + " found, " + std::to_string(wrong_side) +
              " on the wrong side of p* = 50; ";
  }
  const double secs = seconds_since(t0);
  ok = ok && secs < 120;
  return {ok, detail + fmt("%.1f s", secs)};
}

// ---------------------------------------------------------------------------

Outcome local_search() {
  Rng rng(99);
  ProblemModel problem;
  problem.kind = ProblemKind::Maximise;
  problem.checker = "knapsack";
  const auto hill = testsupport::builtin("hill", "knapsack-hill", {{"node_cost", "0.001"}, {"iterations", "20000"}},
                                         SolverKind::LocalSearch);
  const auto bnb = testsupport::builtin("bnb", "knapsack-bnb");
  GradedPolicy g;
  g.solver = hill;
  g.oracle = bnb;
  g.t_min = 0.05;
  g.t_max = 5.0;

  std::size_t ttb_ok = 0, class_ok = 0, graded = 0;
  for (int i = 0; i < 20; ++i) {
    const auto inst = testsupport::make_instance("k" + std::to_string(i),
                                                 testsupport::random_knapsack(rng, static_cast<int>(rng.uniform_int(6, 12))));
    RunOptions opts;
    opts.time_limit = g.t_max;
    opts.seed = static_cast<std::uint64_t>(i) + 1;
    const auto record = run_solver(hill, problem, inst, opts);
    const auto oracle = oracle_optimum(problem, inst, bnb, 3 * g.t_max, opts);
    const auto optimum = testsupport::brute_force_optimum(inst.values);

    // first trace point at the brute-force optimum, found independently
    std::optional<double> ttb;
    for (const auto& tp : record.trace) {
      if (optimum && tp.objective == *optimum) {
        ttb = tp.time;
        break;
      }
    }
    const auto effective = effective_local_search_record(record, oracle, problem.kind, g.t_max);
    if (effective.status == SolverStatus::Sat && effective.time_to_best && *effective.time_to_best <= record.time &&
        ttb && *ttb == *effective.time_to_best) {
      ++ttb_ok;
    } else if (!ttb && effective.status != SolverStatus::Sat) {
      ++ttb_ok;
    }
    const bool expect_graded = ttb && *ttb >= g.t_min && *ttb < g.t_max;
    const auto status = classify_run(GeneratorOutcome::Solution, &effective, g.thresholds(problem.kind));
    const auto penalty = graded_penalty(effective, g, problem.kind);
    const bool consistent = (status == RunStatus::Graded) == expect_graded && (penalty == -1.0) == expect_graded;
    class_ok += consistent ? 1 : 0;
    graded += expect_graded ? 1 : 0;
  }
  return {ttb_ok == 20 && class_ok == 20,
          "time_to_best consistent on " + std::to_string(ttb_ok) + "/20, classification consistent on " +
              std::to_string(class_ok) + "/20 (" + std::to_string(graded) + " graded)"};
}

// ---------------------------------------------------------------------------

const char* kKnapsackModel = R"(
param n: 4..9
param wlo: 1..20
param spread: 0..30
param tight: 20..80
find weight: array[n] of int(1..60)
find value: array[n] of int(1..200)
find capacity: int(1..1000)
such that forall(i in 1..n)(weight[i] >= wlo + spread * i / n)
such that forall(i in 1..n)(value[i] >= 2 * weight[i] - i)
such that 100 * capacity >= tight * sum(weight)
such that 100 * capacity <= tight * sum(weight) + 200
)";

testsupport::RefRecord reference_view(const SolverRecord& r, ProblemKind kind) {
  testsupport::RefRecord out{false, false, std::nullopt, r.time};
  if (r.check == CheckState::Incorrect) return out;
  const bool answered = r.status == SolverStatus::Sat || r.status == SolverStatus::Unsat;
  const bool partial = r.status == SolverStatus::Timeout && kind != ProblemKind::Decision && r.solution && r.objective;
  out.solved = answered || partial;
  if (out.solved && r.status != SolverStatus::Unsat) {
    out.quality = r.objective;
    out.optimal = r.status == SolverStatus::Sat && r.optimal_claimed;
  }
  return out;
}

bool packing_feasible(const ValueMap& instance, const std::string& payload) {
  const auto sol = parse_instance_text(payload);
  const auto& take = std::get<IntArray>(sol.at("take"));
  const auto& weight = std::get<IntArray>(instance.at("weight"));
  std::int64_t used = 0;
  for (std::size_t i = 0; i < take.size() && i < weight.size(); ++i) {
    if (take[i] < 0 || take[i] > 1) return false;
    used += take[i] * weight[i];
  }
  return take.size() == weight.size() && used <= std::get<std::int64_t>(instance.at("capacity"));
}

Outcome combined() {
  const auto t0 = Clock::now();
  testsupport::TempDir tmp;
  std::map<std::string, CampaignArchive> archives;
  for (int i = 0; i < 2; ++i) {
    const std::string config = R"({
      "kind": "graded",
      "problem": {"name": "knapsack", "kind": "maximise", "checker": "knapsack"},
      "solvers": {"bnb": {"kind": "complete", "builtin": "knapsack-bnb", "options": {"node_cost": "0.01"}}},
      "solver": "bnb", "t_min": 0.05, "t_max": 100, "seed": )" + std::to_string(40 + i) + R"(,
      "tuner": {"budget": 40}
    })";
    const auto dir = make_campaign(tmp.path() / ("k" + std::to_string(i)), config, kKnapsackModel);
    run_campaign(dir);
    archives.emplace("k" + std::to_string(i), load_campaign(dir));
  }
  const auto set = build_combined_set(archives, 5, 7);
  std::map<std::string, SolverAdapter> solvers{
      {"bnb", testsupport::builtin("bnb", "knapsack-bnb", {{"node_cost", "0.01"}})},
      {"greedy", testsupport::builtin("greedy", "knapsack-greedy", {{"node_cost", "0.01"}})},
      {"buggy", testsupport::builtin("buggy", "knapsack-buggy", {{"node_cost", "0.01"}})},
  };
  const auto& problem = archives.begin()->second.config.problem;
  CombinedOptions opts;
  opts.time_limit = 100;
  const auto report = evaluate_combined(set, solvers, problem, opts);

  std::size_t selected = 0;
  for (const auto& [src, ids] : set.selected) selected += ids.size();

  std::map<std::string, std::map<std::string, testsupport::RefRecord>> by_instance;
  std::size_t buggy_sat = 0, buggy_infeasible = 0;
  for (const auto& run : report.runs) {
    by_instance[run.instance].emplace(run.solver, reference_view(run.record, problem.kind));
    if (run.solver == "buggy" && run.record.status == SolverStatus::Sat) {
      ++buggy_sat;
      const auto id = run.instance.substr(run.instance.find('/') + 1);
      const auto values = archives.at(run.source).instance(id).values;
      buggy_infeasible += run.record.solution && !packing_feasible(values, *run.record.solution) ? 1 : 0;
    }
  }
  std::map<std::string, double> ref_totals;
  for (const auto& [inst, recs] : by_instance) {
    for (const auto& [s, rs] : recs) {
      for (const auto& [t, rt] : recs) {
        if (s != t) ref_totals[s] += testsupport::ref_minizinc_score(rs, rt, problem.kind).first;
      }
    }
  }
  double worst = 0;
  for (const auto& [s, _] : solvers) worst = std::max(worst, std::abs(report.borda.totals.at(s) - ref_totals[s]));
  const std::size_t flagged = report.flagged.count("buggy") ? report.flagged.at("buggy") : 0;
  const std::size_t sat = report.sat_records.count("buggy") ? report.sat_records.at("buggy") : 0;
  const double secs = seconds_since(t0);
  const bool ok = set.selected.size() == 2 && selected > 0 && report.runs.size() == 3 * selected && worst <= 1e-12 &&
                  sat > 0 && sat == buggy_sat && flagged == sat && buggy_infeasible == buggy_sat;

  std::string totals;
  for (const auto& s : report.borda.ranking()) totals += " " + s + "=" + fmt("%.3f", report.borda.totals.at(s));
  return {ok, std::to_string(selected) + " instances from 2 archives, Borda max diff " + fmt("%.2g", worst) +
                  " (" + totals.substr(1) + "), buggy flagged " + std::to_string(flagged) + "/" +
                  std::to_string(sat) + " Sat records, " + fmt("%.1f s", secs)};
}

// ---------------------------------------------------------------------------

Outcome resource_enforcement() {
  SolverAdapter sleeper{"sleeper", SolverKind::Complete,
                        ExternalCommand{": {model} {instance} {time_limit_ms}; exec sleep 1000", "", false}};
  const double limit = 1.0;
  testsupport::TempDir tmp;
  const auto inst = testsupport::make_instance("s1", {{"n", std::int64_t{3}}});
  std::size_t ok = 0;
  double worst = 0;
  for (int i = 0; i < 10; ++i) {
    RunOptions opts;
    opts.time_limit = limit;
    opts.work_dir = tmp.path();
    opts.log_tag = std::to_string(i);
    const auto t0 = Clock::now();
    const auto r = run_solver(sleeper, ProblemModel{}, inst, opts);
    const double wall = seconds_since(t0);
    worst = std::max(worst, wall);
    ok += r.status == SolverStatus::Timeout && wall <= limit + kKillGrace ? 1 : 0;
  }
  return {ok == 10, std::to_string(ok) + "/10 killed and classified Timeout, slowest " + fmt("%.2f s", worst) +
                        " against a " + fmt("%.0f s", limit + kKillGrace) + " bound"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"truth tables", truth_tables},
      {"scoring oracle", scoring_oracle},
      {"friedman", friedman},
      {"generator exhaustion", exhaustion},
      {"graded campaign", graded_campaign},
      {"discriminating campaigns", discriminating_campaigns},
      {"local search gradedness", local_search},
      {"combined evaluation", combined},
      {"resource enforcement", resource_enforcement},
  };
  int failures = 0;
  for (const auto& [name, fn] : criteria) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += o.pass ? 0 : 1;
    std::printf("%s  %-26s %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  return failures;
}
