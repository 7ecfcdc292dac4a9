// instgen: instance generation campaigns from the command line.

#include <csignal>
#include <cstdio>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "instgen/campaign.hpp"
#include "instgen/errors.hpp"
#include "instgen/report.hpp"

namespace fs = std::filesystem;
using namespace instgen;

namespace {

std::atomic<bool> g_abort{false};

void on_signal(int) { g_abort = true; }

std::uint64_t parse_bytes(const std::string& s) {
  if (s.empty()) throw ValidationError("empty memory limit");
  std::size_t pos = 0;
  const double v = std::stod(s, &pos);
  std::string unit = s.substr(pos);
  double mult = 1;
  if (unit == "" || unit == "B") {
    mult = 1;
  } else if (unit == "K" || unit == "KB" || unit == "KiB") {
    mult = 1024.0;
  } else if (unit == "M" || unit == "MB" || unit == "MiB") {
    mult = 1024.0 * 1024;
  } else if (unit == "G" || unit == "GB" || unit == "GiB") {
    mult = 1024.0 * 1024 * 1024;
  } else {
    throw ValidationError("unknown memory unit '" + unit + "'");
  }
  return static_cast<std::uint64_t>(v * mult);
}

struct Overrides {
  std::optional<std::size_t> budget;
  std::optional<double> t_min, t_max;
  std::optional<std::string> types, favoured, base, solver, mem_limit;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> workers;
};

void apply(CampaignConfig& c, const Overrides& o) {
  if (o.budget) c.tuner.total_budget = *o.budget;
  if (o.t_min) c.t_min = *o.t_min;
  if (o.t_max) c.t_max = *o.t_max;
  if (o.types) c.types = parse_types(*o.types);
  if (o.solver) {
    c.kind = CampaignKind::Graded;
    c.solver = *o.solver;
  }
  if (o.favoured) c.favoured = *o.favoured;
  if (o.base) c.base = *o.base;
  if (o.favoured || o.base) c.kind = CampaignKind::Discriminating;
  if (o.seed) c.seed = *o.seed;
  if (o.workers) c.workers = *o.workers;
  if (o.mem_limit) c.mem_limit = parse_bytes(*o.mem_limit);
}

void print_status(const std::vector<StatusRow>& rows) {
  for (const auto& r : rows) std::printf("  %-20s %6zu  %6.3f\n", r.status.c_str(), r.count, r.fraction);
}

int cmd_tune(const fs::path& dir, const Overrides& o) {
  const CampaignPaths paths{dir};
  auto config = campaign_config_from_json(read_file(paths.config()));
  apply(config, o);
  config.policy();  // validate before touching the archive
  write_file(paths.config(), to_json(config));

  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  const auto report = run_campaign(dir, &g_abort);
  std::printf("%s campaign: %zu evaluations in %d iterations%s\n", to_string(config.kind), report.log.size(),
              report.iterations, report.aborted ? " (interrupted)" : "");
  print_status(status_frequencies(report.log));
  std::printf("elites:\n");
  for (const auto& e : report.elites) std::printf("  %s  %s\n", e.id.c_str(), e.to_text().c_str());
  write_reports(load_campaign(dir));
  return report.aborted ? 130 : 0;
}

int cmd_combine(const std::vector<std::string>& sources, std::size_t k, std::uint64_t seed, const fs::path& out) {
  std::map<std::string, CampaignArchive> archives;
  for (const auto& s : sources) {
    const auto eq = s.find('=');
    const std::string name = eq == std::string::npos ? fs::path(s).filename().string() : s.substr(0, eq);
    const fs::path dir = eq == std::string::npos ? fs::path(s) : fs::path(s.substr(eq + 1));
    if (!archives.emplace(name, load_campaign(dir)).second) throw ValidationError("duplicate source name '" + name + "'");
  }
  const auto set = build_combined_set(archives, k, seed);
  for (const auto& w : set.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
  write_file(out, to_json(set));
  for (const auto& [source, ids] : set.selected) std::printf("%-20s %zu instances\n", source.c_str(), ids.size());
  return 0;
}

int cmd_evaluate(const fs::path& set_path, const std::string& solvers_path, const fs::path& out,
                 const Overrides& o) {
  const auto set = combined_set_from_json(read_file(set_path));
  if (set.sources.empty()) throw ValidationError("combined set has no sources");
  const auto first = campaign_config_from_json(read_file(CampaignPaths{set.sources.begin()->second}.config()));
  auto solvers = solvers_path.empty() ? first.solvers : solvers_from_json(read_file(solvers_path));
  CombinedOptions opts;
  opts.time_limit = o.t_max.value_or(first.t_max);
  opts.mem_limit = o.mem_limit ? parse_bytes(*o.mem_limit) : first.mem_limit;
  opts.seed = o.seed.value_or(set.seed);
  opts.workers = o.workers.value_or(1);
  opts.work_dir = out / "logs";
  const auto report = evaluate_combined(set, solvers, first.problem, opts);
  write_file(out / "runs.csv", combined_runs_to_csv(report));
  write_file(out / "borda.csv", borda_to_csv(report.borda));
  write_file(out / "summary.json", combined_summary_json(report));
  std::printf("%-20s %10s %8s %8s\n", "solver", "borda", "sat", "flagged");
  for (const auto& name : report.borda.ranking()) {
    std::printf("%-20s %10.4f %8zu %8zu\n", name.c_str(), report.borda.totals.at(name), report.sat_records.at(name),
                report.flagged.at(name));
  }
  return 0;
}

int cmd_report(const fs::path& dir) {
  const auto archive = load_campaign(dir);
  write_reports(archive);
  std::printf("%s campaign, %zu evaluations, %zu instances\n", to_string(archive.config.kind), archive.log.size(),
              archive.instance_ids.size());
  print_status(status_frequencies(archive));
  if (archive.config.kind == CampaignKind::Graded) {
    for (const auto& [solver, s] : time_distribution(graded_times(archive))) {
      std::printf("graded times (%s): n=%zu min=%g q1=%g median=%g q3=%g max=%g\n", solver.c_str(), s.count, s.min,
                  s.q1, s.median, s.q3, s.max);
    }
  } else {
    const auto d = discrimination_report(archive);
    std::printf("discriminating instances (%s over %s): %zu\n", d.favoured.c_str(), d.base.c_str(), d.count());
  }
  std::printf("reports written to %s\n", CampaignPaths{dir}.reports().string().c_str());
  return 0;
}

int cmd_check(const fs::path& dir) {
  const auto res = recheck_archive(load_campaign(dir));
  for (const auto& l : res.lines) std::printf("%s\n", l.c_str());
  std::printf("%zu solutions checked, %zu incorrect, %zu disagree with the archive\n", res.checked, res.incorrect,
              res.disagreements);
  return res.disagreements == 0 ? 0 : 1;
}

void add_common(CLI::App* app, Overrides& o) {
  app->add_option("--seed", o.seed, "Random seed");
  app->add_option("--workers", o.workers, "Concurrent evaluations")->check(CLI::PositiveNumber);
  app->add_option("--mem-limit", o.mem_limit, "Memory limit per solver run (e.g. 8G)");
  app->add_option("--t-max", o.t_max, "Solver time limit in seconds");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Benchmark instance generation by iterated racing over generator configurations"};
  app.require_subcommand(1);
  Overrides o;

  fs::path dir;
  auto* tune = app.add_subcommand("tune", "Run or resume a graded or discriminating campaign");
  tune->add_option("dir", dir, "Campaign directory (config.json, generator.model)")->required();
  tune->add_option("--budget", o.budget, "Number of generator configuration evaluations");
  tune->add_option("--t-min", o.t_min, "Minimum solving time in seconds");
  tune->add_option("--types", o.types, "Instance types to accept: sat, unsat or sat,unsat");
  tune->add_option("--solver", o.solver, "Solver for a graded campaign");
  tune->add_option("--favoured", o.favoured, "Favoured solver (discriminating campaign)");
  tune->add_option("--base", o.base, "Base solver (discriminating campaign)");
  add_common(tune, o);

  std::vector<std::string> sources;
  std::size_t k = 50;
  std::uint64_t combine_seed = 0;
  fs::path set_out = "combined.json";
  auto* combine = app.add_subcommand("combine", "Sample graded instances from several campaigns");
  combine->add_option("sources", sources, "Campaign directories, optionally name=dir")->required();
  combine->add_option("-k", k, "Instances per campaign");
  combine->add_option("--seed", combine_seed, "Sampling seed");
  combine->add_option("-o,--out", set_out, "Output file");

  fs::path set_path;
  std::string solvers_path;
  fs::path eval_out = "combined";
  auto* evaluate = app.add_subcommand("evaluate", "Run solvers on a combined set and rank them");
  evaluate->add_option("set", set_path, "Combined set file from 'combine'")->required();
  evaluate->add_option("--solvers", solvers_path, "JSON object of solver adapters (default: first campaign's)");
  evaluate->add_option("-o,--out", eval_out, "Output directory");
  add_common(evaluate, o);

  auto* report = app.add_subcommand("report", "Write status, time and discrimination reports");
  report->add_option("dir", dir, "Campaign directory")->required();

  auto* check = app.add_subcommand("check", "Re-verify the archived solutions of a campaign");
  check->add_option("dir", dir, "Campaign directory")->required();

  CLI11_PARSE(app, argc, argv);
  try {
    if (*tune) return cmd_tune(dir, o);
    if (*combine) return cmd_combine(sources, k, combine_seed, set_out);
    if (*evaluate) return cmd_evaluate(set_path, solvers_path, eval_out, o);
    if (*report) return cmd_report(dir);
    if (*check) return cmd_check(dir);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "instgen: %s\n", e.what());
    return 2;
  }
  return 0;
}
