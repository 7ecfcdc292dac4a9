#include "instgen/campaign.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "instgen/errors.hpp"
#include "instgen/model.hpp"

namespace instgen {

namespace fs = std::filesystem;
using nlohmann::json;

const char* to_string(CampaignKind k) {
  return k == CampaignKind::Graded ? "graded" : "discriminating";
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error("cannot read " + p.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const fs::path& p, const std::string& text) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error("cannot write " + p.string());
  out << text;
}

namespace {

template <class T>
T get_or(const json& j, const char* key, T fallback) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return fallback;
  return it->get<T>();
}

SolverAdapter adapter_from(const std::string& name, const json& j) {
  SolverAdapter a;
  a.name = name;
  const auto kind = get_or<std::string>(j, "kind", "complete");
  if (kind == "complete") {
    a.kind = SolverKind::Complete;
  } else if (kind == "local_search") {
    a.kind = SolverKind::LocalSearch;
  } else {
    throw ValidationError("solver '" + name + "': unknown kind '" + kind + "'");
  }
  if (j.contains("builtin")) {
    BuiltinSolver b;
    b.id = j["builtin"].get<std::string>();
    if (j.contains("options")) {
      for (const auto& [k, v] : j["options"].items()) b.options[k] = v.is_string() ? v.get<std::string>() : v.dump();
    }
    a.mode = b;
  } else if (j.contains("command")) {
    ExternalCommand c;
    c.command = j["command"].get<std::string>();
    c.limiter_prefix = get_or<std::string>(j, "limiter", "");
    c.include_parameters = get_or<bool>(j, "include_parameters", false);
    a.mode = c;
  } else {
    throw ValidationError("solver '" + name + "' needs \"builtin\" or \"command\"");
  }
  validate_adapter(a);
  return a;
}

json adapter_json(const SolverAdapter& a) {
  json j;
  j["kind"] = to_string(a.kind);
  if (const auto* b = std::get_if<BuiltinSolver>(&a.mode)) {
    j["builtin"] = b->id;
    j["options"] = json::object();
    for (const auto& [k, v] : b->options) j["options"][k] = v;
  } else {
    const auto& c = std::get<ExternalCommand>(a.mode);
    j["command"] = c.command;
    j["limiter"] = c.limiter_prefix;
    j["include_parameters"] = c.include_parameters;
  }
  return j;
}

std::map<std::string, SolverAdapter> solvers_from(const json& j) {
  std::map<std::string, SolverAdapter> out;
  for (const auto& [name, spec] : j.items()) out.emplace(name, adapter_from(name, spec));
  return out;
}

}  // namespace

std::map<std::string, SolverAdapter> solvers_from_json(const std::string& text) {
  try {
    return solvers_from(json::parse(text));
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad solver list: ") + e.what());
  }
}

CampaignConfig campaign_config_from_json(const std::string& text) {
  try {
    const auto j = json::parse(text);
    CampaignConfig c;
    const auto kind = get_or<std::string>(j, "kind", "graded");
    if (kind == "graded") {
      c.kind = CampaignKind::Graded;
    } else if (kind == "discriminating") {
      c.kind = CampaignKind::Discriminating;
    } else {
      throw ValidationError("unknown campaign kind '" + kind + "'");
    }
    if (j.contains("problem")) {
      const auto& p = j["problem"];
      c.problem.name = get_or<std::string>(p, "name", "problem");
      c.problem.kind = problem_kind_from_string(get_or<std::string>(p, "kind", "decision"));
      c.problem.checker = get_or<std::string>(p, "checker", "none");
      c.problem.model_path = get_or<std::string>(p, "model", "");
    }
    if (j.contains("solvers")) c.solvers = solvers_from(j["solvers"]);
    c.solver = get_or<std::string>(j, "solver", "");
    c.oracle = get_or<std::string>(j, "oracle", "");
    c.oracle_budget = get_or<double>(j, "oracle_budget", 0.0);
    c.favoured = get_or<std::string>(j, "favoured", "");
    c.base = get_or<std::string>(j, "base", "");
    c.t_min = get_or<double>(j, "t_min", c.t_min);
    c.t_max = get_or<double>(j, "t_max", c.t_max);
    c.types = parse_types(get_or<std::string>(j, "types", "sat,unsat"));
    c.translate_limit = get_or<double>(j, "translate_limit", c.translate_limit);
    c.generator_limit = get_or<double>(j, "generator_limit", c.generator_limit);
    c.mem_limit = get_or<std::uint64_t>(j, "mem_limit", c.mem_limit);
    c.seed = get_or<std::uint64_t>(j, "seed", 0);
    c.workers = get_or<std::size_t>(j, "workers", 1);
    if (j.contains("tuner")) {
      const auto& t = j["tuner"];
      c.tuner.total_budget = get_or<std::size_t>(t, "budget", c.tuner.total_budget);
      c.tuner.first_race_size = get_or<std::size_t>(t, "first_race_size", 0);
      c.tuner.min_survivors = get_or<std::size_t>(t, "min_survivors", c.tuner.min_survivors);
      c.tuner.elimination_alpha = get_or<double>(t, "alpha", c.tuner.elimination_alpha);
      c.tuner.instances_per_step = get_or<std::size_t>(t, "instances_per_step", 1);
      c.tuner.first_test_after = get_or<std::size_t>(t, "first_test_after", c.tuner.first_test_after);
      c.tuner.race_budget = get_or<std::size_t>(t, "race_budget", 0);
    }
    return c;
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad campaign config: ") + e.what());
  }
}

std::string to_json(const CampaignConfig& c) {
  json j;
  j["kind"] = to_string(c.kind);
  j["problem"] = {{"name", c.problem.name},
                  {"kind", to_string(c.problem.kind)},
                  {"checker", c.problem.checker},
                  {"model", c.problem.model_path.string()}};
  j["solvers"] = json::object();
  for (const auto& [name, a] : c.solvers) j["solvers"][name] = adapter_json(a);
  j["solver"] = c.solver;
  j["oracle"] = c.oracle;
  j["oracle_budget"] = c.oracle_budget;
  j["favoured"] = c.favoured;
  j["base"] = c.base;
  j["t_min"] = c.t_min;
  j["t_max"] = c.t_max;
  j["types"] = to_string(c.types);
  j["translate_limit"] = c.translate_limit;
  j["generator_limit"] = c.generator_limit;
  j["mem_limit"] = c.mem_limit;
  j["seed"] = c.seed;
  j["workers"] = c.workers;
  j["tuner"] = {{"budget", c.tuner.total_budget},
                {"first_race_size", c.tuner.first_race_size},
                {"min_survivors", c.tuner.min_survivors},
                {"alpha", c.tuner.elimination_alpha},
                {"instances_per_step", c.tuner.instances_per_step},
                {"first_test_after", c.tuner.first_test_after},
                {"race_budget", c.tuner.race_budget}};
  return j.dump(2) + "\n";
}

const SolverAdapter& CampaignConfig::adapter(const std::string& name) const {
  auto it = solvers.find(name);
  if (it == solvers.end()) throw ValidationError("unknown solver '" + name + "'");
  return it->second;
}

Policy CampaignConfig::policy() const {
  if (kind == CampaignKind::Graded) {
    GradedPolicy g;
    g.solver = adapter(solver);
    g.t_min = t_min;
    g.t_max = t_max;
    g.types = types;
    if (!oracle.empty()) g.oracle = adapter(oracle);
    g.oracle_budget = oracle_budget;
    if (g.solver.kind == SolverKind::LocalSearch && !g.oracle && problem.kind != ProblemKind::Decision) {
      throw ValidationError("a local-search solver on an optimisation problem needs an oracle");
    }
    g.validate();
    return g;
  }
  DiscriminatingPolicy d;
  d.favoured = adapter(favoured);
  d.base = adapter(base);
  d.t_min = t_min;
  d.t_max = t_max;
  d.types = types;
  d.validate();
  return d;
}

EvaluationLimits CampaignConfig::limits(const fs::path& dir) const {
  EvaluationLimits l;
  l.translate_limit = translate_limit;
  l.generator_limit = generator_limit;
  l.mem_limit = mem_limit;
  l.seed = seed;
  l.archive_dir = dir;
  return l;
}

namespace {

// Drops archived instances that never reached the log (interrupted step),
// so the rebuilt history matches the replay exactly.
void prune_orphans(const CampaignPaths& paths, const std::vector<LogEntry>& log) {
  std::set<std::string> logged;
  for (const auto& e : log) {
    if (!e.instance_id.empty()) logged.insert(e.instance_id);
  }
  for (const auto& dir : {paths.instances(), paths.records()}) {
    if (!fs::exists(dir)) continue;
    for (const auto& entry : fs::directory_iterator(dir)) {
      if (!entry.is_regular_file()) continue;
      if (!logged.contains(entry.path().stem().string())) fs::remove(entry.path());
    }
  }
}

}  // namespace

TunerReport run_campaign(const fs::path& dir, const std::atomic<bool>* abort) {
  const CampaignPaths paths{dir};
  const auto config = campaign_config_from_json(read_file(paths.config()));
  const auto model = parse_generator_model(read_file(paths.model()));
  const auto policy = config.policy();
  const auto limits = config.limits(dir);

  std::vector<LogEntry> replay;
  if (fs::exists(paths.log())) replay = parse_log(read_file(paths.log()));
  prune_orphans(paths, replay);
  auto history = SolutionHistory::load_archive(paths.instances());
  fs::create_directories(paths.instances());
  fs::create_directories(paths.records());

  std::ofstream log(paths.log(), std::ios::binary | std::ios::trunc);
  log << log_header_line();
  for (const auto& e : replay) log << format_log_line(e);
  log.flush();

  TunerHooks hooks;
  hooks.replay = replay;
  hooks.abort = abort;
  hooks.on_entry = [&](const LogEntry& e) {
    log << format_log_line(e);
    log.flush();
  };
  TunerConfig tc = config.tuner;
  tc.seed = config.seed;
  tc.workers = config.workers;

  Evaluator evaluator = [&](const GeneratorConfiguration& c, const EvalContext&) {
    const auto r = evaluate_configuration(model, c, *history, policy, config.problem, limits);
    return EvalOutcome{r.penalty, r.status, r.instance ? r.instance->id : std::string()};
  };
  return run_tuning(model.space(), evaluator, tc, hooks);
}

CandidateInstance CampaignArchive::instance(const std::string& id) const {
  return read_instance(root / "instances", id);
}

CampaignArchive load_campaign(const fs::path& dir) {
  const CampaignPaths paths{dir};
  CampaignArchive a;
  a.root = dir;
  a.config = campaign_config_from_json(read_file(paths.config()));
  if (fs::exists(paths.log())) a.log = parse_log(read_file(paths.log()));
  std::set<std::string> present;
  if (fs::exists(paths.instances())) {
    for (const auto& entry : fs::directory_iterator(paths.instances())) {
      if (entry.path().extension() == ".inst") present.insert(entry.path().stem().string());
    }
  }
  a.instance_ids.assign(present.begin(), present.end());
  if (fs::exists(paths.records())) {
    for (const auto& entry : fs::directory_iterator(paths.records())) {
      if (!entry.is_regular_file() || entry.path().extension() != ".json") continue;
      auto rec = evaluation_from_json(read_file(entry.path()));
      if (!rec.instance_id.empty() && !present.contains(rec.instance_id)) {
        throw MissingRecord("record references missing instance '" + rec.instance_id + "'");
      }
      a.records.emplace(rec.instance_id, std::move(rec));
    }
  }
  return a;
}

}  // namespace instgen
