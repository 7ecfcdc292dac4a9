#include "instgen/runner.hpp"

#include <atomic>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include <signal.h>
#include <unistd.h>

#include "instgen/builtin.hpp"
#include "instgen/errors.hpp"
#include "instgen/process.hpp"

namespace instgen {

namespace fs = std::filesystem;

const char* to_string(SolverKind k) {
  return k == SolverKind::Complete ? "complete" : "local_search";
}

const char* to_string(SolverStatus s) {
  switch (s) {
    case SolverStatus::Sat: return "sat";
    case SolverStatus::Unsat: return "unsat";
    case SolverStatus::Timeout: return "timeout";
    case SolverStatus::Error: return "error";
  }
  return "error";
}

SolverStatus solver_status_from_string(const std::string& s) {
  for (auto st : {SolverStatus::Sat, SolverStatus::Unsat, SolverStatus::Timeout, SolverStatus::Error}) {
    if (s == to_string(st)) return st;
  }
  throw ParseError("unknown solver status '" + s + "'");
}

void validate_adapter(const SolverAdapter& adapter) {
  if (adapter.name.empty()) throw ValidationError("solver adapter without a name");
  if (const auto* b = std::get_if<BuiltinSolver>(&adapter.mode)) {
    static const char* ids[] = {"knapsack-bnb", "knapsack-greedy", "knapsack-hill", "knapsack-buggy",
                                "synthetic"};
    for (const char* id : ids) {
      if (b->id == id) return;
    }
    throw ValidationError("unknown builtin solver '" + b->id + "'");
  }
  const auto& cmd = std::get<ExternalCommand>(adapter.mode).command;
  for (const char* ph : {"{model}", "{instance}", "{time_limit_ms}"}) {
    if (cmd.find(ph) == std::string::npos) {
      throw ValidationError("command of '" + adapter.name + "' lacks the " + ph + " placeholder");
    }
  }
}

// ---------------------------------------------------------------------------
// Output protocol

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::optional<std::int64_t> objective_line(const std::string& line) {
  constexpr std::string_view key = "objective";
  if (line.rfind(key, 0) != 0) return std::nullopt;
  auto rest = trim(std::string_view(line).substr(key.size()));
  if (rest.empty() || rest[0] != '=') return std::nullopt;
  rest = trim(std::string_view(rest).substr(1));
  if (!rest.empty() && rest.back() == ';') rest = trim(std::string_view(rest).substr(0, rest.size() - 1));
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), v);
  if (ec != std::errc{} || ptr != rest.data() + rest.size()) return std::nullopt;
  return v;
}

}  // namespace

SolverRecord parse_solver_output(const std::string& output, const std::vector<double>& line_times,
                                 ProblemKind kind, bool timed_out, int exit_code, double elapsed) {
  SolverRecord rec;
  rec.time = elapsed;
  std::istringstream in(output);
  std::string raw;
  std::string block;
  std::optional<std::int64_t> block_objective;
  std::size_t solutions = 0;
  std::optional<double> first_solution_time;
  bool complete = false;
  bool unsat = false;
  bool unknown = false;
  bool error = false;
  std::size_t index = 0;

  while (std::getline(in, raw)) {
    const double t = index < line_times.size() ? line_times[index] : elapsed;
    ++index;
    const auto line = trim(raw);
    if (line == "----------") {
      if (kind != ProblemKind::Decision && !block_objective) {
        error = true;
        rec.message = "solution without an objective line";
        break;
      }
      ++solutions;
      if (!first_solution_time) first_solution_time = t;
      rec.solution = block;
      rec.objective = block_objective;
      if (block_objective) rec.trace.push_back({t, *block_objective});
      block.clear();
      block_objective.reset();
    } else if (line == "==========") {
      complete = true;
    } else if (line == "=====UNSATISFIABLE=====") {
      unsat = true;
    } else if (line == "=====UNKNOWN=====") {
      unknown = true;
    } else if (line.size() > 10 && line.rfind("=====", 0) == 0) {
      error = true;  // ERROR, UNBOUNDED, UNSATorUNBOUNDED
      rec.message = "solver reported " + line;
    } else {
      if (auto obj = objective_line(line)) block_objective = obj;
      block += raw;
      block += '\n';
    }
  }

  auto fail = [&](std::string why) {
    SolverRecord e;
    e.status = SolverStatus::Error;
    e.time = elapsed;
    e.message = std::move(why);
    return e;
  };
  if (error) return fail(rec.message);
  if (unsat) {
    if (solutions > 0) return fail("solutions reported for an unsatisfiable instance");
    if (timed_out) return fail("unsatisfiability reported after the time limit");
    if (exit_code != 0) return fail("nonzero exit status " + std::to_string(exit_code));
    rec.status = SolverStatus::Unsat;
    rec.solution.reset();
    rec.objective.reset();
    return rec;
  }
  if (timed_out) {
    if (solutions > 0 && kind == ProblemKind::Decision) {
      rec.status = SolverStatus::Sat;
      rec.time = *first_solution_time;
    } else {
      rec.status = SolverStatus::Timeout;
    }
    return rec;
  }
  if (exit_code != 0) return fail("nonzero exit status " + std::to_string(exit_code));
  if (solutions > 0) {
    rec.status = SolverStatus::Sat;
    rec.optimal_claimed = complete && kind != ProblemKind::Decision;
    return rec;
  }
  if (unknown) {
    rec.status = SolverStatus::Timeout;
    return rec;
  }
  return fail("unparseable solver output");
}

// ---------------------------------------------------------------------------
// Solution checking

SolutionCheck check_solution(const ProblemModel& problem, const ValueMap& instance,
                             const std::string& payload, std::optional<std::int64_t> reported) {
  ValueMap sol;
  try {
    sol = parse_instance_text(payload);
  } catch (const ParseError& e) {
    throw CheckError(std::string("malformed solution: ") + e.what());
  }
  std::optional<std::int64_t> stated;
  if (sol.contains("objective")) stated = get_int(sol, "objective");
  if (!reported) reported = stated;

  SolutionCheck c;
  if (problem.checker == "none") {
    c.feasible = true;
    c.objective = reported;
    return c;
  }
  if (problem.checker != "knapsack") throw CheckError("unknown checker '" + problem.checker + "'");

  const auto k = Knapsack::from_values(instance);
  if (!sol.contains("take")) throw CheckError("solution lacks 'take'");
  const auto& take = get_array(sol, "take");
  if (take.size() != k.size()) throw CheckError("'take' has the wrong length");
  c.objective = k.objective(take);
  c.feasible = k.feasible(take);
  if (!c.feasible) {
    std::int64_t w = 0;
    for (std::size_t i = 0; i < k.size(); ++i) w += take[i] * k.weight[i];
    c.reason = w > k.capacity ? "capacity exceeded" : "item count out of range";
  }
  if ((reported && *reported != *c.objective) || (stated && *stated != *c.objective)) {
    c.objective_mismatch = true;
    if (c.reason.empty()) c.reason = "reported objective differs from recomputed";
  }
  return c;
}

// ---------------------------------------------------------------------------
// Running

namespace {

std::string substitute(std::string cmd, const std::map<std::string, std::string>& values) {
  for (const auto& [key, value] : values) {
    const std::string ph = "{" + key + "}";
    for (auto pos = cmd.find(ph); pos != std::string::npos; pos = cmd.find(ph, pos + value.size())) {
      cmd.replace(pos, ph.size(), value);
    }
  }
  return cmd;
}

std::string safe_name(const std::string& s) {
  std::string out;
  for (char c : s) out += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.') ? c : '_';
  return out;
}

fs::path scratch_dir() {
  static std::atomic<unsigned> counter{0};
  auto dir = fs::temp_directory_path() /
             ("instgen-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
  fs::create_directories(dir);
  return dir;
}

SolverRecord run_external(const SolverAdapter& adapter, const ExternalCommand& ext,
                          const ProblemModel& problem, const CandidateInstance& instance,
                          const RunOptions& options) {
  const bool temporary = options.work_dir.empty();
  const fs::path dir = temporary ? scratch_dir() : options.work_dir;
  fs::create_directories(dir);
  std::string stem = safe_name(instance.id) + "." + safe_name(adapter.name);
  if (!options.log_tag.empty()) stem += "." + safe_name(options.log_tag);

  ValueMap data;
  if (ext.include_parameters) {
    data = instance.values;
  } else {
    for (const auto& name : instance.decision_vars) {
      if (auto it = instance.values.find(name); it != instance.values.end()) data.insert(*it);
    }
  }
  const fs::path inst_path = dir / (stem + ".dzn");
  {
    std::ofstream f(inst_path);
    f << canonical_text(data);
  }

  const auto limit_ms = static_cast<long long>(options.time_limit * 1000.0);
  std::string cmd = substitute(ext.command, {{"model", shell_quote(problem.model_path.string())},
                                             {"instance", shell_quote(inst_path.string())},
                                             {"time_limit_ms", std::to_string(limit_ms)},
                                             {"seed", std::to_string(options.seed)}});
  if (!ext.limiter_prefix.empty()) cmd = ext.limiter_prefix + " " + cmd;

  ProcessResult pr;
  try {
    pr = run_process(cmd, options.time_limit, options.mem_limit, kKillGrace);
  } catch (const Error& e) {
    SolverRecord r;
    r.status = SolverStatus::Error;
    r.message = e.what();
    return r;
  }

  SolverRecord rec;
  if (pr.term_signal != 0 && !pr.timed_out) {
    rec.status = SolverStatus::Error;
    rec.time = pr.elapsed;
    rec.message = "killed by signal " + std::to_string(pr.term_signal);
  } else {
    rec = parse_solver_output(pr.out, pr.line_times, problem.kind, pr.timed_out,
                              pr.timed_out ? 0 : pr.exit_code, pr.elapsed);
  }
  if (rec.status == SolverStatus::Timeout) rec.time = std::max(rec.time, options.time_limit);

  {
    std::ofstream log(dir / (stem + ".log"));
    log << "# command: " << cmd << "\n# exit: " << pr.exit_code << " signal: " << pr.term_signal
        << " timed_out: " << pr.timed_out << " killed: " << pr.killed << " elapsed: " << pr.elapsed
        << "\n# status: " << to_string(rec.status) << (rec.message.empty() ? "" : " (" + rec.message + ")")
        << "\n# stdout\n" << pr.out << "\n# stderr\n" << pr.err;
  }
  if (temporary) {
    std::error_code ec;
    fs::remove_all(dir, ec);
  }
  return rec;
}

}  // namespace

SolverRecord run_solver(const SolverAdapter& adapter, const ProblemModel& problem,
                        const CandidateInstance& instance, const RunOptions& options) {
  SolverRecord rec;
  if (!(options.time_limit > 0)) {
    rec.status = SolverStatus::Timeout;
    rec.message = "no time budget";
    return rec;
  }
  try {
    validate_adapter(adapter);
    if (const auto* b = std::get_if<BuiltinSolver>(&adapter.mode)) {
      rec = run_builtin(*b, problem, instance, options);
    } else {
      rec = run_external(adapter, std::get<ExternalCommand>(adapter.mode), problem, instance, options);
    }
  } catch (const std::exception& e) {
    rec = SolverRecord{};
    rec.status = SolverStatus::Error;
    rec.message = e.what();
    return rec;
  }

  if (rec.status == SolverStatus::Unsat || rec.status == SolverStatus::Error) {
    rec.objective.reset();
    rec.solution.reset();
    rec.optimal_claimed = false;
  }
  if (problem.kind == ProblemKind::Decision || rec.status != SolverStatus::Sat || !rec.objective) {
    rec.optimal_claimed = false;
  }
  if (adapter.kind == SolverKind::LocalSearch) rec.optimal_claimed = false;

  if (rec.solution) {
    try {
      const auto c = check_solution(problem, instance.values, *rec.solution, rec.objective);
      if (c.feasible && !c.objective_mismatch) {
        rec.check = problem.checker == "none" ? CheckState::Unchecked : CheckState::Correct;
      } else {
        rec.check = CheckState::Incorrect;
        rec.message = c.reason;
      }
    } catch (const Error& e) {
      rec.check = CheckState::Incorrect;
      rec.message = e.what();
    }
  }
  return rec;
}

OracleResult oracle_optimum(const ProblemModel& problem, const CandidateInstance& instance,
                            const SolverAdapter& oracle, double budget, RunOptions options) {
  OracleResult res;
  if (!(budget > 0)) return res;
  options.time_limit = budget;
  if (options.log_tag.empty()) options.log_tag = "oracle";
  const auto r = run_solver(oracle, problem, instance, options);
  res.time = r.time;
  if (r.check == CheckState::Incorrect) return res;
  if (r.status == SolverStatus::Unsat) {
    res.proved = true;
    res.infeasible = true;
  } else if (r.status == SolverStatus::Sat && r.objective &&
             (r.optimal_claimed || problem.kind == ProblemKind::Decision)) {
    res.proved = true;
    res.optimum = r.objective;
  }
  return res;
}

std::optional<double> measure_time_to_best(std::span<const TracePoint> trace, std::int64_t optimum) {
  for (const auto& p : trace) {
    if (p.objective == optimum) return p.time;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Classification

TypeSet parse_types(const std::string& s) {
  TypeSet t{false, false};
  std::istringstream in(s);
  std::string tok;
  while (std::getline(in, tok, ',')) {
    tok = trim(tok);
    for (auto& c : tok) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (tok == "sat") {
      t.sat = true;
    } else if (tok == "unsat") {
      t.unsat = true;
    } else {
      throw ValidationError("unknown instance type '" + tok + "'");
    }
  }
  if (!t.sat && !t.unsat) throw ValidationError("empty instance type set");
  return t;
}

std::string to_string(const TypeSet& t) {
  if (t.sat && t.unsat) return "sat,unsat";
  return t.sat ? "sat" : "unsat";
}

std::optional<InstanceType> instance_type(const SolverRecord& r) {
  if (r.status == SolverStatus::Sat) return InstanceType::Sat;
  if (r.status == SolverStatus::Unsat) return InstanceType::Unsat;
  if (r.status == SolverStatus::Timeout && r.solution) return InstanceType::Sat;
  return std::nullopt;
}

const char* to_string(RunStatus s) {
  switch (s) {
    case RunStatus::GeneratorUnsolved: return "generator-unsolved";
    case RunStatus::Graded: return "graded";
    case RunStatus::TooDifficult: return "too-difficult";
    case RunStatus::TooEasySat: return "too-easy-SAT";
    case RunStatus::TooEasyUnsat: return "too-easy-UNSAT";
    case RunStatus::Others: return "others";
    case RunStatus::DisFound: return "dis-found";
    case RunStatus::WrongType: return "wrong-type";
    case RunStatus::BaseTooEasy: return "base-too-easy";
    case RunStatus::FavouredTimeout: return "favoured-timeout";
    case RunStatus::ZeroScores: return "zero-scores";
    case RunStatus::FavouredLost: return "favoured-lost";
  }
  return "others";
}

RunStatus run_status_from_string(const std::string& s) {
  for (int i = 0; i <= static_cast<int>(RunStatus::FavouredLost); ++i) {
    const auto st = static_cast<RunStatus>(i);
    if (s == to_string(st)) return st;
  }
  throw ParseError("unknown run status '" + s + "'");
}

const std::vector<RunStatus>& graded_statuses() {
  static const std::vector<RunStatus> v = {RunStatus::GeneratorUnsolved, RunStatus::Graded,
                                           RunStatus::TooDifficult,      RunStatus::TooEasySat,
                                           RunStatus::TooEasyUnsat,      RunStatus::Others};
  return v;
}

const std::vector<RunStatus>& discriminating_statuses() {
  static const std::vector<RunStatus> v = {
      RunStatus::GeneratorUnsolved, RunStatus::DisFound,   RunStatus::WrongType,
      RunStatus::BaseTooEasy,       RunStatus::FavouredTimeout, RunStatus::ZeroScores,
      RunStatus::FavouredLost,      RunStatus::Others};
  return v;
}

namespace {

bool failed(const SolverRecord& r) {
  return r.status == SolverStatus::Error || r.check == CheckState::Incorrect;
}

}  // namespace

RunStatus classify_run(GeneratorOutcome generator, const SolverRecord* record,
                       const GradedThresholds& th) {
  if (generator != GeneratorOutcome::Solution) return RunStatus::GeneratorUnsolved;
  if (!record || failed(*record)) return RunStatus::Others;
  if (record->status == SolverStatus::Timeout || record->time >= th.t_max) return RunStatus::TooDifficult;
  if (th.kind != ProblemKind::Decision && record->status == SolverStatus::Sat && !record->optimal_claimed) {
    return RunStatus::TooDifficult;
  }
  const auto type = instance_type(*record);
  if (!type) return RunStatus::Others;
  if (record->time < th.t_min) {
    return *type == InstanceType::Sat ? RunStatus::TooEasySat : RunStatus::TooEasyUnsat;
  }
  if (!th.types.contains(*type)) return RunStatus::Others;
  return RunStatus::Graded;
}

RunStatus classify_run(GeneratorOutcome generator, const SolverRecord* favoured,
                       const SolverRecord* base, const DiscriminatingThresholds& th) {
  if (generator != GeneratorOutcome::Solution) return RunStatus::GeneratorUnsolved;
  if (!favoured || !base || failed(*favoured) || failed(*base)) return RunStatus::Others;
  if (favoured->status == SolverStatus::Timeout) return RunStatus::FavouredTimeout;
  const auto type = instance_type(*favoured);
  if (!type || !th.types.contains(*type)) return RunStatus::WrongType;
  if (base->status != SolverStatus::Timeout && base->time < th.t_min) return RunStatus::BaseTooEasy;
  const auto s = minizinc_score(to_comparable(*favoured, th.kind), to_comparable(*base, th.kind));
  if (s.a == 0.0 && s.b == 0.0) return RunStatus::ZeroScores;
  if (s.a == 0.0) return RunStatus::FavouredLost;
  return RunStatus::DisFound;
}

ComparableRecord to_comparable(const SolverRecord& r, ProblemKind kind) {
  ComparableRecord c;
  c.kind = kind;
  c.time = r.time;
  if (r.check == CheckState::Incorrect) return c;
  if (r.status == SolverStatus::Sat || r.status == SolverStatus::Unsat) {
    c.solved = true;
  } else if (r.status == SolverStatus::Timeout && kind != ProblemKind::Decision && r.solution &&
             r.objective) {
    c.solved = true;
  }
  if (c.solved && r.status != SolverStatus::Unsat) {
    c.quality = r.objective;
    c.optimal = r.optimal_claimed && r.status == SolverStatus::Sat;
  }
  return c;
}

}  // namespace instgen
