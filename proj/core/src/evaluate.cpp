#include "instgen/evaluate.hpp"

#include <fstream>

#include <json.hpp>

#include "instgen/errors.hpp"

namespace instgen {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void validate_band(double t_min, double t_max, const TypeSet& types) {
  if (!(t_min > 0) || !(t_min < t_max)) throw ValidationError("time band needs 0 < t_min < t_max");
  if (!types.sat && !types.unsat) throw ValidationError("empty instance type set");
}

json penalty_json(Penalty p) {
  if (std::isinf(p)) return p > 0 ? "inf" : "-inf";
  return p;
}

Penalty penalty_from(const json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return kPlusInfinity;
    if (s == "-inf") return -kPlusInfinity;
    throw ParseError("bad penalty '" + s + "'");
  }
  return j.get<double>();
}

const char* check_name(CheckState c) {
  switch (c) {
    case CheckState::Unchecked: return "unchecked";
    case CheckState::Correct: return "correct";
    case CheckState::Incorrect: return "incorrect";
  }
  return "unchecked";
}

CheckState check_from(const std::string& s) {
  if (s == "unchecked") return CheckState::Unchecked;
  if (s == "correct") return CheckState::Correct;
  if (s == "incorrect") return CheckState::Incorrect;
  throw ParseError("bad check state '" + s + "'");
}

json record_json(const SolverRecord& r) {
  json j;
  j["status"] = to_string(r.status);
  j["time"] = r.time;
  j["objective"] = r.objective ? json(*r.objective) : json(nullptr);
  j["optimal_claimed"] = r.optimal_claimed;
  j["solution"] = r.solution ? json(*r.solution) : json(nullptr);
  j["time_to_best"] = r.time_to_best ? json(*r.time_to_best) : json(nullptr);
  j["trace"] = json::array();
  for (const auto& p : r.trace) j["trace"].push_back({p.time, p.objective});
  j["check"] = check_name(r.check);
  j["message"] = r.message;
  return j;
}

SolverRecord record_from(const json& j) {
  SolverRecord r;
  r.status = solver_status_from_string(j.at("status").get<std::string>());
  r.time = j.at("time").get<double>();
  if (!j.at("objective").is_null()) r.objective = j["objective"].get<std::int64_t>();
  r.optimal_claimed = j.at("optimal_claimed").get<bool>();
  if (!j.at("solution").is_null()) r.solution = j["solution"].get<std::string>();
  if (!j.at("time_to_best").is_null()) r.time_to_best = j["time_to_best"].get<double>();
  for (const auto& p : j.at("trace")) r.trace.push_back({p.at(0).get<double>(), p.at(1).get<std::int64_t>()});
  r.check = check_from(j.at("check").get<std::string>());
  r.message = j.at("message").get<std::string>();
  return r;
}

json evaluation_json(const EvaluationRecord& r) {
  json j;
  j["config_id"] = r.config_id;
  j["instance_id"] = r.instance_id;
  j["generator"] = to_string(r.generator);
  j["generator_time"] = r.generator_time;
  j["penalty"] = penalty_json(r.penalty);
  j["status"] = to_string(r.status);
  j["records"] = json::object();
  for (const auto& [role, rec] : r.records) j["records"][role] = record_json(rec);
  j["effective"] = r.effective ? record_json(*r.effective) : json(nullptr);
  if (r.oracle) {
    j["oracle"] = {{"optimum", r.oracle->optimum ? json(*r.oracle->optimum) : json(nullptr)},
                   {"proved", r.oracle->proved},
                   {"infeasible", r.oracle->infeasible},
                   {"time", r.oracle->time}};
  } else {
    j["oracle"] = nullptr;
  }
  j["scores"] = r.scores ? json{{"favoured", r.scores->a}, {"base", r.scores->b}} : json(nullptr);
  j["message"] = r.message;
  return j;
}

}  // namespace

void GradedPolicy::validate() const {
  validate_adapter(solver);
  validate_band(t_min, t_max, types);
  if (oracle) {
    validate_adapter(*oracle);
    if (oracle->kind != SolverKind::Complete) throw ValidationError("the oracle must be a complete solver");
  }
  if (oracle_budget < 0) throw ValidationError("negative oracle budget");
}

void DiscriminatingPolicy::validate() const {
  validate_adapter(favoured);
  validate_adapter(base);
  if (favoured.name == base.name) throw ValidationError("favoured and base solver must differ");
  validate_band(t_min, t_max, types);
}

std::string to_json(const SolverRecord& r) { return record_json(r).dump(); }

SolverRecord solver_record_from_json(const std::string& text) {
  try {
    return record_from(json::parse(text));
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad solver record: ") + e.what());
  }
}

std::string to_json(const EvaluationRecord& r) { return evaluation_json(r).dump(); }

EvaluationRecord evaluation_from_json(const std::string& text) {
  try {
    const auto j = json::parse(text);
    EvaluationRecord r;
    r.config_id = j.at("config_id").get<std::string>();
    r.instance_id = j.at("instance_id").get<std::string>();
    r.generator = generator_outcome_from_string(j.at("generator").get<std::string>());
    r.generator_time = j.at("generator_time").get<double>();
    r.penalty = penalty_from(j.at("penalty"));
    r.status = run_status_from_string(j.at("status").get<std::string>());
    for (const auto& [role, rec] : j.at("records").items()) r.records[role] = record_from(rec);
    if (!j.at("effective").is_null()) r.effective = record_from(j["effective"]);
    if (const auto& o = j.at("oracle"); !o.is_null()) {
      OracleResult res;
      if (!o.at("optimum").is_null()) res.optimum = o["optimum"].get<std::int64_t>();
      res.proved = o.at("proved").get<bool>();
      res.infeasible = o.at("infeasible").get<bool>();
      res.time = o.at("time").get<double>();
      r.oracle = res;
    }
    if (const auto& s = j.at("scores"); !s.is_null()) {
      r.scores = PairScore{s.at("favoured").get<double>(), s.at("base").get<double>()};
    }
    r.message = j.at("message").get<std::string>();
    return r;
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad evaluation record: ") + e.what());
  }
}

Penalty graded_penalty(const SolverRecord& record, const GradedPolicy& policy, ProblemKind kind) {
  return classify_run(GeneratorOutcome::Solution, &record, policy.thresholds(kind)) == RunStatus::Graded ? -1.0
                                                                                                       : 0.0;
}

SolverRecord effective_local_search_record(const SolverRecord& record, const OracleResult& oracle,
                                           ProblemKind kind, double t_max) {
  if (kind == ProblemKind::Decision || record.status == SolverStatus::Error ||
      record.check == CheckState::Incorrect) {
    return record;
  }
  SolverRecord eff = record;
  std::optional<double> ttb;
  if (oracle.proved && oracle.optimum) ttb = measure_time_to_best(record.trace, *oracle.optimum);
  if (!ttb || *ttb >= t_max) {
    eff.status = SolverStatus::Timeout;
    eff.time = std::max(record.time, t_max);
    eff.optimal_claimed = false;
    eff.time_to_best.reset();
    return eff;
  }
  eff.status = SolverStatus::Sat;
  eff.time = *ttb;
  eff.time_to_best = ttb;
  eff.objective = oracle.optimum;
  eff.optimal_claimed = true;
  return eff;
}

DiscriminatingVerdict judge_discriminating(const SolverRecord& favoured, const SolverRecord& base,
                                           const DiscriminatingPolicy& policy, ProblemKind kind) {
  DiscriminatingVerdict v;
  const DiscriminatingThresholds th{policy.t_min, policy.t_max, policy.types, kind};
  v.status = classify_run(GeneratorOutcome::Solution, &favoured, &base, th);
  if (v.status == RunStatus::ZeroScores || v.status == RunStatus::FavouredLost ||
      v.status == RunStatus::DisFound) {
    v.scores = minizinc_score(to_comparable(favoured, kind), to_comparable(base, kind));
  }
  if (v.status == RunStatus::DisFound) {
    v.penalty = v.scores->b == 0.0 ? kLargeNegative : -v.scores->a / v.scores->b;
  }
  return v;
}

Penalty discriminating_penalty(const SolverRecord& favoured, const SolverRecord& base,
                               const DiscriminatingPolicy& policy, ProblemKind kind) {
  return judge_discriminating(favoured, base, policy, kind).penalty;
}

std::uint64_t run_seed(std::uint64_t campaign_seed, const std::string& instance_id) {
  std::uint64_t h = 0xcbf29ce484222325ULL ^ campaign_seed;
  for (unsigned char c : instance_id) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  h ^= h >> 33;
  h *= 0xff51afd7ed558ccdULL;
  h ^= h >> 33;
  return h;
}

EvaluationResult evaluate_configuration(const GeneratorModel& model, const GeneratorConfiguration& config,
                                        SolutionHistory& history, const Policy& policy,
                                        const ProblemModel& problem, const EvaluationLimits& limits) {
  EvaluationResult out;
  auto& rec = out.record;
  rec.config_id = config.id;

  GeneratorSolveResult gen;
  {
    auto guard = history.lock(config.id);
    try {
      gen = solve_generator(model, config, history, limits.translate_limit, limits.generator_limit);
    } catch (const Error& e) {
      gen.outcome = GeneratorOutcome::Unsat;
      rec.message = e.what();
    }
    if (gen.instance) record_solution(history, config.id, *gen.instance);
  }
  rec.generator = gen.outcome;
  rec.generator_time = gen.elapsed;
  if (gen.outcome != GeneratorOutcome::Solution || !gen.instance) {
    rec.status = RunStatus::GeneratorUnsolved;
    rec.penalty = gen.outcome == GeneratorOutcome::SolveTimeout ? 1.0 : kPlusInfinity;
    out.penalty = rec.penalty;
    out.status = rec.status;
    return out;
  }
  const CandidateInstance& inst = *gen.instance;
  rec.instance_id = inst.id;

  RunOptions run;
  run.mem_limit = limits.mem_limit;
  run.seed = run_seed(limits.seed, inst.id);
  if (!limits.archive_dir.empty()) run.work_dir = limits.archive_dir / "records" / "logs";

  if (const auto* g = std::get_if<GradedPolicy>(&policy)) {
    run.time_limit = g->t_max;
    auto r = run_solver(g->solver, problem, inst, run);
    SolverRecord eff = r;
    if (g->solver.kind == SolverKind::LocalSearch && problem.kind != ProblemKind::Decision &&
        r.status != SolverStatus::Error && r.check != CheckState::Incorrect) {
      OracleResult orc;
      if (g->oracle) {
        const double budget = g->oracle_budget > 0 ? g->oracle_budget : 3.0 * g->t_max;
        orc = oracle_optimum(problem, inst, *g->oracle, budget, run);
      }
      eff = effective_local_search_record(r, orc, problem.kind, g->t_max);
      r.time_to_best = eff.time_to_best;
      rec.oracle = orc;
      rec.effective = eff;
    }
    rec.status = classify_run(GeneratorOutcome::Solution, &eff, g->thresholds(problem.kind));
    rec.penalty = rec.status == RunStatus::Graded ? -1.0 : 0.0;
    rec.records["solver"] = std::move(r);
  } else {
    const auto& d = std::get<DiscriminatingPolicy>(policy);
    run.time_limit = d.t_max;
    // Sequential so the paired measurements do not compete for CPU.
    auto rf = run_solver(d.favoured, problem, inst, run);
    auto rb = run_solver(d.base, problem, inst, run);
    const auto v = judge_discriminating(rf, rb, d, problem.kind);
    rec.status = v.status;
    rec.penalty = v.penalty;
    rec.scores = v.scores;
    rec.records["favoured"] = std::move(rf);
    rec.records["base"] = std::move(rb);
  }

  if (!limits.archive_dir.empty()) {
    try {
      const auto body = to_json(rec);
      write_instance(limits.archive_dir / "instances", inst, body);
      fs::create_directories(limits.archive_dir / "records");
      std::ofstream f(limits.archive_dir / "records" / (inst.id + ".json"), std::ios::binary);
      f << body << '\n';
    } catch (const std::exception& e) {
      rec.message = std::string("archiving failed: ") + e.what();
    }
  }
  out.penalty = rec.penalty;
  out.status = rec.status;
  out.instance = inst;
  return out;
}

}  // namespace instgen
