#include "instgen/gensolve.hpp"

#include <chrono>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "instgen/errors.hpp"
#include "instgen/ground.hpp"

namespace instgen {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

bool SolutionHistory::record(const std::string& config_id, const CandidateInstance& instance) {
  return record_key(config_id, instance.decision_key());
}

bool SolutionHistory::record_key(const std::string& config_id, const std::string& key) {
  std::lock_guard guard(mutex_);
  return table_[config_id].insert(key).second;
}

std::vector<std::string> SolutionHistory::keys(const std::string& config_id) const {
  std::lock_guard guard(mutex_);
  auto it = table_.find(config_id);
  if (it == table_.end()) return {};
  return {it->second.begin(), it->second.end()};
}

std::size_t SolutionHistory::size(const std::string& config_id) const {
  std::lock_guard guard(mutex_);
  auto it = table_.find(config_id);
  return it == table_.end() ? 0 : it->second.size();
}

std::size_t SolutionHistory::total() const {
  std::lock_guard guard(mutex_);
  std::size_t n = 0;
  for (const auto& [k, v] : table_) n += v.size();
  return n;
}

std::vector<std::string> SolutionHistory::config_ids() const {
  std::lock_guard guard(mutex_);
  std::vector<std::string> out;
  for (const auto& [k, v] : table_) out.push_back(k);
  return out;
}

std::unique_lock<std::mutex> SolutionHistory::lock(const std::string& config_id) {
  std::mutex* m = nullptr;
  {
    std::lock_guard guard(mutex_);
    auto& slot = config_locks_[config_id];
    if (!slot) slot = std::make_unique<std::mutex>();
    m = slot.get();
  }
  return std::unique_lock(*m);
}

std::unique_ptr<SolutionHistory> SolutionHistory::load_archive(const fs::path& instances_dir) {
  auto history = std::make_unique<SolutionHistory>();
  if (!fs::exists(instances_dir)) return history;
  for (const auto& entry : fs::directory_iterator(instances_dir)) {
    if (entry.path().extension() != ".inst") continue;
    auto inst = read_instance(instances_dir, entry.path().stem().string());
    history->record(inst.provenance.config_id, inst);
  }
  return history;
}

void record_solution(SolutionHistory& history, const std::string& config_id,
                     const CandidateInstance& instance) {
  history.record(config_id, instance);
}

const char* to_string(GeneratorOutcome o) {
  switch (o) {
    case GeneratorOutcome::Solution: return "solution";
    case GeneratorOutcome::Unsat: return "unsat";
    case GeneratorOutcome::TranslateTimeout: return "translate-timeout";
    case GeneratorOutcome::SolveTimeout: return "solve-timeout";
  }
  return "?";
}

GeneratorOutcome generator_outcome_from_string(const std::string& s) {
  for (auto o : {GeneratorOutcome::Solution, GeneratorOutcome::Unsat,
                 GeneratorOutcome::TranslateTimeout, GeneratorOutcome::SolveTimeout}) {
    if (s == to_string(o)) return o;
  }
  throw ParseError("unknown generator outcome '" + s + "'");
}

namespace {

Clock::time_point deadline_after(Clock::time_point start, double seconds) {
  if (seconds <= 0) return start;
  return start + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(seconds));
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

GeneratorSolveResult solve_generator(const GeneratorModel& model,
                                     const GeneratorConfiguration& config,
                                     const SolutionHistory& history, double translate_limit,
                                     double solve_limit) {
  if (!belongs_to(config, model.space())) {
    throw ModelError("configuration '" + config.id + "' does not belong to the model's space");
  }
  const auto start = Clock::now();
  GeneratorSolveResult result;

  std::optional<GroundedModel> grounded;
  ExclusionTable exclusions;
  try {
    grounded.emplace(ground(model, config, deadline_after(start, translate_limit)));
    // The negative table is part of the flattened model.
    for (const auto& key : history.keys(config.id)) {
      try {
        exclusions.insert(grounded->encode(parse_instance_text(key)));
      } catch (const ModelError&) {
      } catch (const std::bad_variant_access&) {
      }
      if (Clock::now() >= deadline_after(start, translate_limit)) throw GroundingTimeout{};
    }
  } catch (const GroundingTimeout&) {
    result.outcome = GeneratorOutcome::TranslateTimeout;
    result.elapsed = seconds_since(start);
    return result;
  }

  const auto search = backtrack_solve(grounded->csp, exclusions, deadline_after(Clock::now(), solve_limit));
  result.elapsed = seconds_since(start);
  switch (search.status) {
    case SearchStatus::Timeout:
      result.outcome = GeneratorOutcome::SolveTimeout;
      return result;
    case SearchStatus::Unsat:
      result.outcome = GeneratorOutcome::Unsat;
      return result;
    case SearchStatus::Solution:
      break;
  }
  CandidateInstance inst;
  inst.values = grounded->decode(search.assignment);
  for (const auto& lay : grounded->layout) inst.decision_vars.push_back(lay.name);
  for (const auto& [name, v] : grounded->parameters) inst.values.emplace(name, v);
  inst.provenance = {config.id, history.size(config.id) + 1};
  inst.id = config.id + "-" + std::to_string(inst.provenance.sequence);
  result.outcome = GeneratorOutcome::Solution;
  result.instance = std::move(inst);
  return result;
}

void write_instance(const fs::path& dir, const CandidateInstance& instance, const std::string& extra_json) {
  fs::create_directories(dir);
  {
    std::ofstream out(dir / (instance.id + ".inst"), std::ios::binary);
    out << instance.canonical();
  }
  nlohmann::json side;
  side["id"] = instance.id;
  side["config_id"] = instance.provenance.config_id;
  side["sequence"] = instance.provenance.sequence;
  side["decision_vars"] = instance.decision_vars;
  side["evaluation"] = nlohmann::json::parse(extra_json);
  std::ofstream out(dir / (instance.id + ".json"), std::ios::binary);
  out << side.dump(2) << '\n';
}

CandidateInstance read_instance(const fs::path& dir, const std::string& id) {
  CandidateInstance inst;
  inst.id = id;
  std::ifstream body(dir / (id + ".inst"), std::ios::binary);
  if (!body) throw ParseError("missing instance file for '" + id + "'");
  std::stringstream ss;
  ss << body.rdbuf();
  inst.values = parse_instance_text(ss.str());
  std::ifstream side_in(dir / (id + ".json"));
  if (side_in) {
    auto side = nlohmann::json::parse(side_in);
    inst.provenance.config_id = side.value("config_id", "");
    inst.provenance.sequence = side.value("sequence", std::size_t{0});
    inst.decision_vars = side.value("decision_vars", std::vector<std::string>{});
  }
  return inst;
}

}  // namespace instgen
