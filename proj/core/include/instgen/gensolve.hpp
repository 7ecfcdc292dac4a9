#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "instgen/instance.hpp"
#include "instgen/model.hpp"
#include "instgen/space.hpp"

namespace instgen {

/// Per-configuration negative table: canonical decision-variable encodings
/// of every instance already generated. Append-only.
///
/// Thread-safe. `lock(config_id)` serialises whole solve+record cycles for
/// one configuration; different configurations proceed independently.
class SolutionHistory {
 public:
  SolutionHistory() = default;
  SolutionHistory(const SolutionHistory&) = delete;
  SolutionHistory& operator=(const SolutionHistory&) = delete;

  /// Returns false when the instance was already present.
  bool record(const std::string& config_id, const CandidateInstance& instance);
  bool record_key(const std::string& config_id, const std::string& key);

  std::vector<std::string> keys(const std::string& config_id) const;
  std::size_t size(const std::string& config_id) const;
  std::size_t total() const;
  std::vector<std::string> config_ids() const;

  std::unique_lock<std::mutex> lock(const std::string& config_id);

  /// Rebuilds from an instance archive directory (`*.inst` + `*.json`
  /// sidecars written by write_instance).
  static std::unique_ptr<SolutionHistory> load_archive(const std::filesystem::path& instances_dir);

 private:
  mutable std::mutex mutex_;
  std::map<std::string, std::set<std::string>> table_;
  std::map<std::string, std::unique_ptr<std::mutex>> config_locks_;
};

/// Adds the instance to the history of `config_id`; idempotent.
void record_solution(SolutionHistory& history, const std::string& config_id,
                     const CandidateInstance& instance);

enum class GeneratorOutcome { Solution, Unsat, TranslateTimeout, SolveTimeout };

const char* to_string(GeneratorOutcome o);
GeneratorOutcome generator_outcome_from_string(const std::string& s);

struct GeneratorSolveResult {
  GeneratorOutcome outcome = GeneratorOutcome::Unsat;
  std::optional<CandidateInstance> instance;
  double elapsed = 0.0;  // seconds
};

/// Instantiates and flattens the model for `config` within
/// `translate_limit`, then searches within `solve_limit` for a solution not
/// in the configuration's history. The returned instance id is
/// `<config id>-<history size + 1>`. Throws ModelError for ill-defined shapes.
GeneratorSolveResult solve_generator(const GeneratorModel& model,
                                     const GeneratorConfiguration& config,
                                     const SolutionHistory& history, double translate_limit,
                                     double solve_limit);

/// Writes `<dir>/<id>.inst` and a JSON sidecar `<dir>/<id>.json` holding
/// provenance and `extra` (evaluation results).
void write_instance(const std::filesystem::path& dir, const CandidateInstance& instance,
                    const std::string& extra_json = "{}");

/// Reads an archived instance (body + sidecar provenance).
CandidateInstance read_instance(const std::filesystem::path& dir, const std::string& id);

}  // namespace instgen
