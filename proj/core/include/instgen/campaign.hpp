#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "instgen/evaluate.hpp"
#include "instgen/tuner.hpp"

namespace instgen {

enum class CampaignKind { Graded, Discriminating };

const char* to_string(CampaignKind k);

/// Contents of `config.json` in a campaign directory.
///
///     {
///       "kind": "graded",
///       "problem": {"name": "knapsack", "kind": "maximise", "checker": "knapsack", "model": ""},
///       "solvers": {
///         "bnb":  {"kind": "complete", "builtin": "knapsack-bnb", "options": {"node_cost": "0.001"}},
///         "ext":  {"kind": "complete", "command": "solve {model} {instance} {time_limit_ms}",
///                  "limiter": "", "include_parameters": false}
///       },
///       "solver": "bnb", "oracle": "", "oracle_budget": 0,
///       "favoured": "", "base": "",
///       "t_min": 10, "t_max": 1200, "types": "sat,unsat",
///       "translate_limit": 300, "generator_limit": 600,
///       "mem_limit": 8589934592, "seed": 0, "workers": 1,
///       "tuner": {"budget": 2000, "first_race_size": 0, "min_survivors": 2, "alpha": 0.05,
///                 "instances_per_step": 1, "first_test_after": 5, "race_budget": 0}
///     }
///
/// Missing keys take the defaults shown.
struct CampaignConfig {
  CampaignKind kind = CampaignKind::Graded;
  ProblemModel problem;
  std::map<std::string, SolverAdapter> solvers;
  std::string solver;
  std::string oracle;
  double oracle_budget = 0.0;
  std::string favoured;
  std::string base;
  double t_min = 10.0;
  double t_max = 1200.0;
  TypeSet types;
  double translate_limit = 300.0;
  double generator_limit = 600.0;
  std::uint64_t mem_limit = 8ULL << 30;
  std::uint64_t seed = 0;
  std::size_t workers = 1;
  TunerConfig tuner;

  const SolverAdapter& adapter(const std::string& name) const;
  /// Validates and builds the evaluation policy.
  Policy policy() const;
  EvaluationLimits limits(const std::filesystem::path& dir) const;
};

CampaignConfig campaign_config_from_json(const std::string& text);
std::string to_json(const CampaignConfig& c);
std::map<std::string, SolverAdapter> solvers_from_json(const std::string& text);

/// Campaign directory layout.
struct CampaignPaths {
  std::filesystem::path root;
  std::filesystem::path config() const { return root / "config.json"; }
  std::filesystem::path model() const { return root / "generator.model"; }
  std::filesystem::path instances() const { return root / "instances"; }
  std::filesystem::path records() const { return root / "records"; }
  std::filesystem::path log() const { return root / "tuner.log"; }
  std::filesystem::path reports() const { return root / "reports"; }
};

std::string read_file(const std::filesystem::path& p);
void write_file(const std::filesystem::path& p, const std::string& text);

/// Runs (or resumes) the campaign in `dir`, which must hold config.json
/// and generator.model. Logged evaluations are replayed and the solution
/// history is rebuilt from the archive, so an interrupted campaign
/// continues where it stopped.
TunerReport run_campaign(const std::filesystem::path& dir, const std::atomic<bool>* abort = nullptr);

/// Loaded campaign directory.
struct CampaignArchive {
  std::filesystem::path root;
  CampaignConfig config;
  std::vector<LogEntry> log;
  std::map<std::string, EvaluationRecord> records;  // by instance id
  std::vector<std::string> instance_ids;            // sorted

  CandidateInstance instance(const std::string& id) const;
};

/// Throws MissingRecord when a record references an absent instance.
CampaignArchive load_campaign(const std::filesystem::path& dir);

}  // namespace instgen
