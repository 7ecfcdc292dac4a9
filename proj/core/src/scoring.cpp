#include "instgen/scoring.hpp"

#include <algorithm>
#include <sstream>

#include <json.hpp>

#include "instgen/csv.hpp"
#include "instgen/errors.hpp"

namespace instgen {

const char* to_string(ProblemKind k) {
  switch (k) {
    case ProblemKind::Decision: return "decision";
    case ProblemKind::Minimise: return "minimise";
    case ProblemKind::Maximise: return "maximise";
  }
  return "?";
}

ProblemKind problem_kind_from_string(const std::string& s) {
  if (s == "decision" || s == "satisfy") return ProblemKind::Decision;
  if (s == "minimise" || s == "minimize") return ProblemKind::Minimise;
  if (s == "maximise" || s == "maximize") return ProblemKind::Maximise;
  throw ParseError("unknown problem kind '" + s + "'");
}

namespace {

bool quality_better(const ComparableRecord& a, const ComparableRecord& b) {
  if (!a.quality || !b.quality) return false;
  return a.kind == ProblemKind::Minimise ? *a.quality < *b.quality : *a.quality > *b.quality;
}

}  // namespace

bool is_better(const ComparableRecord& a, const ComparableRecord& b) {
  const bool solved_only_a = a.solved && !b.solved;
  if (a.kind == ProblemKind::Decision) return solved_only_a;
  return solved_only_a || (a.optimal && !b.optimal) || quality_better(a, b);
}

PairScore minizinc_score(const ComparableRecord& a, const ComparableRecord& b) {
  if (is_better(a, b)) return {1.0, 0.0};
  if (is_better(b, a)) return {0.0, 1.0};
  if (a.solved && b.solved) {
    const double total = a.time + b.time;
    if (total <= 0.0) return {0.5, 0.5};
    return {b.time / total, a.time / total};
  }
  return {0.0, 0.0};
}

std::vector<std::string> BordaTable::ranking() const {
  std::vector<std::string> out = solvers;
  std::stable_sort(out.begin(), out.end(), [&](const std::string& x, const std::string& y) {
    const double tx = totals.at(x);
    const double ty = totals.at(y);
    if (tx != ty) return tx > ty;
    return x < y;
  });
  return out;
}

BordaTable borda_complete(const std::map<RecordKey, ComparableRecord>& records,
                          const std::vector<std::string>& solvers,
                          const std::vector<std::string>& instances,
                          const std::map<std::string, std::string>& problem_of) {
  BordaTable table;
  table.solvers = solvers;
  for (const auto& s : solvers) table.totals[s] = 0.0;
  auto fetch = [&](const std::string& s, const std::string& i) -> const ComparableRecord& {
    auto it = records.find({s, i});
    if (it == records.end()) throw MissingRecord("no record for solver '" + s + "' on instance '" + i + "'");
    return it->second;
  };
  for (const auto& inst : instances) {
    auto pit = problem_of.find(inst);
    const std::string problem = pit == problem_of.end() ? "" : pit->second;
    for (const auto& s : solvers) {
      auto& cell = table.cells[s][inst];
      for (const auto& t : solvers) {
        if (s == t) continue;
        const double score = minizinc_score(fetch(s, inst), fetch(t, inst)).a;
        cell += score;
        table.totals[s] += score;
        table.per_problem[s][problem] += score;
        table.entries.push_back({s, inst, t, score});
      }
    }
  }
  return table;
}

std::string borda_to_csv(const BordaTable& table) {
  CsvWriter w({"solver", "instance", "opponent", "score"});
  for (const auto& e : table.entries) w.row({e.solver, e.instance, e.opponent, format_double(e.score)});
  return w.str();
}

std::vector<PairEntry> borda_entries_from_csv(const std::string& csv) {
  std::vector<PairEntry> out;
  for (const auto& row : read_csv(csv, {"solver", "instance", "opponent", "score"})) {
    out.push_back({row.at(0), row.at(1), row.at(2), parse_double(row.at(3))});
  }
  return out;
}

std::string borda_summary_json(const BordaTable& table) {
  nlohmann::json j;
  j["solvers"] = table.solvers;
  j["totals"] = table.totals;
  j["per_problem"] = table.per_problem;
  j["ranking"] = table.ranking();
  j["cells"] = table.cells;
  return j.dump(2);
}

BordaTable borda_from_json(const std::string& text) {
  auto j = nlohmann::json::parse(text);
  BordaTable t;
  t.solvers = j.at("solvers").get<std::vector<std::string>>();
  t.totals = j.at("totals").get<std::map<std::string, double>>();
  t.per_problem = j.at("per_problem").get<std::map<std::string, std::map<std::string, double>>>();
  t.cells = j.at("cells").get<std::map<std::string, std::map<std::string, double>>>();
  return t;
}

}  // namespace instgen
