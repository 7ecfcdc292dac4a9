#include "support.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace testsupport {

namespace fs = std::filesystem;
using namespace instgen;

TempDir::TempDir() {
  std::string tmpl = (fs::temp_directory_path() / "instgen-test-XXXXXX").string();
  if (!::mkdtemp(tmpl.data())) throw std::runtime_error("mkdtemp failed");
  path_ = tmpl;
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

ValueMap knapsack_values(const std::vector<std::int64_t>& weight, const std::vector<std::int64_t>& value,
                         std::int64_t capacity, const std::vector<std::int64_t>& count) {
  ValueMap v;
  v["weight"] = IntArray(weight);
  v["value"] = IntArray(value);
  v["capacity"] = capacity;
  if (!count.empty()) v["count"] = IntArray(count);
  return v;
}

CandidateInstance make_instance(const std::string& id, ValueMap values) {
  CandidateInstance c;
  c.id = id;
  for (const auto& [name, _] : values) c.decision_vars.push_back(name);
  c.values = std::move(values);
  c.provenance = {"t", 1};
  return c;
}

ValueMap random_knapsack(Rng& rng, int n) {
  std::vector<std::int64_t> w, v, c;
  std::int64_t total = 0;
  for (int i = 0; i < n; ++i) {
    w.push_back(rng.uniform_int(1, 30));
    v.push_back(rng.uniform_int(1, 60));
    c.push_back(rng.uniform_int(1, 2));
    total += w.back() * c.back();
  }
  return knapsack_values(w, v, rng.uniform_int(total / 4, total / 2), c);
}

std::optional<std::int64_t> brute_force_optimum(const ValueMap& values) {
  const auto& w = std::get<IntArray>(values.at("weight"));
  const auto& v = std::get<IntArray>(values.at("value"));
  const auto cap = std::get<std::int64_t>(values.at("capacity"));
  IntArray cnt(w.size(), 1);
  if (auto it = values.find("count"); it != values.end()) cnt = std::get<IntArray>(it->second);
  if (cap < 0) return std::nullopt;

  std::vector<std::int64_t> take(w.size(), 0);
  std::int64_t best = 0;
  while (true) {
    std::int64_t tw = 0, tv = 0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      tw += take[i] * w[i];
      tv += take[i] * v[i];
    }
    if (tw <= cap && tv > best) best = tv;
    std::size_t i = 0;
    while (i < take.size() && take[i] == cnt[i]) take[i++] = 0;
    if (i == take.size()) break;
    ++take[i];
  }
  return best;
}

SolverAdapter builtin(const std::string& name, const std::string& id, std::map<std::string, std::string> options,
                      SolverKind kind) {
  SolverAdapter a;
  a.name = name;
  a.kind = kind;
  a.mode = BuiltinSolver{id, std::move(options)};
  return a;
}

SolverAdapter synthetic(const std::string& name, const std::string& param, double scale, double offset) {
  return builtin(name, "synthetic",
                 {{"param", param}, {"scale", std::to_string(scale)}, {"offset", std::to_string(offset)}});
}

namespace {

bool ref_better(const RefRecord& a, const RefRecord& b, ProblemKind kind) {
  if (a.solved && !b.solved) return true;
  if (kind == ProblemKind::Decision) return false;
  if (a.optimal && !b.optimal) return true;
  if (a.solved && b.solved && a.quality && b.quality) {
    return kind == ProblemKind::Minimise ? *a.quality < *b.quality : *a.quality > *b.quality;
  }
  return false;
}

}  // namespace

std::pair<double, double> ref_minizinc_score(const RefRecord& a, const RefRecord& b, ProblemKind kind) {
  if (ref_better(a, b, kind)) return {1.0, 0.0};
  if (ref_better(b, a, kind)) return {0.0, 1.0};
  if (a.solved && b.solved) {
    if (a.time + b.time == 0.0) return {0.5, 0.5};
    return {b.time / (a.time + b.time), a.time / (a.time + b.time)};
  }
  return {0.0, 0.0};
}

ComparableRecord to_comparable(const RefRecord& r, ProblemKind kind) {
  ComparableRecord c;
  c.solved = r.solved;
  c.optimal = r.optimal;
  c.quality = r.quality;
  c.time = r.time;
  c.kind = kind;
  return c;
}

std::vector<RefRecord> random_records(Rng& rng, std::size_t n, ProblemKind kind) {
  std::vector<RefRecord> out(n);
  std::optional<std::int64_t> best;
  for (auto& r : out) {
    r.solved = rng.uniform01() < (kind == ProblemKind::Decision ? 0.6 : 0.75);
    r.optimal = false;
    // coarse times so that ties and zeros occur
    r.time = static_cast<double>(rng.uniform_int(0, 20)) * 2.5;
    if (r.solved && kind != ProblemKind::Decision) {
      r.quality = rng.uniform_int(1, 5);
      if (!best || (kind == ProblemKind::Minimise ? *r.quality < *best : *r.quality > *best)) best = r.quality;
    }
  }
  for (auto& r : out) {
    if (r.quality && r.quality == best) r.optimal = rng.uniform01() < 0.5;
  }
  return out;
}

RefFriedman ref_friedman(const std::vector<std::vector<double>>& m) {
  const auto n = static_cast<double>(m.size());
  const std::size_t k = m.front().size();
  RefFriedman out;
  out.rank_sums.assign(k, 0.0);
  double a = 0.0;
  for (const auto& row : m) {
    for (std::size_t j = 0; j < k; ++j) {
      double less = 0, equal = 0;
      for (double y : row) {
        if (y < row[j]) less += 1;
        if (y == row[j]) equal += 1;
      }
      const double r = 1.0 + less + (equal - 1.0) / 2.0;
      out.rank_sums[j] += r;
      a += r * r;
    }
  }
  const double kk = static_cast<double>(k);
  const double c = n * kk * (kk + 1) * (kk + 1) / 4.0;
  double sum_r2 = 0.0;
  for (double r : out.rank_sums) sum_r2 += r * r;
  out.statistic = a == c ? 0.0 : (kk - 1) * (sum_r2 - n * c) / (a - c);
  out.critical_difference_sq_over_t2 =
      2.0 * n * (1.0 - out.statistic / (n * (kk - 1))) * (a - c) / ((n - 1) * (kk - 1));
  return out;
}

SolverRecord rec(SolverStatus s, double time, std::optional<std::int64_t> objective, bool optimal) {
  SolverRecord r;
  r.status = s;
  r.time = time;
  r.objective = objective;
  r.optimal_claimed = optimal;
  if (s == SolverStatus::Sat) {
    r.solution = objective ? "objective = " + std::to_string(*objective) + ";" : "x = 1;";
  } else if (s == SolverStatus::Timeout && objective) {
    r.solution = "objective = " + std::to_string(*objective) + ";";
  }
  return r;
}

namespace {

constexpr auto kSat = SolverStatus::Sat;
constexpr auto kUnsat = SolverStatus::Unsat;
constexpr auto kTimeout = SolverStatus::Timeout;
constexpr auto kError = SolverStatus::Error;
constexpr auto kDec = ProblemKind::Decision;
constexpr auto kMin = ProblemKind::Minimise;
constexpr auto kMax = ProblemKind::Maximise;
const TypeSet kBoth{true, true};
const TypeSet kOnlySat{true, false};
const TypeSet kOnlyUnsat{false, true};

SolverRecord incorrect(SolverRecord r) {
  r.check = CheckState::Incorrect;
  return r;
}

TruthCase graded(std::string label, SolverRecord r, Penalty p, RunStatus s, TypeSet t = kBoth,
                 ProblemKind kind = kDec) {
  return {std::move(label), GeneratorOutcome::Solution, false, kind, t, std::move(r), {}, p, s};
}

TruthCase disc(std::string label, SolverRecord f, SolverRecord b, Penalty p, RunStatus s, TypeSet t = kBoth,
               ProblemKind kind = kDec) {
  return {std::move(label), GeneratorOutcome::Solution, true, kind, t, std::move(f), std::move(b), p, s};
}

TruthCase generator(std::string label, GeneratorOutcome g, bool discriminating, Penalty p) {
  return {std::move(label), g, discriminating, kDec, kBoth, {}, {}, p, RunStatus::GeneratorUnsolved};
}

}  // namespace

std::vector<TruthCase> truth_table() {
  using RS = RunStatus;
  const Penalty inf = kPlusInfinity;
  const Penalty big = kLargeNegative;
  return {
      // generator outcomes
      generator("graded: generator unsat", GeneratorOutcome::Unsat, false, inf),
      generator("graded: translation timeout", GeneratorOutcome::TranslateTimeout, false, inf),
      generator("graded: generator search timeout", GeneratorOutcome::SolveTimeout, false, 1.0),
      generator("disc: generator unsat", GeneratorOutcome::Unsat, true, inf),
      generator("disc: translation timeout", GeneratorOutcome::TranslateTimeout, true, inf),
      generator("disc: generator search timeout", GeneratorOutcome::SolveTimeout, true, 1.0),

      // graded, decision problem
      graded("sat below band", rec(kSat, 5), 0, RS::TooEasySat),
      graded("unsat below band", rec(kUnsat, 5), 0, RS::TooEasyUnsat),
      graded("sat in band", rec(kSat, 50), -1, RS::Graded),
      graded("unsat in band", rec(kUnsat, 50), -1, RS::Graded),
      graded("sat exactly at t_min", rec(kSat, 10), -1, RS::Graded),
      graded("sat just below t_min", rec(kSat, 9.999), 0, RS::TooEasySat),
      graded("sat just below t_max", rec(kSat, 99.999), -1, RS::Graded),
      graded("sat exactly at t_max", rec(kSat, 100), 0, RS::TooDifficult),
      graded("timeout at limit", rec(kTimeout, 100), 0, RS::TooDifficult),
      graded("timeout reported early", rec(kTimeout, 50), 0, RS::TooDifficult),
      graded("sat in band, sat only", rec(kSat, 50), -1, RS::Graded, kOnlySat),
      graded("unsat in band, sat only", rec(kUnsat, 50), 0, RS::Others, kOnlySat),
      graded("sat in band, unsat only", rec(kSat, 50), 0, RS::Others, kOnlyUnsat),
      graded("unsat in band, unsat only", rec(kUnsat, 50), -1, RS::Graded, kOnlyUnsat),
      graded("unsat below band, sat only", rec(kUnsat, 5), 0, RS::TooEasyUnsat, kOnlySat),
      graded("timeout, unsat only", rec(kTimeout, 100), 0, RS::TooDifficult, kOnlyUnsat),
      graded("error fast", rec(kError, 1), 0, RS::Others),
      graded("error in band", rec(kError, 50), 0, RS::Others),
      graded("incorrect answer in band", incorrect(rec(kSat, 50)), 0, RS::Others),

      // graded, optimisation problems
      graded("max: proved optimal in band", rec(kSat, 50, 7, true), -1, RS::Graded, kBoth, kMax),
      graded("max: unproved in band", rec(kSat, 50, 7, false), 0, RS::TooDifficult, kBoth, kMax),
      graded("max: timeout with incumbent", rec(kTimeout, 100, 7), 0, RS::TooDifficult, kBoth, kMax),
      graded("max: proved optimal below band", rec(kSat, 5, 7, true), 0, RS::TooEasySat, kBoth, kMax),
      graded("max: unproved below band", rec(kSat, 5, 7, false), 0, RS::TooDifficult, kBoth, kMax),
      graded("min: infeasible in band", rec(kUnsat, 50), -1, RS::Graded, kBoth, kMin),
      graded("min: infeasible below band", rec(kUnsat, 3), 0, RS::TooEasyUnsat, kBoth, kMin),

      // discriminating, decision problem
      disc("favoured timeout, base sat", rec(kTimeout, 100), rec(kSat, 50), 0, RS::FavouredTimeout),
      disc("both timeout", rec(kTimeout, 100), rec(kTimeout, 100), 0, RS::FavouredTimeout),
      disc("base timeout", rec(kSat, 20), rec(kTimeout, 100), big, RS::DisFound),
      disc("base below t_min", rec(kSat, 20), rec(kSat, 5), 0, RS::BaseTooEasy),
      disc("favoured 10 s, base 30 s", rec(kSat, 10), rec(kSat, 30), -3, RS::DisFound),
      disc("favoured 30 s, base 10 s", rec(kSat, 30), rec(kSat, 10), -1.0 / 3.0, RS::DisFound),
      disc("equal times", rec(kSat, 50), rec(kSat, 50), -1, RS::DisFound),
      disc("unsat, sat only", rec(kUnsat, 20), rec(kUnsat, 40), 0, RS::WrongType, kOnlySat),
      disc("unsat, unsat only", rec(kUnsat, 16), rec(kUnsat, 48), -3, RS::DisFound, kOnlyUnsat),
      disc("sat, unsat only", rec(kSat, 20), rec(kTimeout, 100), 0, RS::WrongType, kOnlyUnsat),
      disc("favoured error", rec(kError, 1), rec(kSat, 50), 0, RS::Others),
      disc("base error", rec(kSat, 20), rec(kError, 50), 0, RS::Others),
      disc("favoured incorrect", incorrect(rec(kSat, 20)), rec(kSat, 50), 0, RS::Others),
      disc("base incorrect", rec(kSat, 20), incorrect(rec(kSat, 50)), 0, RS::Others),
      disc("favoured 4 s, base 60 s", rec(kSat, 4), rec(kSat, 60), -15, RS::DisFound),
      disc("favoured near limit, base timeout", rec(kSat, 99), rec(kTimeout, 100), big, RS::DisFound),
      disc("base just below t_min", rec(kSat, 20), rec(kSat, 9.99), 0, RS::BaseTooEasy),
      disc("both exactly t_min", rec(kSat, 10), rec(kSat, 10), -1, RS::DisFound),
      disc("base fast unsat", rec(kSat, 1), rec(kUnsat, 5), 0, RS::BaseTooEasy),
      disc("unsat, base timeout", rec(kUnsat, 5), rec(kTimeout, 100), big, RS::DisFound),
      disc("favoured 0.5 s, base 63.5 s", rec(kSat, 0.5), rec(kSat, 63.5), -127, RS::DisFound),

      // discriminating, optimisation problems
      disc("min: optimal vs worse incumbent", rec(kSat, 20, 5, true), rec(kTimeout, 100, 7), big, RS::DisFound,
           kBoth, kMin),
      disc("min: favoured timeout with incumbent", rec(kTimeout, 100, 5), rec(kSat, 20, 5, true), 0,
           RS::FavouredTimeout, kBoth, kMin),
      disc("min: favoured worse quality", rec(kSat, 20, 9), rec(kSat, 50, 5, true), 0, RS::FavouredLost, kBoth,
           kMin),
      disc("min: both optimal, 20 s vs 60 s", rec(kSat, 20, 5, true), rec(kSat, 60, 5, true), -3, RS::DisFound,
           kBoth, kMin),
      disc("min: better quality vs incumbent", rec(kSat, 30, 6), rec(kTimeout, 100, 8), big, RS::DisFound, kBoth,
           kMin),
      disc("min: base without incumbent", rec(kSat, 30, 6), rec(kTimeout, 100), big, RS::DisFound, kBoth, kMin),
      disc("min: optimality claim decides", rec(kSat, 30, 5, true), rec(kSat, 20, 5), big, RS::DisFound, kBoth,
           kMin),
      disc("min: equal unproved quality", rec(kSat, 16, 5), rec(kSat, 48, 5), -3, RS::DisFound, kBoth, kMin),
      disc("max: better quality", rec(kSat, 40, 12), rec(kSat, 20, 10), big, RS::DisFound, kBoth, kMax),
      disc("max: worse quality", rec(kSat, 40, 10), rec(kSat, 20, 12), 0, RS::FavouredLost, kBoth, kMax),
      disc("min: base fast with better quality", rec(kSat, 20, 8), rec(kSat, 9, 5), 0, RS::BaseTooEasy, kBoth,
           kMin),
      disc("min: infeasible, base timeout", rec(kUnsat, 20), rec(kTimeout, 100), big, RS::DisFound, kBoth, kMin),
  };
}

}  // namespace testsupport
