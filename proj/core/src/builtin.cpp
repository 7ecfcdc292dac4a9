#include "instgen/builtin.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <thread>

#include "instgen/csv.hpp"
#include "instgen/errors.hpp"
#include "instgen/rng.hpp"

namespace instgen {

using Clock = std::chrono::steady_clock;

double option_or(const std::map<std::string, std::string>& options, const std::string& key,
                 double fallback) {
  auto it = options.find(key);
  if (it == options.end()) return fallback;
  try {
    return parse_double(it->second);
  } catch (const ParseError&) {
    throw ValidationError("option '" + key + "' is not a number: " + it->second);
  }
}

Knapsack Knapsack::from_values(const ValueMap& values) {
  Knapsack k;
  k.weight = get_array(values, "weight");
  k.value = get_array(values, "value");
  k.capacity = get_int(values, "capacity");
  if (values.contains("count")) {
    k.count = get_array(values, "count");
  } else {
    k.count.assign(k.weight.size(), 1);
  }
  if (k.value.size() != k.weight.size() || k.count.size() != k.weight.size()) {
    throw CheckError("knapsack arrays have different lengths");
  }
  return k;
}

bool Knapsack::feasible(const std::vector<std::int64_t>& take) const {
  if (take.size() != size()) return false;
  std::int64_t w = 0;
  for (std::size_t i = 0; i < size(); ++i) {
    if (take[i] < 0 || take[i] > count[i]) return false;
    w += take[i] * weight[i];
  }
  return w <= capacity;
}

std::int64_t Knapsack::objective(const std::vector<std::int64_t>& take) const {
  std::int64_t v = 0;
  for (std::size_t i = 0; i < size() && i < take.size(); ++i) v += take[i] * value[i];
  return v;
}

std::string knapsack_payload(const std::vector<std::int64_t>& take, std::int64_t objective) {
  return "take = " + format_value(take) + ";\nobjective = " + std::to_string(objective) + ";\n";
}

namespace {

// Time source for the in-process solvers: virtual when node_cost > 0.
class Timer {
 public:
  explicit Timer(const BuiltinContext& ctx)
      : start_(ctx.start), node_cost_(option_or(ctx.options, "node_cost", 0.0)),
        limit_(ctx.run.time_limit) {}

  void step() { ++steps_; }
  double now() const {
    if (node_cost_ > 0) return static_cast<double>(steps_) * node_cost_;
    return std::chrono::duration<double>(Clock::now() - start_).count();
  }
  bool expired() const {
    if (node_cost_ > 0) return now() >= limit_;
    return (steps_ & 0x3FF) == 0 && now() >= limit_;
  }
  bool virtual_time() const { return node_cost_ > 0; }

 private:
  Clock::time_point start_;
  double node_cost_;
  double limit_;
  std::uint64_t steps_ = 0;
};

SolverRecord finish(SolverRecord r, const Timer& t, double limit) {
  r.time = t.now();
  if (r.status == SolverStatus::Timeout) r.time = std::max(r.time, limit);
  return r;
}

// Approximate footprint of the search state; the toy solvers stay tiny,
// so this only trips under deliberately small limits.
bool over_memory(const Knapsack& k, const RunOptions& run) {
  const std::uint64_t bytes = 4096 + 64 * static_cast<std::uint64_t>(k.size());
  return run.mem_limit > 0 && bytes > run.mem_limit;
}

SolverRecord memory_error() {
  SolverRecord r;
  r.status = SolverStatus::Error;
  r.message = "memory limit exceeded";
  return r;
}

}  // namespace

SolverRecord solve_knapsack_bnb(const BuiltinContext& ctx) {
  const auto k = Knapsack::from_values(ctx.instance);
  if (over_memory(k, ctx.run)) return memory_error();
  Timer timer(ctx);
  const std::size_t n = k.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  // Zero-weight items first, then by value density.
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return k.value[a] * k.weight[b] > k.value[b] * k.weight[a];
  });

  SolverRecord rec;
  std::vector<std::int64_t> take(n, 0);
  std::vector<std::int64_t> best(n, 0);
  std::int64_t best_value = -1;
  bool timed_out = false;

  auto bound = [&](std::size_t depth, std::int64_t cap, std::int64_t val) {
    double b = static_cast<double>(val);
    double room = static_cast<double>(cap);
    for (std::size_t d = depth; d < n; ++d) {
      const auto i = order[d];
      if (k.weight[i] <= 0) {
        b += static_cast<double>(std::max<std::int64_t>(k.value[i], 0) * k.count[i]);
        continue;
      }
      const double w = static_cast<double>(k.weight[i] * k.count[i]);
      if (w <= room) {
        room -= w;
        b += static_cast<double>(k.value[i] * k.count[i]);
      } else {
        b += static_cast<double>(k.value[i]) * room / static_cast<double>(k.weight[i]);
        break;
      }
    }
    return b;
  };

  auto dfs = [&](auto&& self, std::size_t depth, std::int64_t cap, std::int64_t val) -> void {
    timer.step();
    if (timed_out || timer.expired()) {
      timed_out = true;
      return;
    }
    if (depth == n) {
      if (val > best_value) {
        best_value = val;
        best = take;
        rec.trace.push_back({timer.now(), val});
      }
      return;
    }
    if (best_value >= 0 && bound(depth, cap, val) <= static_cast<double>(best_value)) return;
    const auto i = order[depth];
    std::int64_t most = k.count[i];
    if (k.weight[i] > 0) most = std::min(most, cap / k.weight[i]);
    for (std::int64_t c = most; c >= 0; --c) {
      take[i] = c;
      self(self, depth + 1, cap - c * k.weight[i], val + c * k.value[i]);
      if (timed_out) break;
    }
    take[i] = 0;
  };
  if (k.capacity >= 0) dfs(dfs, 0, k.capacity, 0);

  if (best_value >= 0) {
    rec.objective = best_value;
    rec.solution = knapsack_payload(best, best_value);
  }
  if (timed_out) {
    rec.status = SolverStatus::Timeout;
  } else if (best_value < 0) {
    rec.status = SolverStatus::Unsat;
  } else {
    rec.status = SolverStatus::Sat;
    rec.optimal_claimed = true;
  }
  return finish(std::move(rec), timer, ctx.run.time_limit);
}

SolverRecord solve_knapsack_greedy(const BuiltinContext& ctx) {
  const auto k = Knapsack::from_values(ctx.instance);
  if (over_memory(k, ctx.run)) return memory_error();
  Timer timer(ctx);
  SolverRecord rec;
  if (k.capacity < 0) {
    rec.status = SolverStatus::Timeout;
    return finish(std::move(rec), timer, ctx.run.time_limit);
  }
  std::vector<std::size_t> order(k.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return k.value[a] * k.weight[b] > k.value[b] * k.weight[a];
  });
  std::vector<std::int64_t> take(k.size(), 0);
  std::int64_t cap = k.capacity;
  for (auto i : order) {
    timer.step();
    std::int64_t c = k.count[i];
    if (k.weight[i] > 0) c = std::min(c, cap / k.weight[i]);
    take[i] = c;
    cap -= c * k.weight[i];
  }
  const auto obj = k.objective(take);
  rec.status = SolverStatus::Sat;
  rec.objective = obj;
  rec.solution = knapsack_payload(take, obj);
  rec.trace.push_back({timer.now(), obj});
  return finish(std::move(rec), timer, ctx.run.time_limit);
}

SolverRecord solve_knapsack_hill(const BuiltinContext& ctx) {
  const auto k = Knapsack::from_values(ctx.instance);
  if (over_memory(k, ctx.run)) return memory_error();
  Timer timer(ctx);
  Rng rng(ctx.run.seed);
  const auto iterations = static_cast<std::int64_t>(option_or(ctx.options, "iterations", 20000));
  const std::size_t n = k.size();
  SolverRecord rec;
  if (k.capacity < 0 || n == 0) {
    // Local search cannot prove infeasibility.
    rec.status = k.capacity < 0 ? SolverStatus::Timeout : SolverStatus::Sat;
    if (n == 0 && k.capacity >= 0) {
      rec.objective = 0;
      rec.solution = knapsack_payload({}, 0);
      rec.trace.push_back({timer.now(), 0});
    }
    return finish(std::move(rec), timer, ctx.run.time_limit);
  }

  std::vector<std::int64_t> cur(n, 0);
  std::int64_t cur_w = 0;
  std::int64_t cur_v = 0;
  std::vector<std::int64_t> best = cur;
  std::int64_t best_v = 0;
  rec.trace.push_back({timer.now(), 0});
  bool timed_out = false;
  auto idx = [&] { return static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(n) - 1)); };

  for (std::int64_t it = 0; it < iterations; ++it) {
    timer.step();
    if (timer.expired()) {
      timed_out = true;
      break;
    }
    const auto move = rng.uniform_int(0, 99);
    if (move < 45) {  // add one unit
      const auto i = idx();
      if (cur[i] < k.count[i] && cur_w + k.weight[i] <= k.capacity && k.value[i] >= 0) {
        ++cur[i];
        cur_w += k.weight[i];
        cur_v += k.value[i];
      }
    } else if (move < 95) {  // swap one unit of i for one unit of j
      const auto i = idx();
      const auto j = idx();
      if (i != j && cur[i] > 0 && cur[j] < k.count[j] &&
          cur_w - k.weight[i] + k.weight[j] <= k.capacity && k.value[j] >= k.value[i]) {
        --cur[i];
        ++cur[j];
        cur_w += k.weight[j] - k.weight[i];
        cur_v += k.value[j] - k.value[i];
      }
    } else {  // occasional drop to escape plateaus
      const auto i = idx();
      if (cur[i] > 0) {
        --cur[i];
        cur_w -= k.weight[i];
        cur_v -= k.value[i];
      }
    }
    if (cur_v > best_v) {
      best_v = cur_v;
      best = cur;
      rec.trace.push_back({timer.now(), best_v});
    }
  }
  rec.status = timed_out ? SolverStatus::Timeout : SolverStatus::Sat;
  rec.objective = best_v;
  rec.solution = knapsack_payload(best, best_v);
  return finish(std::move(rec), timer, ctx.run.time_limit);
}

SolverRecord solve_knapsack_buggy(const BuiltinContext& ctx) {
  const auto k = Knapsack::from_values(ctx.instance);
  Timer timer(ctx);
  timer.step();
  std::vector<std::int64_t> take = k.count;
  if (k.feasible(take)) {
    if (take.empty()) {
      take.push_back(1);
    } else {
      take[0] += 1;  // exceeds the item's count
    }
  }
  SolverRecord rec;
  rec.status = SolverStatus::Sat;
  rec.objective = k.objective(take);
  rec.optimal_claimed = true;
  rec.solution = knapsack_payload(take, *rec.objective);
  rec.trace.push_back({timer.now(), *rec.objective});
  return finish(std::move(rec), timer, ctx.run.time_limit);
}

SolverRecord solve_synthetic(const BuiltinContext& ctx) {
  const auto& opts = ctx.options;
  auto param_value = [&](const std::string& key) -> std::optional<double> {
    auto it = opts.find(key);
    if (it == opts.end()) return std::nullopt;
    return static_cast<double>(get_int(ctx.instance, it->second));
  };
  SolverRecord rec;
  const double memory = option_or(opts, "memory", 0.0);
  if (ctx.run.mem_limit > 0 && memory > static_cast<double>(ctx.run.mem_limit)) return memory_error();

  const double x = param_value("param").value_or(0.0);
  const double latency = option_or(opts, "offset", 0.0) +
                         option_or(opts, "scale", 1.0) * std::pow(x, option_or(opts, "power", 1.0));
  const bool sleep = option_or(opts, "sleep", 0.0) != 0.0;
  const double limit = ctx.run.time_limit;

  if (sleep) {
    std::this_thread::sleep_for(std::chrono::duration<double>(std::min(std::max(latency, 0.0), limit)));
  }
  const double elapsed = sleep ? std::chrono::duration<double>(Clock::now() - ctx.start).count()
                               : std::max(latency, 0.0);
  if (latency >= limit) {
    rec.status = SolverStatus::Timeout;
    rec.time = std::max(elapsed, limit);
    return rec;
  }
  rec.time = elapsed;
  if (auto u = param_value("unsat_param"); u && *u > option_or(opts, "unsat_above", 0.0)) {
    rec.status = SolverStatus::Unsat;
    return rec;
  }
  rec.status = SolverStatus::Sat;
  if (auto obj = param_value("objective_param")) {
    rec.objective = static_cast<std::int64_t>(*obj);
    rec.optimal_claimed = true;
    rec.solution = "objective = " + std::to_string(*rec.objective) + ";\n";
    rec.trace.push_back({elapsed, *rec.objective});
  } else {
    rec.solution = "solved = 1;\n";
  }
  return rec;
}

SolverRecord run_builtin(const BuiltinSolver& solver, const ProblemModel&,
                         const CandidateInstance& instance, const RunOptions& options) {
  BuiltinContext ctx{instance.values, solver.options, options, Clock::now()};
  try {
    if (solver.id == "knapsack-bnb") return solve_knapsack_bnb(ctx);
    if (solver.id == "knapsack-greedy") return solve_knapsack_greedy(ctx);
    if (solver.id == "knapsack-hill") return solve_knapsack_hill(ctx);
    if (solver.id == "knapsack-buggy") return solve_knapsack_buggy(ctx);
    if (solver.id == "synthetic") return solve_synthetic(ctx);
  } catch (const Error& e) {
    SolverRecord r;
    r.status = SolverStatus::Error;
    r.message = e.what();
    return r;
  }
  SolverRecord r;
  r.status = SolverStatus::Error;
  r.message = "unknown builtin solver '" + solver.id + "'";
  return r;
}

}  // namespace instgen
