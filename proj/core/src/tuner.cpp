#include "instgen/tuner.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <mutex>
#include <set>
#include <thread>

#include "instgen/csv.hpp"
#include "instgen/errors.hpp"
#include "instgen/rng.hpp"

namespace instgen {

namespace {

const std::vector<std::string> kLogHeader = {"iteration", "step",     "config",    "penalty",
                                             "status",    "instance", "assignment"};

// Survivor order: rank sum over the race matrix, then mean penalty, then
// position (earlier candidates first).
std::vector<std::size_t> rank_columns(const PenaltyMatrix& m, std::size_t k) {
  std::vector<double> sums(k, 0.0);
  std::vector<double> means(k, 0.0);
  for (const auto& row : m) {
    const auto r = average_ranks(row);
    for (std::size_t j = 0; j < k; ++j) {
      sums[j] += r[j];
      means[j] += row[j];
    }
  }
  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) {
    if (sums[a] != sums[b]) return sums[a] < sums[b];
    return means[a] < means[b];
  });
  return order;
}

void keep_columns(RaceState& st, const std::vector<std::size_t>& keep) {
  std::vector<GeneratorConfiguration> alive;
  for (auto j : keep) alive.push_back(st.alive[j]);
  for (auto& row : st.matrix) {
    std::vector<double> r;
    for (auto j : keep) r.push_back(row[j]);
    row = std::move(r);
  }
  st.alive = std::move(alive);
}

}  // namespace

void TunerConfig::validate() const {
  if (total_budget == 0) throw ValidationError("total budget must be positive");
  if (!(elimination_alpha > 0 && elimination_alpha < 1)) throw ValidationError("alpha must lie in (0, 1)");
  if (min_survivors == 0) throw ValidationError("min_survivors must be positive");
  if (instances_per_step == 0) throw ValidationError("instances_per_step must be positive");
  if (workers == 0) throw ValidationError("workers must be positive");
}

std::size_t TunerConfig::effective_first_race_size() const {
  if (first_race_size > 0) return first_race_size;
  return std::max<std::size_t>(6, (total_budget + 39) / 40);
}

std::size_t TunerConfig::effective_race_budget() const {
  if (race_budget > 0) return race_budget;
  return std::max<std::size_t>(1, total_budget / 5);
}

std::string log_header_line() {
  return CsvWriter(kLogHeader).str();
}

std::string format_log_line(const LogEntry& e) {
  CsvWriter w(kLogHeader);
  const auto header_len = w.str().size();
  w.row({std::to_string(e.iteration), std::to_string(e.step), e.config_id, format_double(e.penalty),
         to_string(e.status), e.instance_id, e.assignment});
  return w.str().substr(header_len);
}

std::vector<LogEntry> parse_log(const std::string& text) {
  std::vector<LogEntry> out;
  if (text.empty()) return out;
  for (const auto& r : read_csv(text, kLogHeader)) {
    LogEntry e;
    try {
      e.iteration = std::stoi(r[0]);
      e.step = std::stoi(r[1]);
    } catch (const std::exception&) {
      throw ParseError("bad iteration/step in tuner log");
    }
    e.config_id = r[2];
    e.penalty = parse_double(r[3]);
    e.status = run_status_from_string(r[4]);
    e.instance_id = r[5];
    e.assignment = r[6];
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<GeneratorConfiguration> race(const std::vector<GeneratorConfiguration>& configs,
                                         const StepRunner& run_step, std::size_t race_budget,
                                         const TunerConfig& cfg, RaceState& st) {
  st.alive = configs;
  st.matrix.clear();
  std::size_t used = 0;
  int step = 0;
  while (!st.alive.empty()) {
    if (step > 0 && st.alive.size() <= cfg.min_survivors) break;
    if (used + st.alive.size() * cfg.instances_per_step > race_budget) break;
    ++step;
    bool stopped = false;
    for (std::size_t b = 0; b < cfg.instances_per_step && !st.alive.empty(); ++b) {
      auto outcomes = run_step(st.alive, step);
      if (outcomes.size() != st.alive.size()) {
        stopped = true;
        break;
      }
      used += outcomes.size();
      st.evaluations_used += outcomes.size();
      std::vector<double> row;
      std::vector<std::size_t> keep;
      for (std::size_t j = 0; j < outcomes.size(); ++j) {
        row.push_back(outcomes[j].penalty);
        if (!is_plus_infinity(outcomes[j].penalty)) keep.push_back(j);
      }
      st.matrix.push_back(std::move(row));
      keep_columns(st, keep);
    }
    if (stopped) break;
    const auto k = st.alive.size();
    if (static_cast<std::size_t>(step) >= cfg.first_test_after && k > cfg.min_survivors && k >= 2 &&
        st.matrix.size() >= 2) {
      const auto res = friedman_test(st.matrix, cfg.elimination_alpha);
      if (!res.eliminated.empty()) {
        std::set<std::size_t> gone(res.eliminated.begin(), res.eliminated.end());
        // Refill from the best-ranked eliminated columns down to min_survivors.
        const auto order = rank_columns(st.matrix, k);
        std::size_t survivors = k - gone.size();
        for (auto j : order) {
          if (survivors >= cfg.min_survivors) break;
          if (gone.erase(j)) ++survivors;
        }
        std::vector<std::size_t> keep;
        for (std::size_t j = 0; j < k; ++j) {
          if (!gone.contains(j)) keep.push_back(j);
        }
        keep_columns(st, keep);
      }
    }
  }
  std::vector<GeneratorConfiguration> ranked;
  if (st.matrix.empty()) return st.alive;
  for (auto j : rank_columns(st.matrix, st.alive.size())) ranked.push_back(st.alive[j]);
  return ranked;
}

TunerReport run_tuning(const ParameterSpace& space, const Evaluator& evaluator, const TunerConfig& cfg,
                       const TunerHooks& hooks) {
  TunerReport report;
  if (cfg.total_budget == 0) return report;
  cfg.validate();
  Rng rng(cfg.seed);
  SamplingModel model = initial_sampling_model(space);
  std::vector<GeneratorConfiguration> elites;
  std::size_t next_id = 1;
  std::size_t replayed = 0;
  std::size_t used = 0;
  const std::size_t max_elites = std::max<std::size_t>(
      cfg.min_survivors, 2 + static_cast<std::size_t>(std::floor(std::log2(std::max<std::size_t>(1, space.size())))));

  auto aborted = [&] { return hooks.abort && hooks.abort->load(); };

  for (int iteration = 1; used + cfg.instances_per_step <= cfg.total_budget; ++iteration) {
    if (aborted()) {
      report.aborted = true;
      break;
    }
    const std::size_t left = cfg.total_budget - used;
    std::size_t budget = std::min(cfg.effective_race_budget(), left);
    // A remainder too small for another race is folded into this one.
    if (left - budget < cfg.effective_race_budget() / 2) budget = left;
    const std::size_t per_step = cfg.instances_per_step;

    std::size_t n;
    if (iteration == 1) {
      n = cfg.effective_first_race_size();
    } else {
      const auto denom = cfg.first_test_after * per_step + std::min<std::size_t>(5, iteration);
      n = std::max({budget / std::max<std::size_t>(1, denom), elites.size() + 1, std::size_t{2}});
    }
    n = std::min(n, budget / per_step);
    if (n == 0) break;

    std::vector<GeneratorConfiguration> candidates;
    for (const auto& e : elites) {
      if (candidates.size() + 1 >= n) break;  // leave room for a new one
      candidates.push_back(e);
    }
    std::set<std::string> seen;
    for (const auto& c : candidates) seen.insert(c.to_text());
    while (candidates.size() < n) {
      GeneratorConfiguration c;
      for (int attempt = 0; attempt < 100; ++attempt) {
        c = iteration == 1 ? sample_uniform(space, rng) : sample_from_model(space, model, rng);
        if (!seen.contains(c.to_text())) break;
      }
      seen.insert(c.to_text());
      c.id = "c" + std::to_string(next_id++);
      candidates.push_back(std::move(c));
    }

    StepRunner run_step = [&](const std::vector<GeneratorConfiguration>& alive, int step) {
      std::vector<EvalOutcome> outs(alive.size());
      if (aborted()) {
        report.aborted = true;
        return std::vector<EvalOutcome>{};
      }
      std::vector<std::size_t> fresh;
      for (std::size_t j = 0; j < alive.size(); ++j) {
        if (replayed < hooks.replay.size()) {
          const auto& e = hooks.replay[replayed++];
          if (e.config_id != alive[j].id || e.iteration != iteration || e.step != step ||
              e.assignment != alive[j].to_text()) {
            throw ValidationError("tuner log does not match this campaign at entry " +
                                  std::to_string(replayed));
          }
          outs[j] = {e.penalty, e.status, e.instance_id};
        } else {
          fresh.push_back(j);
        }
      }
      const EvalContext ctx{iteration, step};
      if (cfg.workers <= 1 || fresh.size() <= 1) {
        for (auto j : fresh) outs[j] = evaluator(alive[j], ctx);
      } else {
        std::atomic<std::size_t> cursor{0};
        std::exception_ptr failure;
        std::mutex failure_mutex;
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < std::min(cfg.workers, fresh.size()); ++w) {
          pool.emplace_back([&] {
            for (std::size_t i = cursor++; i < fresh.size(); i = cursor++) {
              try {
                outs[fresh[i]] = evaluator(alive[fresh[i]], ctx);
              } catch (...) {
                std::lock_guard lk(failure_mutex);
                if (!failure) failure = std::current_exception();
              }
            }
          });
        }
        for (auto& t : pool) t.join();
        if (failure) std::rethrow_exception(failure);
      }
      const std::set<std::size_t> fresh_set(fresh.begin(), fresh.end());
      for (std::size_t j = 0; j < alive.size(); ++j) {
        LogEntry e{iteration, step, alive[j].id, outs[j].penalty, outs[j].status, outs[j].instance_id,
                   alive[j].to_text()};
        ++report.status_counts[e.status];
        if (fresh_set.contains(j) && hooks.on_entry) hooks.on_entry(e);
        report.log.push_back(std::move(e));
      }
      return outs;
    };

    RaceState state;
    auto survivors = race(candidates, run_step, budget, cfg, state);
    used += state.evaluations_used;
    report.iterations = iteration;
    if (survivors.size() > max_elites) survivors.resize(max_elites);
    if (!survivors.empty()) elites = std::move(survivors);
    model = update_sampling_model(model, elites, space, iteration);
    if (report.aborted || state.evaluations_used == 0) break;
  }
  report.elites = elites;
  return report;
}

}  // namespace instgen
