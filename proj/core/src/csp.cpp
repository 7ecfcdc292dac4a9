#include "instgen/csp.hpp"

#include <algorithm>
#include <map>

namespace instgen {

int Csp::add_variable(std::string name, std::int64_t lo, std::int64_t hi) {
  vars_.push_back({std::move(name), lo, hi});
  return static_cast<int>(vars_.size()) - 1;
}

void Csp::add_linear(std::vector<Term> terms, Relation rel, std::int64_t rhs) {
  std::map<int, std::int64_t> merged;
  for (const auto& t : terms) merged[t.var] += t.coef;
  std::vector<Term> clean;
  for (const auto& [v, c] : merged) {
    if (c != 0) clean.push_back({v, c});
  }
  auto negate = [&] {
    for (auto& t : clean) t.coef = -t.coef;
    rhs = -rhs;
  };
  switch (rel) {
    case Relation::Lt:
      rhs -= 1;
      rel = Relation::Le;
      break;
    case Relation::Gt:
      rhs += 1;
      negate();
      rel = Relation::Le;
      break;
    case Relation::Ge:
      negate();
      rel = Relation::Le;
      break;
    default:
      break;
  }
  if (clean.empty()) {
    const bool ok = rel == Relation::Eq ? rhs == 0 : rel == Relation::Ne ? rhs != 0 : 0 <= rhs;
    if (!ok) infeasible_ = true;
    return;
  }
  linear_.push_back({std::move(clean), rel, rhs});
}

void Csp::add_all_different(std::vector<int> vars) {
  std::sort(vars.begin(), vars.end());
  for (std::size_t i = 1; i < vars.size(); ++i) {
    if (vars[i] == vars[i - 1]) {
      infeasible_ = true;
      return;
    }
  }
  if (vars.size() > 1) alldiff_.push_back({std::move(vars)});
}

void Csp::add_predicate(std::vector<int> vars, Predicate pred) {
  std::sort(vars.begin(), vars.end());
  vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
  predicates_.push_back({std::move(vars), std::move(pred)});
}

class BacktrackSearch {
 public:
  BacktrackSearch(const Csp& csp, const ExclusionTable& exclusions,
                  std::chrono::steady_clock::time_point deadline)
      : csp_(csp), exclusions_(exclusions), deadline_(deadline) {
    const auto n = csp.vars_.size();
    value_.assign(n, 0);
    touching_linear_.resize(n);
    touching_alldiff_.resize(n);
    predicates_at_.resize(n);
    for (std::size_t c = 0; c < csp.linear_.size(); ++c) {
      const auto& lin = csp.linear_[c];
      State st;
      int last = -1;
      for (const auto& t : lin.terms) {
        const auto& v = csp.vars_[static_cast<std::size_t>(t.var)];
        st.rem_min += t.coef > 0 ? t.coef * v.lo : t.coef * v.hi;
        st.rem_max += t.coef > 0 ? t.coef * v.hi : t.coef * v.lo;
        touching_linear_[static_cast<std::size_t>(t.var)].push_back({c, t.coef});
        last = std::max(last, t.var);
      }
      st.last = last;
      lin_state_.push_back(st);
    }
    for (std::size_t c = 0; c < csp.alldiff_.size(); ++c) {
      for (int v : csp.alldiff_[c].vars) touching_alldiff_[static_cast<std::size_t>(v)].push_back(c);
    }
    for (std::size_t c = 0; c < csp.predicates_.size(); ++c) {
      const auto& vars = csp.predicates_[c].vars;
      if (vars.empty()) {
        constant_predicates_.push_back(c);
      } else {
        predicates_at_[static_cast<std::size_t>(vars.back())].push_back(c);
      }
    }
  }

  SearchResult run() {
    SearchResult result;
    if (std::chrono::steady_clock::now() >= deadline_) {
      result.status = SearchStatus::Timeout;
      return result;
    }
    if (csp_.infeasible_) return result;
    for (auto c : constant_predicates_) {
      if (!csp_.predicates_[c].pred(value_)) return result;
    }
    for (const auto& v : csp_.vars_) {
      if (v.lo > v.hi) return result;
    }
    const int n = static_cast<int>(csp_.vars_.size());
    if (n == 0) {
      if (!exclusions_.contains(value_)) result.status = SearchStatus::Solution;
      return result;
    }

    std::vector<bool> assigned(static_cast<std::size_t>(n), false);
    std::vector<bool> started(static_cast<std::size_t>(n), false);
    int depth = 0;
    while (depth >= 0) {
      const auto d = static_cast<std::size_t>(depth);
      if ((++result.nodes & 0xFF) == 0 && std::chrono::steady_clock::now() >= deadline_) {
        result.status = SearchStatus::Timeout;
        return result;
      }
      const auto& var = csp_.vars_[d];
      std::int64_t next;
      if (assigned[d]) {
        unassign(d);
        assigned[d] = false;
        if (value_[d] == var.hi) {
          started[d] = false;
          --depth;
          continue;
        }
        next = value_[d] + 1;
      } else if (started[d]) {
        // Every value of this variable was rejected.
        started[d] = false;
        --depth;
        continue;
      } else {
        next = var.lo;
        started[d] = true;
      }
      bool placed = false;
      for (std::int64_t v = next;; ++v) {
        if (assign(d, v)) {
          placed = true;
          break;
        }
        if (v == var.hi) break;
      }
      if (!placed) {
        started[d] = false;
        --depth;
        continue;
      }
      assigned[d] = true;
      if (depth == n - 1) {
        if (!exclusions_.contains(value_)) {
          result.status = SearchStatus::Solution;
          result.assignment = value_;
          return result;
        }
        continue;  // retry this depth with the next value
      }
      ++depth;
    }
    return result;
  }

 private:
  struct State {
    std::int64_t fixed = 0;
    std::int64_t rem_min = 0;
    std::int64_t rem_max = 0;
    int last = -1;
  };
  struct Touch {
    std::size_t constraint;
    std::int64_t coef;
  };

  bool linear_ok(std::size_t c) const {
    const auto& lin = csp_.linear_[c];
    const auto& st = lin_state_[c];
    const auto lo = st.fixed + st.rem_min;
    const auto hi = st.fixed + st.rem_max;
    switch (lin.rel) {
      case Csp::Relation::Le:
        return lo <= lin.rhs;
      case Csp::Relation::Eq:
        return lo <= lin.rhs && lin.rhs <= hi;
      case Csp::Relation::Ne:
        return lo != hi || lo != lin.rhs;
      default:
        return true;
    }
  }

  // Assigns and checks; on failure the assignment is fully undone.
  bool assign(std::size_t d, std::int64_t v) {
    const auto& var = csp_.vars_[d];
    value_[d] = v;
    for (const auto& t : touching_linear_[d]) {
      auto& st = lin_state_[t.constraint];
      st.fixed += t.coef * v;
      st.rem_min -= t.coef > 0 ? t.coef * var.lo : t.coef * var.hi;
      st.rem_max -= t.coef > 0 ? t.coef * var.hi : t.coef * var.lo;
    }
    bool ok = true;
    for (const auto& t : touching_linear_[d]) {
      if (!linear_ok(t.constraint)) {
        ok = false;
        break;
      }
    }
    if (ok) {
      for (auto c : touching_alldiff_[d]) {
        for (int other : csp_.alldiff_[c].vars) {
          if (static_cast<std::size_t>(other) < d && value_[static_cast<std::size_t>(other)] == v) {
            ok = false;
            break;
          }
        }
        if (!ok) break;
      }
    }
    if (ok) {
      for (auto c : predicates_at_[d]) {
        if (!csp_.predicates_[c].pred(value_)) {
          ok = false;
          break;
        }
      }
    }
    if (!ok) unassign(d);
    return ok;
  }

  void unassign(std::size_t d) {
    const auto& var = csp_.vars_[d];
    const auto v = value_[d];
    for (const auto& t : touching_linear_[d]) {
      auto& st = lin_state_[t.constraint];
      st.fixed -= t.coef * v;
      st.rem_min += t.coef > 0 ? t.coef * var.lo : t.coef * var.hi;
      st.rem_max += t.coef > 0 ? t.coef * var.hi : t.coef * var.lo;
    }
  }

  const Csp& csp_;
  const ExclusionTable& exclusions_;
  std::chrono::steady_clock::time_point deadline_;
  std::vector<std::int64_t> value_;
  std::vector<State> lin_state_;
  std::vector<std::vector<Touch>> touching_linear_;
  std::vector<std::vector<std::size_t>> touching_alldiff_;
  std::vector<std::vector<std::size_t>> predicates_at_;
  std::vector<std::size_t> constant_predicates_;
};

SearchResult backtrack_solve(const Csp& csp, const ExclusionTable& exclusions,
                             std::chrono::steady_clock::time_point deadline) {
  return BacktrackSearch(csp, exclusions, deadline).run();
}

SearchResult backtrack_solve(const Csp& csp, const ExclusionTable& exclusions,
                             double time_limit_seconds) {
  const auto now = std::chrono::steady_clock::now();
  if (time_limit_seconds <= 0) return backtrack_solve(csp, exclusions, now);
  return backtrack_solve(
      csp, exclusions,
      now + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                std::chrono::duration<double>(time_limit_seconds)));
}

}  // namespace instgen
