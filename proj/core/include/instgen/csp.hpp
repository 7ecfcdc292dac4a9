#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace instgen {

/// Finite-domain CSP over contiguous integer domains.
///
/// Variables are searched in declaration order, values in ascending order.
/// Linear constraints are checked against interval bounds after every
/// assignment; all-different is forward-checked against assigned members;
/// predicates run once their last variable is assigned.
class Csp {
 public:
  enum class Relation { Eq, Ne, Le, Lt, Ge, Gt };

  struct Term {
    int var;
    std::int64_t coef;
  };

  /// A predicate sees the full assignment vector; only variables up to its
  /// last variable (in declaration order) are meaningful.
  using Predicate = std::function<bool(std::span<const std::int64_t>)>;

  int add_variable(std::string name, std::int64_t lo, std::int64_t hi);
  /// sum(terms) rel rhs. Duplicate variables are merged.
  void add_linear(std::vector<Term> terms, Relation rel, std::int64_t rhs);
  void add_all_different(std::vector<int> vars);
  void add_predicate(std::vector<int> vars, Predicate pred);
  /// Makes the problem trivially infeasible.
  void add_false() { infeasible_ = true; }

  std::size_t num_variables() const { return vars_.size(); }
  const std::string& name(int var) const { return vars_[static_cast<std::size_t>(var)].name; }
  std::int64_t lower(int var) const { return vars_[static_cast<std::size_t>(var)].lo; }
  std::int64_t upper(int var) const { return vars_[static_cast<std::size_t>(var)].hi; }

 private:
  friend class BacktrackSearch;

  struct Variable {
    std::string name;
    std::int64_t lo;
    std::int64_t hi;
  };
  // Stored as sum(terms) <= rhs, sum(terms) == rhs or sum(terms) != rhs.
  struct Linear {
    std::vector<Term> terms;
    Relation rel;
    std::int64_t rhs;
  };
  struct AllDifferent {
    std::vector<int> vars;
  };
  struct PredicateConstraint {
    std::vector<int> vars;
    Predicate pred;
  };

  std::vector<Variable> vars_;
  std::vector<Linear> linear_;
  std::vector<AllDifferent> alldiff_;
  std::vector<PredicateConstraint> predicates_;
  bool infeasible_ = false;
};

/// Full assignments that must not be returned again.
using ExclusionTable = std::set<std::vector<std::int64_t>>;

enum class SearchStatus { Solution, Unsat, Timeout };

struct SearchResult {
  SearchStatus status = SearchStatus::Unsat;
  std::vector<std::int64_t> assignment;
  std::uint64_t nodes = 0;
};

/// Depth-first chronological backtracking. Returns the first solution in
/// search order that is not in `exclusions`.
SearchResult backtrack_solve(const Csp& csp, const ExclusionTable& exclusions,
                             std::chrono::steady_clock::time_point deadline);

SearchResult backtrack_solve(const Csp& csp, const ExclusionTable& exclusions,
                             double time_limit_seconds);

}  // namespace instgen
