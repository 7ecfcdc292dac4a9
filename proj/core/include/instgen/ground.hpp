#pragma once

#include <chrono>
#include <cstdint>
#include <string>
#include <vector>

#include "instgen/csp.hpp"
#include "instgen/instance.hpp"
#include "instgen/model.hpp"

namespace instgen {

/// Where one decision variable lives in the flattened CSP. Sets are
/// encoded as one 0/1 variable per universe element, ascending.
struct VarLayout {
  std::string name;
  VarKind kind = VarKind::Int;
  std::int64_t lo = 0;
  std::int64_t hi = 0;
  std::size_t length = 1;
  std::vector<int> csp_vars;
};

struct GroundedModel {
  Csp csp;
  std::vector<VarLayout> layout;
  ValueMap parameters;

  /// Flattened assignment for `values`; throws ModelError on shape mismatch.
  std::vector<std::int64_t> encode(const ValueMap& values) const;
  /// Decision-variable values for a flattened assignment.
  ValueMap decode(const std::vector<std::int64_t>& assignment) const;
};

/// Thrown when flattening exceeds its deadline or size cap.
struct GroundingTimeout {};

inline constexpr std::size_t kMaxGroundVariables = 2'000'000;

/// Instantiates the model for `config` and flattens it to a CSP.
/// Throws ModelError for ill-defined shapes, GroundingTimeout past deadline.
GroundedModel ground(const GeneratorModel& model, const GeneratorConfiguration& config,
                     std::chrono::steady_clock::time_point deadline);

}  // namespace instgen
