#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "instgen/rng.hpp"

namespace instgen {

/// One tunable integer parameter with inclusive bounds.
struct ParameterSpec {
  std::string name;
  std::int64_t lower = 0;
  std::int64_t upper = 0;

  bool operator==(const ParameterSpec&) const = default;
};

/// Ordered, non-empty set of uniquely named parameters.
class ParameterSpace {
 public:
  ParameterSpace() = default;
  /// Throws ValidationError on an empty list, duplicate names or lower > upper.
  explicit ParameterSpace(std::vector<ParameterSpec> params);

  const std::vector<ParameterSpec>& params() const { return params_; }
  std::size_t size() const { return params_.size(); }
  bool empty() const { return params_.empty(); }
  std::optional<std::size_t> index_of(std::string_view name) const;
  const ParameterSpec& at(std::string_view name) const;

  /// `name: lower..upper` entries joined by "; ".
  std::string to_text() const;

  bool operator==(const ParameterSpace&) const = default;

 private:
  std::vector<ParameterSpec> params_;
};

/// Parses `name: lower..upper` entries separated by ';' or newlines.
/// `#` starts a comment. Throws ParseError / ValidationError.
ParameterSpace parse_space(std::string_view text);

/// One concrete assignment to every parameter of a space.
struct GeneratorConfiguration {
  std::string id;
  std::map<std::string, std::int64_t> assignment;

  std::int64_t value(const std::string& name) const { return assignment.at(name); }
  /// `a=1,b=2` in name order.
  std::string to_text() const;

  bool operator==(const GeneratorConfiguration&) const = default;
};

/// True when every parameter is assigned within bounds and nothing else is.
bool belongs_to(const GeneratorConfiguration& config, const ParameterSpace& space);

struct ParameterDistribution {
  double center = 0.0;
  double spread = 1.0;
};

/// Per-parameter truncated normal, plus the elite centers a sample may be
/// drawn around. When `elite_centers` is empty, `params[i].center` is used.
struct SamplingModel {
  std::vector<ParameterDistribution> params;
  std::vector<std::vector<double>> elite_centers;
  int iteration = 0;
};

inline constexpr double kSpreadDecay = 0.8;
inline constexpr double kSpreadFloor = 1.0;

/// Centers at the range midpoints, spread = max((upper - lower) / 2, floor).
SamplingModel initial_sampling_model(const ParameterSpace& space);

GeneratorConfiguration sample_uniform(const ParameterSpace& space, Rng& rng);

GeneratorConfiguration sample_from_model(const ParameterSpace& space,
                                         const SamplingModel& model, Rng& rng);

/// Elites are kept as candidate centers (the first elite also becomes the
/// nominal center); spreads decay geometrically and never go below the
/// floor, nor increase.
SamplingModel update_sampling_model(const SamplingModel& model,
                                    const std::vector<GeneratorConfiguration>& elites,
                                    const ParameterSpace& space, int iteration,
                                    double decay = kSpreadDecay);

/// Nearest integer with ties broken toward `center`.
std::int64_t round_toward_center(double x, double center);

}  // namespace instgen
