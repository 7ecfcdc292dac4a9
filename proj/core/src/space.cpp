#include "instgen/space.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <set>
#include <sstream>

#include "instgen/errors.hpp"

namespace instgen {

namespace {

std::string_view trim(std::string_view s) {
  const auto* ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

bool is_identifier(std::string_view s) {
  if (s.empty()) return false;
  if (!(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  });
}

std::int64_t parse_int(std::string_view s, std::string_view entry) {
  s = trim(s);
  std::int64_t v = 0;
  const auto* first = s.data();
  const auto* last = s.data() + s.size();
  if (!s.empty() && s[0] == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last || first == last) {
    throw ParseError("bad integer '" + std::string(s) + "' in '" + std::string(entry) + "'");
  }
  return v;
}

}  // namespace

ParameterSpace::ParameterSpace(std::vector<ParameterSpec> params) : params_(std::move(params)) {
  if (params_.empty()) throw ValidationError("parameter space is empty");
  std::set<std::string> seen;
  for (const auto& p : params_) {
    if (!seen.insert(p.name).second) throw ValidationError("duplicate parameter '" + p.name + "'");
    if (p.lower > p.upper) {
      throw ValidationError("parameter '" + p.name + "' has lower bound " +
                            std::to_string(p.lower) + " > upper bound " + std::to_string(p.upper));
    }
  }
}

std::optional<std::size_t> ParameterSpace::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < params_.size(); ++i) {
    if (params_[i].name == name) return i;
  }
  return std::nullopt;
}

const ParameterSpec& ParameterSpace::at(std::string_view name) const {
  auto i = index_of(name);
  if (!i) throw ValidationError("unknown parameter '" + std::string(name) + "'");
  return params_[*i];
}

std::string ParameterSpace::to_text() const {
  std::ostringstream out;
  for (std::size_t i = 0; i < params_.size(); ++i) {
    if (i) out << "; ";
    out << params_[i].name << ": " << params_[i].lower << ".." << params_[i].upper;
  }
  return out.str();
}

ParameterSpace parse_space(std::string_view text) {
  std::vector<ParameterSpec> specs;
  std::string cleaned;
  // Strip comments line by line, then split on both separators.
  std::istringstream lines{std::string(text)};
  for (std::string line; std::getline(lines, line);) {
    if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
    cleaned += line;
    cleaned += ';';
  }
  std::string_view rest = cleaned;
  while (!rest.empty()) {
    auto sep = rest.find(';');
    auto entry = trim(rest.substr(0, sep));
    rest = sep == std::string_view::npos ? std::string_view{} : rest.substr(sep + 1);
    if (entry.empty()) continue;
    auto colon = entry.find(':');
    if (colon == std::string_view::npos) {
      throw ParseError("expected 'name: lower..upper', got '" + std::string(entry) + "'");
    }
    auto name = trim(entry.substr(0, colon));
    auto range = trim(entry.substr(colon + 1));
    if (!is_identifier(name)) throw ParseError("bad parameter name '" + std::string(name) + "'");
    auto dots = range.find("..");
    if (dots == std::string_view::npos) {
      throw ParseError("expected 'lower..upper' in '" + std::string(entry) + "'");
    }
    specs.push_back({std::string(name), parse_int(range.substr(0, dots), entry),
                     parse_int(range.substr(dots + 2), entry)});
  }
  return ParameterSpace(std::move(specs));
}

std::string GeneratorConfiguration::to_text() const {
  std::string out;
  for (const auto& [k, v] : assignment) {
    if (!out.empty()) out += ',';
    out += k + "=" + std::to_string(v);
  }
  return out;
}

bool belongs_to(const GeneratorConfiguration& config, const ParameterSpace& space) {
  if (config.assignment.size() != space.size()) return false;
  for (const auto& p : space.params()) {
    auto it = config.assignment.find(p.name);
    if (it == config.assignment.end() || it->second < p.lower || it->second > p.upper) return false;
  }
  return true;
}

SamplingModel initial_sampling_model(const ParameterSpace& space) {
  SamplingModel model;
  for (const auto& p : space.params()) {
    const double width = static_cast<double>(p.upper - p.lower);
    model.params.push_back({static_cast<double>(p.lower) + width / 2.0,
                            std::max(width / 2.0, kSpreadFloor)});
  }
  return model;
}

GeneratorConfiguration sample_uniform(const ParameterSpace& space, Rng& rng) {
  GeneratorConfiguration config;
  for (const auto& p : space.params()) config.assignment[p.name] = rng.uniform_int(p.lower, p.upper);
  return config;
}

std::int64_t round_toward_center(double x, double center) {
  const double fl = std::floor(x);
  const double frac = x - fl;
  if (frac < 0.5) return static_cast<std::int64_t>(fl);
  if (frac > 0.5) return static_cast<std::int64_t>(fl) + 1;
  return static_cast<std::int64_t>(center < x ? fl : fl + 1);
}

namespace {

// Rejection-sample the continuous range covered by the integer domain; a
// sample that keeps missing falls back to clamping.
std::int64_t sample_truncated(const ParameterSpec& p, double center, double spread, Rng& rng) {
  constexpr int kMaxTries = 256;
  const double lo = static_cast<double>(p.lower) - 0.5;
  const double hi = static_cast<double>(p.upper) + 0.5;
  double x = center;
  for (int t = 0; t < kMaxTries; ++t) {
    x = center + spread * rng.normal();
    if (x >= lo && x <= hi) break;
  }
  const auto v = round_toward_center(x, center);
  return std::clamp(v, p.lower, p.upper);
}

}  // namespace

GeneratorConfiguration sample_from_model(const ParameterSpace& space, const SamplingModel& model,
                                         Rng& rng) {
  if (model.params.size() != space.size()) {
    throw ValidationError("sampling model does not cover the parameter space");
  }
  const std::vector<double>* centers = nullptr;
  if (!model.elite_centers.empty()) {
    const auto pick = rng.uniform_int(0, static_cast<std::int64_t>(model.elite_centers.size()) - 1);
    centers = &model.elite_centers[static_cast<std::size_t>(pick)];
  }
  GeneratorConfiguration config;
  for (std::size_t i = 0; i < space.size(); ++i) {
    const auto& p = space.params()[i];
    const double center = centers ? (*centers)[i] : model.params[i].center;
    config.assignment[p.name] = sample_truncated(p, center, model.params[i].spread, rng);
  }
  return config;
}

SamplingModel update_sampling_model(const SamplingModel& model,
                                    const std::vector<GeneratorConfiguration>& elites,
                                    const ParameterSpace& space, int iteration, double decay) {
  if (elites.empty()) throw ValidationError("update_sampling_model needs at least one elite");
  SamplingModel next;
  next.iteration = iteration;
  for (const auto& e : elites) {
    std::vector<double> c;
    c.reserve(space.size());
    for (const auto& p : space.params()) c.push_back(static_cast<double>(e.value(p.name)));
    next.elite_centers.push_back(std::move(c));
  }
  for (std::size_t i = 0; i < space.size(); ++i) {
    const double spread = model.params.at(i).spread;
    const double decayed = spread <= kSpreadFloor ? spread : std::max(spread * decay, kSpreadFloor);
    next.params.push_back({next.elite_centers.front()[i], decayed});
  }
  return next;
}

}  // namespace instgen
