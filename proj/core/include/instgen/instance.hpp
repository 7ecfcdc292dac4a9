#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace instgen {

using IntArray = std::vector<std::int64_t>;
using IntSet = std::set<std::int64_t>;
using SetArray = std::vector<IntSet>;

/// Data value of an instance entry: scalar, array, set or array of sets.
using Value = std::variant<std::int64_t, IntArray, IntSet, SetArray>;

/// Name-ordered instance data.
using ValueMap = std::map<std::string, Value>;

std::string format_value(const Value& v);

/// `name = value;` lines sorted by name. Same values give identical text.
std::string canonical_text(const ValueMap& values);

/// Inverse of canonical_text. Tolerates missing `;`, blank lines and `%` or
/// `#` comments. `[]` parses as an empty IntArray. Throws ParseError.
ValueMap parse_instance_text(std::string_view text);

/// Scalar lookup that throws CheckError when missing or not an integer.
std::int64_t get_int(const ValueMap& values, const std::string& name);
const IntArray& get_array(const ValueMap& values, const std::string& name);

struct Provenance {
  std::string config_id;
  std::size_t sequence = 0;
};

/// Problem-instance data produced by solving a generator instance.
struct CandidateInstance {
  std::string id;                       // "<config id>-<sequence>"
  ValueMap values;                      // parameters and decision variables
  std::vector<std::string> decision_vars;
  Provenance provenance;

  /// Full instance file body.
  std::string canonical() const { return canonical_text(values); }
  /// Canonical text of the decision variables only (the negative-table key).
  std::string decision_key() const;
};

}  // namespace instgen
