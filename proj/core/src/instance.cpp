#include "instgen/instance.hpp"

#include <cctype>
#include <charconv>
#include <sstream>

#include "instgen/errors.hpp"

namespace instgen {

namespace {

void format_set(std::ostream& out, const IntSet& s) {
  out << '{';
  bool first = true;
  for (auto v : s) {
    if (!first) out << ", ";
    out << v;
    first = false;
  }
  out << '}';
}

class ValueParser {
 public:
  explicit ValueParser(std::string_view s) : s_(s) {}

  Value parse() {
    skip_ws();
    Value v;
    if (peek() == '[') {
      v = parse_array();
    } else if (peek() == '{') {
      v = parse_set();
    } else {
      v = parse_int();
    }
    skip_ws();
    if (pos_ != s_.size()) fail("trailing characters");
    return v;
  }

 private:
  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(what + " in value '" + std::string(s_) + "'");
  }
  void expect(char c) {
    skip_ws();
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  std::int64_t parse_int() {
    skip_ws();
    std::size_t start = pos_;
    if (peek() == '-' || peek() == '+') ++pos_;
    while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
    std::int64_t v = 0;
    const char* first = s_.data() + start;
    if (*first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, s_.data() + pos_, v);
    if (ec != std::errc{} || ptr != s_.data() + pos_ || first == ptr) fail("bad integer");
    return v;
  }

  IntSet parse_set() {
    expect('{');
    IntSet out;
    skip_ws();
    if (peek() == '}') {
      ++pos_;
      return out;
    }
    while (true) {
      const auto lo = parse_int();
      skip_ws();
      if (s_.substr(pos_, 2) == "..") {
        pos_ += 2;
        const auto hi = parse_int();
        for (auto x = lo; x <= hi; ++x) out.insert(x);
      } else {
        out.insert(lo);
      }
      skip_ws();
      if (peek() == ',') {
        ++pos_;
        continue;
      }
      expect('}');
      return out;
    }
  }

  Value parse_array() {
    expect('[');
    skip_ws();
    if (peek() == ']') {
      ++pos_;
      return IntArray{};
    }
    if (peek() == '{') {
      SetArray out;
      while (true) {
        out.push_back(parse_set());
        skip_ws();
        if (peek() == ',') {
          ++pos_;
          continue;
        }
        expect(']');
        return out;
      }
    }
    IntArray out;
    while (true) {
      out.push_back(parse_int());
      skip_ws();
      if (peek() == ',') {
        ++pos_;
        continue;
      }
      expect(']');
      return out;
    }
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string format_value(const Value& v) {
  std::ostringstream out;
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, std::int64_t>) {
          out << x;
        } else if constexpr (std::is_same_v<T, IntArray>) {
          out << '[';
          for (std::size_t i = 0; i < x.size(); ++i) out << (i ? ", " : "") << x[i];
          out << ']';
        } else if constexpr (std::is_same_v<T, IntSet>) {
          format_set(out, x);
        } else {
          out << '[';
          for (std::size_t i = 0; i < x.size(); ++i) {
            if (i) out << ", ";
            format_set(out, x[i]);
          }
          out << ']';
        }
      },
      v);
  return out.str();
}

std::string canonical_text(const ValueMap& values) {
  std::string out;
  for (const auto& [name, v] : values) out += name + " = " + format_value(v) + ";\n";
  return out;
}

ValueMap parse_instance_text(std::string_view text) {
  ValueMap out;
  // Statements end at ';' or end of line; a value may not span lines unless
  // the statement is ';'-terminated.
  std::string buf;
  auto flush = [&](std::string_view stmt) {
    auto b = stmt.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return;
    stmt = stmt.substr(b);
    auto eq = stmt.find('=');
    if (eq == std::string_view::npos) throw ParseError("expected 'name = value' in '" + std::string(stmt) + "'");
    auto name = stmt.substr(0, eq);
    while (!name.empty() && std::isspace(static_cast<unsigned char>(name.back()))) name.remove_suffix(1);
    if (name.empty()) throw ParseError("missing name in '" + std::string(stmt) + "'");
    if (!out.emplace(std::string(name), ValueParser(stmt.substr(eq + 1)).parse()).second) {
      throw ParseError("duplicate assignment to '" + std::string(name) + "'");
    }
  };
  int depth = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if ((c == '%' || c == '#') ) {
      while (i < text.size() && text[i] != '\n') ++i;
      c = '\n';
    }
    if (c == '[' || c == '{') ++depth;
    if (c == ']' || c == '}') --depth;
    if (c == ';' || (c == '\n' && depth <= 0)) {
      flush(buf);
      buf.clear();
      depth = 0;
      continue;
    }
    buf += c;
  }
  flush(buf);
  return out;
}

std::int64_t get_int(const ValueMap& values, const std::string& name) {
  auto it = values.find(name);
  if (it == values.end()) throw CheckError("missing value '" + name + "'");
  if (const auto* v = std::get_if<std::int64_t>(&it->second)) return *v;
  throw CheckError("value '" + name + "' is not an integer");
}

const IntArray& get_array(const ValueMap& values, const std::string& name) {
  auto it = values.find(name);
  if (it == values.end()) throw CheckError("missing value '" + name + "'");
  if (const auto* v = std::get_if<IntArray>(&it->second)) return *v;
  throw CheckError("value '" + name + "' is not an integer array");
}

std::string CandidateInstance::decision_key() const {
  ValueMap sub;
  for (const auto& n : decision_vars) {
    if (auto it = values.find(n); it != values.end()) sub.emplace(n, it->second);
  }
  return canonical_text(sub);
}

}  // namespace instgen
