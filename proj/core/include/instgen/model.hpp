#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "instgen/instance.hpp"
#include "instgen/space.hpp"

namespace instgen {

/// Exact rational used when evaluating constraints; keeps `a / b = c`
/// equivalent to `a = c * b`.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  Rational() = default;
  Rational(std::int64_t n) : num(n) {}  // NOLINT(google-explicit-constructor)
  Rational(std::int64_t n, std::int64_t d);

  bool is_integer() const { return den == 1; }
  Rational operator+(const Rational& o) const;
  Rational operator-(const Rational& o) const;
  Rational operator*(const Rational& o) const;
  Rational operator/(const Rational& o) const;
  Rational operator-() const { return {-num, den}; }
  bool operator==(const Rational& o) const { return num == o.num && den == o.den; }
  bool operator<(const Rational& o) const;
};

enum class ExprKind {
  IntLit,
  BoolLit,
  Ident,
  Index,     // args[0][args[1]], 1-based
  Neg,
  Add,
  Sub,
  Mul,
  Div,
  Eq,
  Ne,
  Lt,
  Le,
  Gt,
  Ge,
  In,        // args[0] in args[1]
  Range,     // args[0]..args[1], set-valued
  SetLit,
  And,
  Or,
  Implies,
  Not,
  Card,      // |args[0]|
  SumArray,  // sum(args[0])
  SumComp,   // sum(name in args[0]..args[1])(args[2])
  Forall,    // forall(name in args[0]..args[1])(args[2])
  Exists,
  AllDiff,   // alldifferent(args[0])
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  ExprKind kind;
  std::int64_t value = 0;  // IntLit, BoolLit
  std::string name;        // Ident, loop variable of comprehensions
  std::vector<ExprPtr> args;
};

std::string to_string(const Expr& e);

enum class VarKind { Int, IntArray, IntSet, SetArray };

/// Decision variable of a generator model. `length` is null for scalars;
/// bounds are element bounds (for sets, the universe).
struct DecisionVar {
  std::string name;
  VarKind kind = VarKind::Int;
  ExprPtr length;
  ExprPtr lower;
  ExprPtr upper;
};

/// A parameterised constraint model whose solutions are instance data.
///
/// Text format (whitespace-insensitive, `#` or `$` comments):
///
///     param n_tasks_t: 1..60
///     find succ: array[n_tasks_t] of set of int(2..n_tasks_t)
///     such that sum(t in 1..n_tasks_t)(|succ[t]|) / n_tasks_t = s_density
///
/// Variable types are `int(lo..hi)`, `array[len] of int(lo..hi)`,
/// `set of int(lo..hi)` and `array[len] of set of int(lo..hi)`.
/// Expressions: integer literals, `+ - * /`, comparisons `= != < <= > >=`,
/// `in` (set or `lo..hi`), `/\`, `\/`, `->`, `not`, `|s|`, `sum(arr)`,
/// `sum(i in lo..hi)(e)`, `forall(...)(c)`, `exists(...)(c)`,
/// `alldifferent(arr)`, set literals `{1, 2}` and 1-based indexing.
class GeneratorModel {
 public:
  GeneratorModel(ParameterSpace space, std::vector<DecisionVar> vars,
                 std::vector<ExprPtr> constraints);

  const ParameterSpace& space() const { return space_; }
  const std::vector<DecisionVar>& decision_vars() const { return vars_; }
  const std::vector<ExprPtr>& constraints() const { return constraints_; }
  const DecisionVar* find_var(std::string_view name) const;

  /// Replaces the parameter bounds (names must match exactly).
  GeneratorModel with_space(ParameterSpace space) const;

 private:
  ParameterSpace space_;
  std::vector<DecisionVar> vars_;
  std::vector<ExprPtr> constraints_;
};

/// Throws ParseError on bad syntax, ValidationError on unknown identifiers
/// or duplicate declarations.
GeneratorModel parse_generator_model(std::string_view text);

/// Parses a single expression (used by tests and the CLI).
ExprPtr parse_expression(std::string_view text);

/// True iff every constraint holds under config and values.
/// Throws EvalError on missing or mistyped values.
bool check_assignment(const GeneratorModel& model, const GeneratorConfiguration& config,
                      const ValueMap& values);

}  // namespace instgen
