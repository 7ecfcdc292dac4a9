#include "instgen/model.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "instgen/errors.hpp"

namespace instgen {

// ---------------------------------------------------------------------------
// Rational

namespace {

std::int64_t checked(__int128 v) {
  if (v > INT64_MAX || v < INT64_MIN) throw EvalError("integer overflow in constraint arithmetic");
  return static_cast<std::int64_t>(v);
}

Rational make_rational(__int128 n, __int128 d) {
  if (d == 0) throw EvalError("division by zero");
  if (d < 0) {
    n = -n;
    d = -d;
  }
  __int128 a = n < 0 ? -n : n;
  __int128 b = d;
  while (b != 0) {
    auto t = a % b;
    a = b;
    b = t;
  }
  if (a > 1) {
    n /= a;
    d /= a;
  }
  Rational r;
  r.num = checked(n);
  r.den = checked(d);
  return r;
}

}  // namespace

Rational::Rational(std::int64_t n, std::int64_t d) { *this = make_rational(n, d); }

Rational Rational::operator+(const Rational& o) const {
  return make_rational(static_cast<__int128>(num) * o.den + static_cast<__int128>(o.num) * den,
                       static_cast<__int128>(den) * o.den);
}
Rational Rational::operator-(const Rational& o) const { return *this + (-o); }
Rational Rational::operator*(const Rational& o) const {
  return make_rational(static_cast<__int128>(num) * o.num, static_cast<__int128>(den) * o.den);
}
Rational Rational::operator/(const Rational& o) const {
  return make_rational(static_cast<__int128>(num) * o.den, static_cast<__int128>(den) * o.num);
}
bool Rational::operator<(const Rational& o) const {
  return static_cast<__int128>(num) * o.den < static_cast<__int128>(o.num) * den;
}

// ---------------------------------------------------------------------------
// Printing

namespace {

const char* op_symbol(ExprKind k) {
  switch (k) {
    case ExprKind::Add: return "+";
    case ExprKind::Sub: return "-";
    case ExprKind::Mul: return "*";
    case ExprKind::Div: return "/";
    case ExprKind::Eq: return "=";
    case ExprKind::Ne: return "!=";
    case ExprKind::Lt: return "<";
    case ExprKind::Le: return "<=";
    case ExprKind::Gt: return ">";
    case ExprKind::Ge: return ">=";
    case ExprKind::In: return "in";
    case ExprKind::Range: return "..";
    case ExprKind::And: return "/\\";
    case ExprKind::Or: return "\\/";
    case ExprKind::Implies: return "->";
    default: return "?";
  }
}

}  // namespace

std::string to_string(const Expr& e) {
  auto a = [&](std::size_t i) { return to_string(*e.args[i]); };
  switch (e.kind) {
    case ExprKind::IntLit: return std::to_string(e.value);
    case ExprKind::BoolLit: return e.value ? "true" : "false";
    case ExprKind::Ident: return e.name;
    case ExprKind::Index: return a(0) + "[" + a(1) + "]";
    case ExprKind::Neg: return "-(" + a(0) + ")";
    case ExprKind::Not: return "not (" + a(0) + ")";
    case ExprKind::Card: return "|" + a(0) + "|";
    case ExprKind::SumArray: return "sum(" + a(0) + ")";
    case ExprKind::AllDiff: return "alldifferent(" + a(0) + ")";
    case ExprKind::SetLit: {
      std::string s = "{";
      for (std::size_t i = 0; i < e.args.size(); ++i) s += (i ? ", " : "") + a(i);
      return s + "}";
    }
    case ExprKind::SumComp:
    case ExprKind::Forall:
    case ExprKind::Exists: {
      const char* head = e.kind == ExprKind::SumComp ? "sum" : e.kind == ExprKind::Forall ? "forall" : "exists";
      return std::string(head) + "(" + e.name + " in " + a(0) + ".." + a(1) + ")(" + a(2) + ")";
    }
    default: return "(" + a(0) + " " + op_symbol(e.kind) + " " + a(1) + ")";
  }
}

// ---------------------------------------------------------------------------
// Lexer and parser

namespace {

struct Token {
  enum Type { End, Int, Ident, Sym } type = End;
  std::string text;
  std::int64_t value = 0;
  int line = 1;
};

std::vector<Token> tokenize(std::string_view src) {
  static const char* kMulti[] = {"..", "/\\", "\\/", "!=", "<=", ">=", "->", "=="};
  std::vector<Token> out;
  int line = 1;
  std::size_t i = 0;
  while (i < src.size()) {
    char c = src[i];
    if (c == '\n') {
      ++line;
      ++i;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == '#' || c == '$') {
      while (i < src.size() && src[i] != '\n') ++i;
      continue;
    }
    Token t;
    t.line = line;
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      t.type = Token::Int;
      t.text = std::string(src.substr(i, j - i));
      auto [p, ec] = std::from_chars(src.data() + i, src.data() + j, t.value);
      if (ec != std::errc{}) throw ParseError("integer literal out of range at line " + std::to_string(line));
      i = j;
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
      t.type = Token::Ident;
      t.text = std::string(src.substr(i, j - i));
      i = j;
    } else {
      t.type = Token::Sym;
      bool matched = false;
      for (const char* m : kMulti) {
        if (src.substr(i, 2) == m) {
          t.text = m;
          i += 2;
          matched = true;
          break;
        }
      }
      if (!matched) {
        if (std::string_view("=<>+-*/()[]{}|,:").find(c) == std::string_view::npos) {
          throw ParseError(std::string("unexpected character '") + c + "' at line " + std::to_string(line));
        }
        t.text = std::string(1, c);
        ++i;
      }
      if (t.text == "==") t.text = "=";
    }
    out.push_back(std::move(t));
  }
  Token end;
  end.line = line;
  out.push_back(end);
  return out;
}

ExprPtr node(ExprKind k, std::vector<ExprPtr> args = {}, std::string name = {}, std::int64_t v = 0) {
  auto e = std::make_shared<Expr>();
  e->kind = k;
  e->args = std::move(args);
  e->name = std::move(name);
  e->value = v;
  return e;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  bool at_end() const { return peek().type == Token::End; }

  GeneratorModel parse_model() {
    std::vector<ParameterSpec> params;
    std::vector<DecisionVar> vars;
    std::vector<ExprPtr> constraints;
    while (!at_end()) {
      if (accept_word("param") || accept_word("given")) {
        ParameterSpec p;
        p.name = expect_ident();
        expect(":");
        if (accept_word("int")) {
          expect("(");
          p.lower = signed_int();
          expect("..");
          p.upper = signed_int();
          expect(")");
        } else {
          p.lower = signed_int();
          expect("..");
          p.upper = signed_int();
        }
        params.push_back(std::move(p));
      } else if (accept_word("find")) {
        vars.push_back(parse_decl());
      } else if (accept_word("such")) {
        expect_word("that");
        constraints.push_back(parse_expr());
        while (accept(",")) constraints.push_back(parse_expr());
      } else if (accept_word("constraint")) {
        constraints.push_back(parse_expr());
      } else {
        fail("expected 'param', 'find' or 'such that'");
      }
    }
    return GeneratorModel(ParameterSpace(std::move(params)), std::move(vars), std::move(constraints));
  }

  ExprPtr parse_expr() { return parse_implies(); }

 private:
  const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  [[noreturn]] void fail(const std::string& what) const {
    const auto& t = peek();
    throw ParseError(what + " at line " + std::to_string(t.line) +
                     (t.type == Token::End ? " (end of input)" : " near '" + t.text + "'"));
  }
  bool is_sym(const char* s, std::size_t k = 0) const {
    return peek(k).type == Token::Sym && peek(k).text == s;
  }
  bool is_word(const char* s, std::size_t k = 0) const {
    return peek(k).type == Token::Ident && peek(k).text == s;
  }
  bool accept(const char* s) {
    if (!is_sym(s)) return false;
    ++pos_;
    return true;
  }
  bool accept_word(const char* s) {
    if (!is_word(s)) return false;
    ++pos_;
    return true;
  }
  void expect(const char* s) {
    if (!accept(s)) fail(std::string("expected '") + s + "'");
  }
  void expect_word(const char* s) {
    if (!accept_word(s)) fail(std::string("expected '") + s + "'");
  }
  std::string expect_ident() {
    if (peek().type != Token::Ident || is_reserved(peek().text)) fail("expected identifier");
    return toks_[pos_++].text;
  }
  std::int64_t signed_int() {
    const bool neg = accept("-");
    if (peek().type != Token::Int) fail("expected integer");
    auto v = toks_[pos_++].value;
    return neg ? -v : v;
  }
  static bool is_reserved(const std::string& w) {
    static const std::set<std::string> kWords = {
        "param", "given", "find", "such", "that", "constraint", "array", "of", "int", "set",
        "sum", "forall", "exists", "alldifferent", "in", "true", "false", "not"};
    return kWords.contains(w);
  }

  DecisionVar parse_decl() {
    DecisionVar v;
    v.name = expect_ident();
    expect(":");
    bool array = false;
    if (accept_word("array")) {
      expect("[");
      v.length = parse_expr();
      expect("]");
      expect_word("of");
      array = true;
    }
    bool set = false;
    if (accept_word("set")) {
      expect_word("of");
      set = true;
    }
    expect_word("int");
    expect("(");
    v.lower = parse_add();
    expect("..");
    v.upper = parse_add();
    expect(")");
    v.kind = array ? (set ? VarKind::SetArray : VarKind::IntArray) : (set ? VarKind::IntSet : VarKind::Int);
    return v;
  }

  ExprPtr parse_implies() {
    auto lhs = parse_or();
    if (accept("->")) return node(ExprKind::Implies, {lhs, parse_implies()});
    return lhs;
  }
  ExprPtr parse_or() {
    auto lhs = parse_and();
    while (accept("\\/")) lhs = node(ExprKind::Or, {lhs, parse_and()});
    return lhs;
  }
  ExprPtr parse_and() {
    auto lhs = parse_not();
    while (accept("/\\")) lhs = node(ExprKind::And, {lhs, parse_not()});
    return lhs;
  }
  ExprPtr parse_not() {
    if (accept_word("not")) return node(ExprKind::Not, {parse_not()});
    return parse_cmp();
  }
  ExprPtr parse_cmp() {
    auto lhs = parse_add();
    static const std::pair<const char*, ExprKind> kOps[] = {
        {"=", ExprKind::Eq}, {"!=", ExprKind::Ne}, {"<=", ExprKind::Le},
        {">=", ExprKind::Ge}, {"<", ExprKind::Lt}, {">", ExprKind::Gt}};
    for (const auto& [s, k] : kOps) {
      if (accept(s)) return node(k, {lhs, parse_add()});
    }
    if (accept_word("in")) {
      auto rhs = parse_add();
      if (accept("..")) rhs = node(ExprKind::Range, {rhs, parse_add()});
      return node(ExprKind::In, {lhs, rhs});
    }
    return lhs;
  }
  ExprPtr parse_add() {
    auto lhs = parse_mul();
    while (true) {
      if (accept("+")) {
        lhs = node(ExprKind::Add, {lhs, parse_mul()});
      } else if (accept("-")) {
        lhs = node(ExprKind::Sub, {lhs, parse_mul()});
      } else {
        return lhs;
      }
    }
  }
  ExprPtr parse_mul() {
    auto lhs = parse_unary();
    while (true) {
      if (accept("*")) {
        lhs = node(ExprKind::Mul, {lhs, parse_unary()});
      } else if (accept("/")) {
        lhs = node(ExprKind::Div, {lhs, parse_unary()});
      } else {
        return lhs;
      }
    }
  }
  ExprPtr parse_unary() {
    if (accept("-")) return node(ExprKind::Neg, {parse_unary()});
    return parse_postfix();
  }
  ExprPtr parse_postfix() {
    auto e = parse_primary();
    while (accept("[")) {
      auto idx = parse_expr();
      expect("]");
      e = node(ExprKind::Index, {e, idx});
    }
    return e;
  }
  ExprPtr parse_comprehension(ExprKind kind) {
    expect("(");
    auto var = expect_ident();
    expect_word("in");
    auto lo = parse_add();
    expect("..");
    auto hi = parse_add();
    expect(")");
    expect("(");
    auto body = parse_expr();
    expect(")");
    return node(kind, {lo, hi, body}, var);
  }
  ExprPtr parse_primary() {
    const auto& t = peek();
    if (t.type == Token::Int) {
      ++pos_;
      return node(ExprKind::IntLit, {}, {}, t.value);
    }
    if (accept_word("true")) return node(ExprKind::BoolLit, {}, {}, 1);
    if (accept_word("false")) return node(ExprKind::BoolLit, {}, {}, 0);
    if (is_word("sum")) {
      ++pos_;
      if (is_sym("(") && peek(1).type == Token::Ident && is_word("in", 2)) {
        return parse_comprehension(ExprKind::SumComp);
      }
      expect("(");
      auto arr = parse_expr();
      expect(")");
      return node(ExprKind::SumArray, {arr});
    }
    if (accept_word("forall")) return parse_comprehension(ExprKind::Forall);
    if (accept_word("exists")) return parse_comprehension(ExprKind::Exists);
    if (accept_word("alldifferent")) {
      expect("(");
      auto arr = parse_expr();
      expect(")");
      return node(ExprKind::AllDiff, {arr});
    }
    if (accept("(")) {
      auto e = parse_expr();
      expect(")");
      return e;
    }
    if (accept("|")) {
      auto e = parse_add();
      expect("|");
      return node(ExprKind::Card, {e});
    }
    if (accept("{")) {
      std::vector<ExprPtr> elems;
      if (!accept("}")) {
        do {
          elems.push_back(parse_add());
        } while (accept(","));
        expect("}");
      }
      return node(ExprKind::SetLit, std::move(elems));
    }
    if (t.type == Token::Ident && !is_reserved(t.text)) {
      ++pos_;
      return node(ExprKind::Ident, {}, t.text);
    }
    fail("expected expression");
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

void check_identifiers(const Expr& e, const std::set<std::string>& known,
                       std::vector<std::string>& scope) {
  if (e.kind == ExprKind::Ident) {
    if (!known.contains(e.name) && std::find(scope.begin(), scope.end(), e.name) == scope.end()) {
      throw ValidationError("unknown identifier '" + e.name + "'");
    }
    return;
  }
  if (e.kind == ExprKind::SumComp || e.kind == ExprKind::Forall || e.kind == ExprKind::Exists) {
    check_identifiers(*e.args[0], known, scope);
    check_identifiers(*e.args[1], known, scope);
    scope.push_back(e.name);
    check_identifiers(*e.args[2], known, scope);
    scope.pop_back();
    return;
  }
  for (const auto& a : e.args) check_identifiers(*a, known, scope);
}

void check_param_only(const ExprPtr& e, const ParameterSpace& space, const std::string& where) {
  if (!e) return;
  std::set<std::string> known;
  for (const auto& p : space.params()) known.insert(p.name);
  std::vector<std::string> scope;
  try {
    check_identifiers(*e, known, scope);
  } catch (const ValidationError& err) {
    throw ValidationError(std::string(err.what()) + " in " + where + " (only parameters allowed)");
  }
}

}  // namespace

ExprPtr parse_expression(std::string_view text) {
  Parser p(tokenize(text));
  auto e = p.parse_expr();
  if (!p.at_end()) throw ParseError("trailing tokens after expression");
  return e;
}

// ---------------------------------------------------------------------------
// GeneratorModel

GeneratorModel::GeneratorModel(ParameterSpace space, std::vector<DecisionVar> vars,
                               std::vector<ExprPtr> constraints)
    : space_(std::move(space)), vars_(std::move(vars)), constraints_(std::move(constraints)) {
  std::set<std::string> known;
  for (const auto& p : space_.params()) known.insert(p.name);
  for (const auto& v : vars_) {
    if (!known.insert(v.name).second) throw ValidationError("duplicate declaration '" + v.name + "'");
    check_param_only(v.length, space_, "shape of '" + v.name + "'");
    check_param_only(v.lower, space_, "bounds of '" + v.name + "'");
    check_param_only(v.upper, space_, "bounds of '" + v.name + "'");
  }
  for (const auto& c : constraints_) {
    std::vector<std::string> scope;
    check_identifiers(*c, known, scope);
  }
}

const DecisionVar* GeneratorModel::find_var(std::string_view name) const {
  for (const auto& v : vars_) {
    if (v.name == name) return &v;
  }
  return nullptr;
}

GeneratorModel GeneratorModel::with_space(ParameterSpace space) const {
  if (space.size() != space_.size()) throw ValidationError("parameter set does not match the generator model");
  for (const auto& p : space_.params()) {
    if (!space.index_of(p.name)) throw ValidationError("parameter '" + p.name + "' missing from override");
  }
  return GeneratorModel(std::move(space), vars_, constraints_);
}

GeneratorModel parse_generator_model(std::string_view text) {
  return Parser(tokenize(text)).parse_model();
}

// ---------------------------------------------------------------------------
// Concrete evaluation

namespace {

using EvalValue = std::variant<Rational, bool, IntSet, IntArray, SetArray>;

class Evaluator {
 public:
  Evaluator(const GeneratorConfiguration& config, const ValueMap& values)
      : config_(config), values_(values) {}

  bool eval_bool(const Expr& e) {
    auto v = eval(e);
    if (auto* b = std::get_if<bool>(&v)) return *b;
    throw EvalError("expected a boolean: " + to_string(e));
  }

  std::int64_t eval_int(const Expr& e) {
    auto r = eval_num(e);
    if (!r.is_integer()) throw EvalError("expected an integral value: " + to_string(e));
    return r.num;
  }

 private:
  Rational eval_num(const Expr& e) {
    auto v = eval(e);
    if (auto* r = std::get_if<Rational>(&v)) return *r;
    throw EvalError("expected an integer: " + to_string(e));
  }
  IntSet eval_set(const Expr& e) {
    auto v = eval(e);
    if (auto* s = std::get_if<IntSet>(&v)) return *s;
    throw EvalError("expected a set: " + to_string(e));
  }

  EvalValue lookup(const std::string& name) {
    for (auto it = locals_.rbegin(); it != locals_.rend(); ++it) {
      if (it->first == name) return Rational(it->second);
    }
    if (auto it = config_.assignment.find(name); it != config_.assignment.end()) {
      return Rational(it->second);
    }
    auto it = values_.find(name);
    if (it == values_.end()) throw EvalError("no value for '" + name + "'");
    return std::visit([](const auto& x) -> EvalValue {
      using T = std::decay_t<decltype(x)>;
      if constexpr (std::is_same_v<T, std::int64_t>) {
        return Rational(x);
      } else {
        return x;
      }
    }, it->second);
  }

  template <typename F>
  void loop(const Expr& e, F&& body) {
    const auto lo = eval_int(*e.args[0]);
    const auto hi = eval_int(*e.args[1]);
    for (auto i = lo; i <= hi; ++i) {
      locals_.emplace_back(e.name, i);
      const bool keep_going = body();
      locals_.pop_back();
      if (!keep_going) return;
    }
  }

  bool compare(ExprKind k, const Expr& a, const Expr& b) {
    auto va = eval(a);
    auto vb = eval(b);
    if (std::holds_alternative<IntSet>(va) && std::holds_alternative<IntSet>(vb) &&
        (k == ExprKind::Eq || k == ExprKind::Ne)) {
      const bool eq = std::get<IntSet>(va) == std::get<IntSet>(vb);
      return k == ExprKind::Eq ? eq : !eq;
    }
    auto* ra = std::get_if<Rational>(&va);
    auto* rb = std::get_if<Rational>(&vb);
    if (!ra || !rb) throw EvalError("comparison of non-integers: " + to_string(a) + " vs " + to_string(b));
    switch (k) {
      case ExprKind::Eq: return *ra == *rb;
      case ExprKind::Ne: return !(*ra == *rb);
      case ExprKind::Lt: return *ra < *rb;
      case ExprKind::Le: return !(*rb < *ra);
      case ExprKind::Gt: return *rb < *ra;
      default: return !(*ra < *rb);
    }
  }

  EvalValue eval(const Expr& e) {
    switch (e.kind) {
      case ExprKind::IntLit: return Rational(e.value);
      case ExprKind::BoolLit: return e.value != 0;
      case ExprKind::Ident: return lookup(e.name);
      case ExprKind::Index: {
        auto base = eval(*e.args[0]);
        const auto i = eval_int(*e.args[1]);
        if (auto* arr = std::get_if<IntArray>(&base)) {
          if (i < 1 || i > static_cast<std::int64_t>(arr->size())) throw EvalError("index out of range: " + to_string(e));
          return Rational((*arr)[static_cast<std::size_t>(i - 1)]);
        }
        if (auto* arr = std::get_if<SetArray>(&base)) {
          if (i < 1 || i > static_cast<std::int64_t>(arr->size())) throw EvalError("index out of range: " + to_string(e));
          return (*arr)[static_cast<std::size_t>(i - 1)];
        }
        throw EvalError("indexing a non-array: " + to_string(e));
      }
      case ExprKind::Neg: return -eval_num(*e.args[0]);
      case ExprKind::Add: return eval_num(*e.args[0]) + eval_num(*e.args[1]);
      case ExprKind::Sub: return eval_num(*e.args[0]) - eval_num(*e.args[1]);
      case ExprKind::Mul: return eval_num(*e.args[0]) * eval_num(*e.args[1]);
      case ExprKind::Div: return eval_num(*e.args[0]) / eval_num(*e.args[1]);
      case ExprKind::Eq:
      case ExprKind::Ne:
      case ExprKind::Lt:
      case ExprKind::Le:
      case ExprKind::Gt:
      case ExprKind::Ge: return compare(e.kind, *e.args[0], *e.args[1]);
      case ExprKind::In: {
        const auto x = eval_int(*e.args[0]);
        const auto& rhs = *e.args[1];
        if (rhs.kind == ExprKind::Range) {
          return eval_int(*rhs.args[0]) <= x && x <= eval_int(*rhs.args[1]);
        }
        return eval_set(rhs).contains(x);
      }
      case ExprKind::Range: {
        IntSet s;
        const auto lo = eval_int(*e.args[0]);
        const auto hi = eval_int(*e.args[1]);
        if (hi - lo > 1'000'000) throw EvalError("range too large to materialise: " + to_string(e));
        for (auto i = lo; i <= hi; ++i) s.insert(i);
        return s;
      }
      case ExprKind::SetLit: {
        IntSet s;
        for (const auto& a : e.args) s.insert(eval_int(*a));
        return s;
      }
      case ExprKind::And: return eval_bool(*e.args[0]) && eval_bool(*e.args[1]);
      case ExprKind::Or: return eval_bool(*e.args[0]) || eval_bool(*e.args[1]);
      case ExprKind::Implies: return !eval_bool(*e.args[0]) || eval_bool(*e.args[1]);
      case ExprKind::Not: return !eval_bool(*e.args[0]);
      case ExprKind::Card: return Rational(static_cast<std::int64_t>(eval_set(*e.args[0]).size()));
      case ExprKind::SumArray: {
        auto v = eval(*e.args[0]);
        auto* arr = std::get_if<IntArray>(&v);
        if (!arr) throw EvalError("sum over a non-integer array: " + to_string(e));
        Rational total;
        for (auto x : *arr) total = total + Rational(x);
        return total;
      }
      case ExprKind::SumComp: {
        Rational total;
        loop(e, [&] {
          total = total + eval_num(*e.args[2]);
          return true;
        });
        return total;
      }
      case ExprKind::Forall: {
        bool all = true;
        loop(e, [&] {
          all = eval_bool(*e.args[2]);
          return all;
        });
        return all;
      }
      case ExprKind::Exists: {
        bool any = false;
        loop(e, [&] {
          any = eval_bool(*e.args[2]);
          return !any;
        });
        return any;
      }
      case ExprKind::AllDiff: {
        auto v = eval(*e.args[0]);
        auto* arr = std::get_if<IntArray>(&v);
        if (!arr) throw EvalError("alldifferent over a non-integer array: " + to_string(e));
        std::set<std::int64_t> seen(arr->begin(), arr->end());
        return seen.size() == arr->size();
      }
    }
    throw EvalError("unhandled expression");
  }

  const GeneratorConfiguration& config_;
  const ValueMap& values_;
  std::vector<std::pair<std::string, std::int64_t>> locals_;
};

}  // namespace

namespace {

bool within(const IntSet& s, std::int64_t lo, std::int64_t hi) {
  return s.empty() || (*s.begin() >= lo && *s.rbegin() <= hi);
}

// Kind mismatches throw; shape or domain violations return false.
bool in_domain(const DecisionVar& var, const Value& value, Evaluator& ev) {
  const auto lo = ev.eval_int(*var.lower);
  const auto hi = ev.eval_int(*var.upper);
  const auto len = var.length ? ev.eval_int(*var.length) : 0;
  auto fits = [&](std::int64_t x) { return x >= lo && x <= hi; };
  switch (var.kind) {
    case VarKind::Int:
      if (auto* x = std::get_if<std::int64_t>(&value)) return fits(*x);
      break;
    case VarKind::IntArray:
      if (auto* a = std::get_if<IntArray>(&value)) {
        return static_cast<std::int64_t>(a->size()) == len && std::all_of(a->begin(), a->end(), fits);
      }
      break;
    case VarKind::IntSet:
      if (auto* s = std::get_if<IntSet>(&value)) return within(*s, lo, hi);
      break;
    case VarKind::SetArray:
      if (auto* a = std::get_if<SetArray>(&value)) {
        return static_cast<std::int64_t>(a->size()) == len &&
               std::all_of(a->begin(), a->end(), [&](const IntSet& s) { return within(s, lo, hi); });
      }
      // `[]` parses as an empty integer array.
      if (auto* a = std::get_if<IntArray>(&value); a && a->empty()) return len == 0;
      break;
  }
  throw EvalError("value of '" + var.name + "' has the wrong kind");
}

}  // namespace

bool check_assignment(const GeneratorModel& model, const GeneratorConfiguration& config,
                      const ValueMap& values) {
  Evaluator ev(config, values);
  for (const auto& v : model.decision_vars()) {
    auto it = values.find(v.name);
    if (it == values.end()) throw EvalError("no value for decision variable '" + v.name + "'");
    if (!in_domain(v, it->second, ev)) return false;
  }
  for (const auto& c : model.constraints()) {
    if (!ev.eval_bool(*c)) return false;
  }
  return true;
}

}  // namespace instgen
