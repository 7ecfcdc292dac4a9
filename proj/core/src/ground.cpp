#include "instgen/ground.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>

#include "instgen/errors.hpp"

namespace instgen {

namespace {

// Grounded expression over CSP variables.
enum class GKind { Const, Var, Add, Mul, Div, Neg, BoolConst, Cmp, And, Or, Not, AllDiff, Member };

struct GNode;
using GPtr = std::shared_ptr<const GNode>;

struct GNode {
  GKind kind;
  Rational c;           // Const
  bool b = false;       // BoolConst
  int var = -1;         // Var
  ExprKind cmp = ExprKind::Eq;
  std::vector<GPtr> args;
  // Member: args[0] in {element | indicator(element) = 1}
  std::vector<std::pair<std::int64_t, GPtr>> members;
};

GPtr gconst(Rational c) {
  auto n = std::make_shared<GNode>();
  n->kind = GKind::Const;
  n->c = c;
  return n;
}
GPtr gbool(bool b) {
  auto n = std::make_shared<GNode>();
  n->kind = GKind::BoolConst;
  n->b = b;
  return n;
}
GPtr gvar(int v) {
  auto n = std::make_shared<GNode>();
  n->kind = GKind::Var;
  n->var = v;
  return n;
}
GPtr gnode(GKind k, std::vector<GPtr> args) {
  auto n = std::make_shared<GNode>();
  n->kind = k;
  n->args = std::move(args);
  return n;
}
bool is_const(const GPtr& g) { return g->kind == GKind::Const; }
bool is_bconst(const GPtr& g, bool v) { return g->kind == GKind::BoolConst && g->b == v; }

struct SymSet {
  std::vector<std::pair<std::int64_t, GPtr>> elems;  // ascending, indicator 0/1
};
using SymArray = std::vector<GPtr>;
using SymSetArray = std::vector<SymSet>;

struct SymInt {
  GPtr g;
};
struct SymBool {
  GPtr g;
};
using Sym = std::variant<SymInt, SymBool, SymSet, SymArray, SymSetArray>;

bool compare_const(ExprKind k, const Rational& a, const Rational& b) {
  switch (k) {
    case ExprKind::Eq: return a == b;
    case ExprKind::Ne: return !(a == b);
    case ExprKind::Lt: return a < b;
    case ExprKind::Le: return !(b < a);
    case ExprKind::Gt: return b < a;
    default: return !(a < b);
  }
}

GPtr gcmp(ExprKind k, GPtr a, GPtr b) {
  if (is_const(a) && is_const(b)) return gbool(compare_const(k, a->c, b->c));
  auto n = std::make_shared<GNode>();
  n->kind = GKind::Cmp;
  n->cmp = k;
  n->args = {std::move(a), std::move(b)};
  return n;
}

GPtr gand(std::vector<GPtr> parts) {
  std::vector<GPtr> keep;
  for (auto& p : parts) {
    if (is_bconst(p, false)) return gbool(false);
    if (is_bconst(p, true)) continue;
    if (p->kind == GKind::And) {
      keep.insert(keep.end(), p->args.begin(), p->args.end());
    } else {
      keep.push_back(std::move(p));
    }
  }
  if (keep.empty()) return gbool(true);
  if (keep.size() == 1) return keep.front();
  return gnode(GKind::And, std::move(keep));
}

GPtr gor(std::vector<GPtr> parts) {
  std::vector<GPtr> keep;
  for (auto& p : parts) {
    if (is_bconst(p, true)) return gbool(true);
    if (is_bconst(p, false)) continue;
    keep.push_back(std::move(p));
  }
  if (keep.empty()) return gbool(false);
  if (keep.size() == 1) return keep.front();
  return gnode(GKind::Or, std::move(keep));
}

GPtr gnot(GPtr a) {
  if (a->kind == GKind::BoolConst) return gbool(!a->b);
  return gnode(GKind::Not, {std::move(a)});
}

GPtr gadd(std::vector<GPtr> terms) {
  Rational constant;
  std::vector<GPtr> keep;
  for (auto& t : terms) {
    if (is_const(t)) {
      constant = constant + t->c;
    } else if (t->kind == GKind::Add) {
      for (const auto& inner : t->args) {
        if (is_const(inner)) {
          constant = constant + inner->c;
        } else {
          keep.push_back(inner);
        }
      }
    } else {
      keep.push_back(std::move(t));
    }
  }
  if (keep.empty()) return gconst(constant);
  if (!(constant == Rational(0))) keep.push_back(gconst(constant));
  if (keep.size() == 1) return keep.front();
  return gnode(GKind::Add, std::move(keep));
}

// ---------------------------------------------------------------------------
// Evaluation of grounded nodes on a complete assignment.

Rational geval_int(const GNode& g, std::span<const std::int64_t> x);

bool geval_bool(const GNode& g, std::span<const std::int64_t> x) {
  switch (g.kind) {
    case GKind::BoolConst: return g.b;
    case GKind::Cmp: return compare_const(g.cmp, geval_int(*g.args[0], x), geval_int(*g.args[1], x));
    case GKind::And:
      return std::all_of(g.args.begin(), g.args.end(), [&](const GPtr& a) { return geval_bool(*a, x); });
    case GKind::Or:
      return std::any_of(g.args.begin(), g.args.end(), [&](const GPtr& a) { return geval_bool(*a, x); });
    case GKind::Not: return !geval_bool(*g.args[0], x);
    case GKind::AllDiff: {
      std::vector<Rational> seen;
      for (const auto& a : g.args) {
        auto v = geval_int(*a, x);
        if (std::find(seen.begin(), seen.end(), v) != seen.end()) return false;
        seen.push_back(v);
      }
      return true;
    }
    case GKind::Member: {
      const auto v = geval_int(*g.args[0], x);
      if (!v.is_integer()) return false;
      for (const auto& [e, ind] : g.members) {
        if (e == v.num) return geval_int(*ind, x) == Rational(1);
      }
      return false;
    }
    default: throw EvalError("grounded node is not boolean");
  }
}

Rational geval_int(const GNode& g, std::span<const std::int64_t> x) {
  switch (g.kind) {
    case GKind::Const: return g.c;
    case GKind::Var: return Rational(x[static_cast<std::size_t>(g.var)]);
    case GKind::Add: {
      Rational s;
      for (const auto& a : g.args) s = s + geval_int(*a, x);
      return s;
    }
    case GKind::Mul: return geval_int(*g.args[0], x) * geval_int(*g.args[1], x);
    case GKind::Div: return geval_int(*g.args[0], x) / geval_int(*g.args[1], x);
    case GKind::Neg: return -geval_int(*g.args[0], x);
    default: throw EvalError("grounded node is not an integer");
  }
}

void collect_vars(const GNode& g, std::vector<int>& out) {
  if (g.kind == GKind::Var) out.push_back(g.var);
  for (const auto& a : g.args) collect_vars(*a, out);
  for (const auto& [e, ind] : g.members) collect_vars(*ind, out);
}

// ---------------------------------------------------------------------------
// Linearisation.

struct LinForm {
  std::map<int, Rational> coefs;
  Rational constant;
};

std::optional<LinForm> linearise(const GNode& g) {
  switch (g.kind) {
    case GKind::Const: return LinForm{{}, g.c};
    case GKind::Var: return LinForm{{{g.var, Rational(1)}}, Rational(0)};
    case GKind::Neg: {
      auto a = linearise(*g.args[0]);
      if (!a) return std::nullopt;
      for (auto& [v, c] : a->coefs) c = -c;
      a->constant = -a->constant;
      return a;
    }
    case GKind::Add: {
      LinForm out;
      for (const auto& t : g.args) {
        auto a = linearise(*t);
        if (!a) return std::nullopt;
        for (const auto& [v, c] : a->coefs) out.coefs[v] = out.coefs[v] + c;
        out.constant = out.constant + a->constant;
      }
      return out;
    }
    case GKind::Mul:
    case GKind::Div: {
      auto a = linearise(*g.args[0]);
      auto b = linearise(*g.args[1]);
      if (!a || !b) return std::nullopt;
      auto scale = [&](LinForm f, Rational k) {
        for (auto& [v, c] : f.coefs) c = c * k;
        f.constant = f.constant * k;
        return f;
      };
      if (g.kind == GKind::Div) {
        if (!b->coefs.empty()) return std::nullopt;
        if (b->constant == Rational(0)) throw ModelError("division by zero in constraint");
        return scale(*a, Rational(1) / b->constant);
      }
      if (a->coefs.empty()) return scale(*b, a->constant);
      if (b->coefs.empty()) return scale(*a, b->constant);
      return std::nullopt;
    }
    default: return std::nullopt;
  }
}

// ---------------------------------------------------------------------------
// Symbolic evaluation of the model AST.

class Grounder {
 public:
  Grounder(const GeneratorModel& model, const GeneratorConfiguration& config,
           std::chrono::steady_clock::time_point deadline)
      : model_(model), config_(config), deadline_(deadline) {}

  GroundedModel run() {
    GroundedModel out;
    for (const auto& p : model_.space().params()) {
      auto it = config_.assignment.find(p.name);
      if (it == config_.assignment.end()) throw ModelError("configuration misses parameter '" + p.name + "'");
      out.parameters[p.name] = it->second;
    }
    tick();
    for (const auto& dv : model_.decision_vars()) declare(dv, out);
    csp_ = &out.csp;
    for (const auto& c : model_.constraints()) post(to_bool(eval(*c)));
    return out;
  }

 private:
  void tick() {
    if ((++work_ & 0x3FF) == 0 || work_ == 1) {
      if (std::chrono::steady_clock::now() >= deadline_) throw GroundingTimeout{};
    }
  }

  std::int64_t const_int(const Expr& e, const std::string& what) {
    auto s = eval(e);
    auto* i = std::get_if<SymInt>(&s);
    if (!i || !is_const(i->g) || !i->g->c.is_integer()) {
      throw ModelError(what + " must be a constant integer: " + to_string(e));
    }
    return i->g->c.num;
  }

  void declare(const DecisionVar& dv, GroundedModel& out) {
    VarLayout lay;
    lay.name = dv.name;
    lay.kind = dv.kind;
    lay.lo = const_int(*dv.lower, "lower bound of '" + dv.name + "'");
    lay.hi = const_int(*dv.upper, "upper bound of '" + dv.name + "'");
    if (dv.length) {
      const auto len = const_int(*dv.length, "length of '" + dv.name + "'");
      if (len < 0) throw ModelError("negative length " + std::to_string(len) + " for '" + dv.name + "'");
      lay.length = static_cast<std::size_t>(len);
    }
    const bool is_set = dv.kind == VarKind::IntSet || dv.kind == VarKind::SetArray;
    const std::size_t universe =
        lay.hi >= lay.lo ? static_cast<std::size_t>(lay.hi - lay.lo + 1) : 0;
    const std::size_t per = is_set ? universe : 1;
    const auto count = static_cast<long double>(lay.length) * static_cast<long double>(per);
    if (count + static_cast<long double>(out.csp.num_variables()) > kMaxGroundVariables) {
      throw GroundingTimeout{};
    }
    for (std::size_t i = 0; i < lay.length; ++i) {
      tick();
      const auto prefix = dv.name + (dv.length ? "[" + std::to_string(i + 1) + "]" : "");
      if (is_set) {
        for (std::size_t k = 0; k < universe; ++k) {
          lay.csp_vars.push_back(out.csp.add_variable(
              prefix + "#" + std::to_string(lay.lo + static_cast<std::int64_t>(k)), 0, 1));
        }
      } else {
        lay.csp_vars.push_back(out.csp.add_variable(prefix, lay.lo, lay.hi));
      }
    }
    Sym sym;
    auto make_set = [&](std::size_t offset) {
      SymSet s;
      for (std::size_t k = 0; k < universe; ++k) {
        s.elems.emplace_back(lay.lo + static_cast<std::int64_t>(k), gvar(lay.csp_vars[offset + k]));
      }
      return s;
    };
    switch (dv.kind) {
      case VarKind::Int: sym = SymInt{gvar(lay.csp_vars[0])}; break;
      case VarKind::IntArray: {
        SymArray a;
        for (int v : lay.csp_vars) a.push_back(gvar(v));
        sym = a;
        break;
      }
      case VarKind::IntSet: sym = make_set(0); break;
      case VarKind::SetArray: {
        SymSetArray a;
        for (std::size_t i = 0; i < lay.length; ++i) a.push_back(make_set(i * universe));
        sym = a;
        break;
      }
    }
    vars_.emplace(dv.name, std::move(sym));
    out.layout.push_back(std::move(lay));
  }

  GPtr to_int(const Sym& s, const Expr& e) {
    if (auto* i = std::get_if<SymInt>(&s)) return i->g;
    throw ModelError("expected an integer expression: " + to_string(e));
  }
  GPtr to_bool(const Sym& s) {
    if (auto* b = std::get_if<SymBool>(&s)) return b->g;
    throw ModelError("constraint is not boolean");
  }
  GPtr int_of(const Expr& e) { return to_int(eval(e), e); }
  GPtr bool_of(const Expr& e) {
    auto s = eval(e);
    if (auto* b = std::get_if<SymBool>(&s)) return b->g;
    throw ModelError("expected a boolean expression: " + to_string(e));
  }

  SymSet set_of(const Expr& e) {
    auto s = eval(e);
    if (auto* set = std::get_if<SymSet>(&s)) return *set;
    throw ModelError("expected a set expression: " + to_string(e));
  }

  template <typename F>
  void loop(const Expr& e, F&& body) {
    const auto lo = const_int(*e.args[0], "comprehension bound");
    const auto hi = const_int(*e.args[1], "comprehension bound");
    for (auto i = lo; i <= hi; ++i) {
      tick();
      locals_.emplace_back(e.name, i);
      body();
      locals_.pop_back();
    }
  }

  Sym eval(const Expr& e) {
    tick();
    switch (e.kind) {
      case ExprKind::IntLit: return SymInt{gconst(Rational(e.value))};
      case ExprKind::BoolLit: return SymBool{gbool(e.value != 0)};
      case ExprKind::Ident: {
        for (auto it = locals_.rbegin(); it != locals_.rend(); ++it) {
          if (it->first == e.name) return SymInt{gconst(Rational(it->second))};
        }
        if (auto it = config_.assignment.find(e.name); it != config_.assignment.end()) {
          return SymInt{gconst(Rational(it->second))};
        }
        if (auto it = vars_.find(e.name); it != vars_.end()) return it->second;
        throw ModelError("unknown identifier '" + e.name + "'");
      }
      case ExprKind::Index: {
        auto base = eval(*e.args[0]);
        const auto i = const_int(*e.args[1], "array index");
        auto check = [&](std::size_t n) {
          if (i < 1 || i > static_cast<std::int64_t>(n)) {
            throw ModelError("index " + std::to_string(i) + " out of range in " + to_string(e));
          }
          return static_cast<std::size_t>(i - 1);
        };
        if (auto* a = std::get_if<SymArray>(&base)) return SymInt{(*a)[check(a->size())]};
        if (auto* a = std::get_if<SymSetArray>(&base)) return (*a)[check(a->size())];
        throw ModelError("indexing a non-array: " + to_string(e));
      }
      case ExprKind::Neg: {
        auto a = int_of(*e.args[0]);
        if (is_const(a)) return SymInt{gconst(-a->c)};
        return SymInt{gnode(GKind::Neg, {a})};
      }
      case ExprKind::Add: return SymInt{gadd({int_of(*e.args[0]), int_of(*e.args[1])})};
      case ExprKind::Sub: {
        auto b = int_of(*e.args[1]);
        auto nb = is_const(b) ? gconst(-b->c) : gnode(GKind::Neg, {b});
        return SymInt{gadd({int_of(*e.args[0]), nb})};
      }
      case ExprKind::Mul:
      case ExprKind::Div: {
        auto a = int_of(*e.args[0]);
        auto b = int_of(*e.args[1]);
        if (is_const(a) && is_const(b)) {
          if (e.kind == ExprKind::Div && b->c == Rational(0)) throw ModelError("division by zero: " + to_string(e));
          return SymInt{gconst(e.kind == ExprKind::Mul ? a->c * b->c : a->c / b->c)};
        }
        return SymInt{gnode(e.kind == ExprKind::Mul ? GKind::Mul : GKind::Div, {a, b})};
      }
      case ExprKind::Eq:
      case ExprKind::Ne:
      case ExprKind::Lt:
      case ExprKind::Le:
      case ExprKind::Gt:
      case ExprKind::Ge: {
        auto a = eval(*e.args[0]);
        auto b = eval(*e.args[1]);
        auto* sa = std::get_if<SymSet>(&a);
        auto* sb = std::get_if<SymSet>(&b);
        if (sa && sb && (e.kind == ExprKind::Eq || e.kind == ExprKind::Ne)) {
          auto eq = set_equal(*sa, *sb);
          return SymBool{e.kind == ExprKind::Eq ? eq : gnot(eq)};
        }
        return SymBool{gcmp(e.kind, to_int(a, *e.args[0]), to_int(b, *e.args[1]))};
      }
      case ExprKind::In: {
        auto x = int_of(*e.args[0]);
        const auto& rhs = *e.args[1];
        if (rhs.kind == ExprKind::Range) {
          auto lo = int_of(*rhs.args[0]);
          auto hi = int_of(*rhs.args[1]);
          return SymBool{gand({gcmp(ExprKind::Ge, x, lo), gcmp(ExprKind::Le, x, hi)})};
        }
        auto set = set_of(rhs);
        if (is_const(x)) {
          if (!x->c.is_integer()) return SymBool{gbool(false)};
          for (const auto& [el, ind] : set.elems) {
            if (el == x->c.num) return SymBool{gcmp(ExprKind::Eq, ind, gconst(Rational(1)))};
          }
          return SymBool{gbool(false)};
        }
        auto n = std::make_shared<GNode>();
        n->kind = GKind::Member;
        n->args = {x};
        n->members = set.elems;
        return SymBool{n};
      }
      case ExprKind::Range: {
        const auto lo = const_int(*e.args[0], "set range bound");
        const auto hi = const_int(*e.args[1], "set range bound");
        if (hi - lo > 1'000'000) throw GroundingTimeout{};
        SymSet s;
        for (auto i = lo; i <= hi; ++i) s.elems.emplace_back(i, gconst(Rational(1)));
        return s;
      }
      case ExprKind::SetLit: {
        std::map<std::int64_t, GPtr> m;
        for (const auto& a : e.args) m[const_int(*a, "set literal element")] = gconst(Rational(1));
        SymSet s;
        for (auto& [k, v] : m) s.elems.emplace_back(k, v);
        return s;
      }
      case ExprKind::And: return SymBool{gand({bool_of(*e.args[0]), bool_of(*e.args[1])})};
      case ExprKind::Or: return SymBool{gor({bool_of(*e.args[0]), bool_of(*e.args[1])})};
      case ExprKind::Implies: return SymBool{gor({gnot(bool_of(*e.args[0])), bool_of(*e.args[1])})};
      case ExprKind::Not: return SymBool{gnot(bool_of(*e.args[0]))};
      case ExprKind::Card: {
        auto s = set_of(*e.args[0]);
        std::vector<GPtr> inds;
        for (auto& [el, ind] : s.elems) inds.push_back(ind);
        return SymInt{gadd(std::move(inds))};
      }
      case ExprKind::SumArray: {
        auto s = eval(*e.args[0]);
        auto* a = std::get_if<SymArray>(&s);
        if (!a) throw ModelError("sum over a non-integer array: " + to_string(e));
        return SymInt{gadd(*a)};
      }
      case ExprKind::SumComp: {
        std::vector<GPtr> terms;
        loop(e, [&] { terms.push_back(int_of(*e.args[2])); });
        return SymInt{gadd(std::move(terms))};
      }
      case ExprKind::Forall: {
        std::vector<GPtr> parts;
        loop(e, [&] { parts.push_back(bool_of(*e.args[2])); });
        return SymBool{gand(std::move(parts))};
      }
      case ExprKind::Exists: {
        std::vector<GPtr> parts;
        loop(e, [&] { parts.push_back(bool_of(*e.args[2])); });
        return SymBool{gor(std::move(parts))};
      }
      case ExprKind::AllDiff: {
        auto s = eval(*e.args[0]);
        auto* a = std::get_if<SymArray>(&s);
        if (!a) throw ModelError("alldifferent over a non-integer array: " + to_string(e));
        if (a->size() < 2) return SymBool{gbool(true)};
        return SymBool{gnode(GKind::AllDiff, *a)};
      }
    }
    throw ModelError("unhandled expression");
  }

  GPtr set_equal(const SymSet& a, const SymSet& b) {
    std::map<std::int64_t, std::pair<GPtr, GPtr>> m;
    for (const auto& [el, ind] : a.elems) m[el].first = ind;
    for (const auto& [el, ind] : b.elems) m[el].second = ind;
    std::vector<GPtr> parts;
    for (auto& [el, pr] : m) {
      auto x = pr.first ? pr.first : gconst(Rational(0));
      auto y = pr.second ? pr.second : gconst(Rational(0));
      parts.push_back(gcmp(ExprKind::Eq, x, y));
    }
    return gand(std::move(parts));
  }

  static Csp::Relation relation(ExprKind k) {
    switch (k) {
      case ExprKind::Eq: return Csp::Relation::Eq;
      case ExprKind::Ne: return Csp::Relation::Ne;
      case ExprKind::Lt: return Csp::Relation::Lt;
      case ExprKind::Le: return Csp::Relation::Le;
      case ExprKind::Gt: return Csp::Relation::Gt;
      default: return Csp::Relation::Ge;
    }
  }

  void post(const GPtr& g) {
    tick();
    switch (g->kind) {
      case GKind::BoolConst:
        if (!g->b) csp_->add_false();
        return;
      case GKind::And:
        for (const auto& a : g->args) post(a);
        return;
      case GKind::Cmp:
        if (post_linear(*g)) return;
        break;
      case GKind::AllDiff:
        if (std::all_of(g->args.begin(), g->args.end(), [](const GPtr& a) { return a->kind == GKind::Var; })) {
          std::vector<int> vars;
          for (const auto& a : g->args) vars.push_back(a->var);
          csp_->add_all_different(std::move(vars));
          return;
        }
        break;
      default:
        break;
    }
    std::vector<int> vars;
    collect_vars(*g, vars);
    csp_->add_predicate(std::move(vars), [g](std::span<const std::int64_t> x) { return geval_bool(*g, x); });
  }

  // sum(c_i x_i) + k  rel  0, scaled to integer coefficients.
  bool post_linear(const GNode& cmp) {
    auto a = linearise(*cmp.args[0]);
    auto b = linearise(*cmp.args[1]);
    if (!a || !b) return false;
    for (const auto& [v, c] : b->coefs) a->coefs[v] = a->coefs[v] - c;
    a->constant = a->constant - b->constant;
    std::int64_t scale = a->constant.den;
    for (const auto& [v, c] : a->coefs) scale = std::lcm(scale, c.den);
    std::vector<Csp::Term> terms;
    for (const auto& [v, c] : a->coefs) {
      const auto k = c * Rational(scale);
      if (k.num != 0) terms.push_back({v, k.num});
    }
    const auto rhs = -(a->constant * Rational(scale));
    csp_->add_linear(std::move(terms), relation(cmp.cmp), rhs.num);
    return true;
  }

  const GeneratorModel& model_;
  const GeneratorConfiguration& config_;
  std::chrono::steady_clock::time_point deadline_;
  std::map<std::string, Sym> vars_;
  std::vector<std::pair<std::string, std::int64_t>> locals_;
  Csp* csp_ = nullptr;
  std::uint64_t work_ = 0;
};

}  // namespace

GroundedModel ground(const GeneratorModel& model, const GeneratorConfiguration& config,
                     std::chrono::steady_clock::time_point deadline) {
  try {
    return Grounder(model, config, deadline).run();
  } catch (const EvalError& e) {
    throw ModelError(e.what());
  }
}

std::vector<std::int64_t> GroundedModel::encode(const ValueMap& values) const {
  std::vector<std::int64_t> out(csp.num_variables(), 0);
  auto put_set = [&](const VarLayout& lay, const IntSet& s, std::size_t offset) {
    for (auto x : s) {
      if (x < lay.lo || x > lay.hi) throw ModelError("set element out of universe for '" + lay.name + "'");
      out[static_cast<std::size_t>(lay.csp_vars[offset + static_cast<std::size_t>(x - lay.lo)])] = 1;
    }
  };
  for (const auto& lay : layout) {
    auto it = values.find(lay.name);
    if (it == values.end()) throw ModelError("missing value for '" + lay.name + "'");
    const auto& v = it->second;
    const std::size_t universe = lay.hi >= lay.lo ? static_cast<std::size_t>(lay.hi - lay.lo + 1) : 0;
    switch (lay.kind) {
      case VarKind::Int:
        out[static_cast<std::size_t>(lay.csp_vars[0])] = std::get<std::int64_t>(v);
        break;
      case VarKind::IntArray: {
        const auto& a = std::get<IntArray>(v);
        if (a.size() != lay.length) throw ModelError("shape mismatch for '" + lay.name + "'");
        for (std::size_t i = 0; i < a.size(); ++i) out[static_cast<std::size_t>(lay.csp_vars[i])] = a[i];
        break;
      }
      case VarKind::IntSet: put_set(lay, std::get<IntSet>(v), 0); break;
      case VarKind::SetArray: {
        if (const auto* empty = std::get_if<IntArray>(&v); empty && empty->empty() && lay.length == 0) break;
        const auto& a = std::get<SetArray>(v);
        if (a.size() != lay.length) throw ModelError("shape mismatch for '" + lay.name + "'");
        for (std::size_t i = 0; i < a.size(); ++i) put_set(lay, a[i], i * universe);
        break;
      }
    }
  }
  return out;
}

ValueMap GroundedModel::decode(const std::vector<std::int64_t>& x) const {
  ValueMap out;
  auto get_set = [&](const VarLayout& lay, std::size_t offset, std::size_t universe) {
    IntSet s;
    for (std::size_t k = 0; k < universe; ++k) {
      if (x[static_cast<std::size_t>(lay.csp_vars[offset + k])] != 0) s.insert(lay.lo + static_cast<std::int64_t>(k));
    }
    return s;
  };
  for (const auto& lay : layout) {
    const std::size_t universe = lay.hi >= lay.lo ? static_cast<std::size_t>(lay.hi - lay.lo + 1) : 0;
    switch (lay.kind) {
      case VarKind::Int: out[lay.name] = x[static_cast<std::size_t>(lay.csp_vars[0])]; break;
      case VarKind::IntArray: {
        IntArray a;
        for (int v : lay.csp_vars) a.push_back(x[static_cast<std::size_t>(v)]);
        out[lay.name] = std::move(a);
        break;
      }
      case VarKind::IntSet: out[lay.name] = get_set(lay, 0, universe); break;
      case VarKind::SetArray: {
        SetArray a;
        for (std::size_t i = 0; i < lay.length; ++i) a.push_back(get_set(lay, i * universe, universe));
        out[lay.name] = std::move(a);
        break;
      }
    }
  }
  return out;
}

}  // namespace instgen
