// Copyright 2026 The twist Authors
// SPDX-License-Identifier: Apache-2.0

#include "twist/ground.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_set>

namespace twist {

namespace {

constexpr std::int64_t kMaxRange = 10'000'000;
constexpr std::size_t kMaxNodes = 20'000'000;

[[noreturn]] void fail(const std::string& msg, Span span, const Env& env) {
  throw CompileError(msg, span, env.describe_bindings());
}

// Integer-preserving arithmetic on numeric scalars.
Scalar apply(ArithExpr::Kind op, const Scalar& a, const Scalar& b, Span span, const Env& env) {
  using K = ArithExpr::Kind;
  if (a.is_sym() || b.is_sym())
    fail("arithmetic on symbol '" + (a.is_sym() ? a : b).to_string() + "'", span, env);
  if (a.is_int() && b.is_int()) {
    std::int64_t x = a.as_int(), y = b.as_int(), r = 0;
    switch (op) {
      case K::Add:
        if (__builtin_add_overflow(x, y, &r)) fail("integer overflow", span, env);
        return Scalar::integer(r);
      case K::Sub:
        if (__builtin_sub_overflow(x, y, &r)) fail("integer overflow", span, env);
        return Scalar::integer(r);
      case K::Mul:
        if (__builtin_mul_overflow(x, y, &r)) fail("integer overflow", span, env);
        return Scalar::integer(r);
      case K::Div:
        if (y == 0) fail("division by zero", span, env);
        if (x % y == 0 && !(x == INT64_MIN && y == -1)) return Scalar::integer(x / y);
        return Scalar::rational(static_cast<double>(x) / static_cast<double>(y));
      case K::Mod: {
        if (y == 0) fail("modulo by zero", span, env);
        if (y == -1) return Scalar::integer(0);
        std::int64_t m = x % y;
        if (m < 0) m += y < 0 ? -y : y;
        return Scalar::integer(m);
      }
      default: break;
    }
  }
  if (op == K::Mod) fail("'mod' requires integer operands", span, env);
  double x = a.to_double(), y = b.to_double();
  switch (op) {
    case K::Add: return Scalar::rational(x + y);
    case K::Sub: return Scalar::rational(x - y);
    case K::Mul: return Scalar::rational(x * y);
    case K::Div:
      if (y == 0) fail("division by zero", span, env);
      return Scalar::rational(x / y);
    default: break;
  }
  fail("unsupported arithmetic operator", span, env);
}

Scalar square_root(const Scalar& v, Span span, const Env& env) {
  if (v.is_sym()) fail("sqrt of symbol '" + v.as_sym() + "'", span, env);
  if (v.to_double() < 0) fail("sqrt of negative value " + v.to_string(), span, env);
  if (v.is_int()) {
    auto r = static_cast<std::int64_t>(std::llround(std::sqrt(static_cast<double>(v.as_int()))));
    for (std::int64_t c = std::max<std::int64_t>(0, r - 1); c <= r + 1; ++c)
      if (c * c == v.as_int()) return Scalar::integer(c);
  }
  return Scalar::rational(std::sqrt(v.to_double()));
}

bool compare_scalars(CmpOp op, const Scalar& a, const Scalar& b) {
  if (op == CmpOp::Eq) return checked_equal(a, b);
  if (op == CmpOp::Ne) return !checked_equal(a, b);
  auto ord = compare(a, b);
  switch (op) {
    case CmpOp::Lt: return ord < 0;
    case CmpOp::Gt: return ord > 0;
    case CmpOp::Le: return ord <= 0;
    case CmpOp::Ge: return ord >= 0;
    default: return false;
  }
}

std::string theory_name(const std::string& family, const std::vector<Scalar>& idx) {
  std::string out = family;
  for (const auto& s : idx) out += "_" + s.to_string();
  return out;
}

class Grounder {
 public:
  explicit Grounder(const Program& p) : program_(p) {}

  GroundFormula run() {
    for (const auto& d : program_.sets) env_.define_set(d.name, eval_set(d.value, env_));
    std::vector<GroundFormula> parts;
    for (const auto& f : program_.formulas) parts.push_back(formula(f));
    GroundFormula g = parts.size() == 1 ? std::move(parts.front())
                                        : GroundFormula::make(GroundFormula::Kind::And,
                                                              std::move(parts));
    check_name_clashes(g);
    return g;
  }

 private:
  GroundFormula counted(GroundFormula g) {
    if (++nodes_ > kMaxNodes)
      throw CompileError("grounded formula exceeds " + std::to_string(kMaxNodes) + " nodes",
                         Span{}, env_.describe_bindings());
    return g;
  }

  GroundFormula formula(const Expr& e) {
    using K = Expr::Kind;
    using GK = GroundFormula::Kind;
    switch (e.kind) {
      case K::True: return counted(GroundFormula::truth(true));
      case K::False: return counted(GroundFormula::truth(false));
      case K::Atom: return counted(GroundFormula::lit(atom_text(e.name, e.indices)));
      case K::VarAtom: {
        const Scalar* v = env_.find(e.name);
        if (!v) {
          if (env_.find_set(e.name))
            fail("set " + e.name + " used as a proposition", e.span, env_);
          fail("unbound variable " + e.name, e.span, env_);
        }
        if (!v->is_sym())
          fail(e.name + " is bound to " + v->to_string() + ", which is not a predicate name",
               e.span, env_);
        return counted(GroundFormula::lit(atom_text(v->as_sym(), e.indices)));
      }
      case K::Not: {
        GroundFormula inner = formula(e.children[0]);
        if (inner.kind == GK::Lit) {
          inner.positive = !inner.positive;
          return inner;
        }
        return counted(GroundFormula::make(GK::Not, {std::move(inner)}));
      }
      case K::And:
      case K::Or:
      case K::Impl:
      case K::Iff: {
        GK gk = e.kind == K::And ? GK::And : e.kind == K::Or ? GK::Or
                : e.kind == K::Impl ? GK::Impl : GK::Iff;
        GroundFormula a = formula(e.children[0]);
        GroundFormula b = formula(e.children[1]);
        return counted(GroundFormula::make(gk, {std::move(a), std::move(b)}));
      }
      case K::BigAnd:
      case K::BigOr: {
        std::vector<GroundFormula> parts = expand(e);
        if (parts.empty()) return counted(GroundFormula::truth(e.kind == K::BigAnd));
        if (parts.size() == 1) return std::move(parts.front());
        return counted(
            GroundFormula::make(e.kind == K::BigAnd ? GK::And : GK::Or, std::move(parts)));
      }
      case K::Card: {
        Scalar k = eval_arith(e.operands[0], env_);
        if (!k.is_int())
          fail("cardinality bound must be an integer, got " + k.to_string(), e.operands[0].span,
               env_);
        std::vector<GroundFormula> parts = expand(e);
        return counted(normalize_card(GroundFormula::cardinality(e.card, k.as_int(),
                                                                 std::move(parts))));
      }
      case K::Compare: return comparison(e);
    }
    fail("unsupported formula", e.span, env_);
  }

  std::vector<GroundFormula> expand(const Expr& e) {
    std::vector<GroundFormula> out;
    expand_from(e, 0, out);
    return out;
  }

  void expand_from(const Expr& e, std::size_t i, std::vector<GroundFormula>& out) {
    if (i == e.binders.size()) {
      if (e.when && !eval_cond(*e.when, env_)) return;
      out.push_back(formula(e.children[0]));
      return;
    }
    const Binder& b = e.binders[i];
    SetValue domain = eval_set(b.domain, env_);
    for (const auto& v : domain) {
      env_.push(b.var, v);
      try {
        expand_from(e, i + 1, out);
      } catch (...) {
        env_.pop();
        throw;
      }
      env_.pop();
    }
  }

  std::string atom_text(const std::string& name, const std::vector<ArithExpr>& indices) {
    GroundAtom a{name, {}};
    for (const auto& i : indices) a.indices.push_back(eval_arith(i, env_));
    return a.text();
  }

  GroundFormula comparison(const Expr& e) {
    GroundTerm lhs = term(e.operands[0]);
    GroundTerm rhs = term(e.operands[1]);
    if (lhs.kind == GroundTerm::Kind::Const && rhs.kind == GroundTerm::Kind::Const) {
      try {
        return counted(GroundFormula::truth(compare_scalars(e.cmp, lhs.value, rhs.value)));
      } catch (const TypeError& err) {
        fail(err.what(), e.span, env_);
      }
    }
    for (const auto* side : {&lhs, &rhs})
      if (side->kind == GroundTerm::Kind::Const && side->value.is_sym())
        fail("symbol '" + side->value.as_sym() + "' compared with a numeric term", e.span, env_);
    GroundFormula g;
    g.kind = GroundFormula::Kind::Theory;
    g.cmp = e.cmp;
    g.terms = {std::move(lhs), std::move(rhs)};
    return counted(std::move(g));
  }

  GroundTerm term(const ArithExpr& a) {
    using K = ArithExpr::Kind;
    GroundTerm t;
    switch (a.kind) {
      case K::Const:
      case K::Var:
        t.value = eval_arith(a, env_);
        return t;
      case K::NumTerm: {
        const NumericDecl* decl = program_.find_numeric(a.name);
        if (!decl) fail("unknown numeric symbol '" + a.name + "'", a.span, env_);
        std::vector<Scalar> idx;
        for (const auto& i : a.args) idx.push_back(eval_arith(i, env_));
        t.kind = GroundTerm::Kind::Var;
        t.name = theory_name(a.name, idx);
        t.sort = decl->sort;
        theory_spans_.emplace(t.name, a.span);
        return t;
      }
      case K::Sqrt: {
        GroundTerm inner = term(a.args[0]);
        if (inner.kind != GroundTerm::Kind::Const)
          fail("sqrt of a numeric symbol is not supported", a.span, env_);
        t.value = square_root(inner.value, a.span, env_);
        return t;
      }
      default: break;
    }
    GroundTerm x = term(a.args[0]);
    GroundTerm y = term(a.args[1]);
    if (x.kind == GroundTerm::Kind::Const && y.kind == GroundTerm::Kind::Const) {
      t.value = apply(a.kind, x.value, y.value, a.span, env_);
      return t;
    }
    for (const auto* c : {&x, &y})
      if (c->kind == GroundTerm::Kind::Const && c->value.is_sym())
        fail("symbol '" + c->value.as_sym() + "' in numeric expression", a.span, env_);
    switch (a.kind) {
      case K::Add: t.kind = GroundTerm::Kind::Add; break;
      case K::Sub: t.kind = GroundTerm::Kind::Sub; break;
      case K::Mul: t.kind = GroundTerm::Kind::Mul; break;
      case K::Div: t.kind = GroundTerm::Kind::Div; break;
      default: fail("'mod' of a numeric symbol is not supported", a.span, env_);
    }
    t.args = {std::move(x), std::move(y)};
    return t;
  }

  void check_name_clashes(const GroundFormula& g) {
    if (theory_spans_.empty()) return;
    for (const auto& atom : collect_atoms(g)) {
      auto it = theory_spans_.find(atom);
      if (it != theory_spans_.end())
        throw CompileError("numeric term '" + atom + "' clashes with a propositional atom",
                           it->second);
    }
  }

  const Program& program_;
  Env env_;
  std::size_t nodes_ = 0;
  std::map<std::string, Span> theory_spans_;
};

}  // namespace

const SetValue* Env::find_set(const std::string& name) const {
  auto it = sets_.find(name);
  return it == sets_.end() ? nullptr : &it->second;
}

const Scalar* Env::find(const std::string& var) const {
  for (auto it = binds_.rbegin(); it != binds_.rend(); ++it)
    if (it->first == var) return &it->second;
  return nullptr;
}

std::string Env::describe_bindings() const {
  std::string out;
  for (const auto& [var, value] : binds_) {
    if (!out.empty()) out += ", ";
    out += var + "=" + value.to_string();
  }
  return out;
}

std::string GroundAtom::text() const {
  if (indices.empty()) return name;
  std::string out = name + "(";
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (i) out += ",";
    out += indices[i].to_string();
  }
  return out + ")";
}

GroundFormula GroundFormula::truth(bool v) {
  GroundFormula g;
  g.kind = v ? Kind::True : Kind::False;
  return g;
}

GroundFormula GroundFormula::lit(std::string atom, bool positive) {
  GroundFormula g;
  g.kind = Kind::Lit;
  g.atom = std::move(atom);
  g.positive = positive;
  return g;
}

GroundFormula GroundFormula::make(Kind k, std::vector<GroundFormula> children) {
  GroundFormula g;
  g.kind = k;
  g.children = std::move(children);
  return g;
}

GroundFormula GroundFormula::cardinality(CardKind kind, std::int64_t k,
                                         std::vector<GroundFormula> children) {
  GroundFormula g = make(Kind::Card, std::move(children));
  g.card = kind;
  g.k = k;
  return g;
}

bool operator==(const GroundTerm& a, const GroundTerm& b) {
  if (a.kind != b.kind) return false;
  if (a.kind == GroundTerm::Kind::Const)
    return a.value.kind() == b.value.kind() && a.value == b.value;
  return a.name == b.name && a.sort == b.sort && a.args == b.args;
}

bool operator==(const GroundFormula& a, const GroundFormula& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case GroundFormula::Kind::Lit: return a.atom == b.atom && a.positive == b.positive;
    case GroundFormula::Kind::Card:
      return a.card == b.card && a.k == b.k && a.children == b.children;
    case GroundFormula::Kind::Theory: return a.cmp == b.cmp && a.terms == b.terms;
    default: return a.children == b.children;
  }
}

SetValue eval_set(const SetExpr& s, const Env& env) {
  using K = SetExpr::Kind;
  switch (s.kind) {
    case K::Name: {
      const SetValue* v = env.find_set(s.name);
      if (!v) {
        if (env.find(s.name)) fail(s.name + " is a binder variable, not a set", s.span, env);
        fail("undeclared set " + s.name, s.span, env);
      }
      return *v;
    }
    case K::Range: {
      Scalar lo = eval_arith(s.items[0], env);
      Scalar hi = eval_arith(s.items[1], env);
      if (!lo.is_int()) fail("range bound must be an integer, got " + lo.to_string(), s.items[0].span, env);
      if (!hi.is_int()) fail("range bound must be an integer, got " + hi.to_string(), s.items[1].span, env);
      std::int64_t width = 0;
      if (hi.as_int() >= lo.as_int() &&
          (__builtin_sub_overflow(hi.as_int(), lo.as_int(), &width) || width >= kMaxRange))
        fail("range is too large", s.span, env);
      return SetValue::range(lo.as_int(), hi.as_int());
    }
    case K::Literal: {
      SetValue out;
      for (const auto& item : s.items) out.insert(eval_arith(item, env));
      return out;
    }
    case K::Union: return set_union(eval_set(s.args[0], env), eval_set(s.args[1], env));
    case K::Inter: return set_intersection(eval_set(s.args[0], env), eval_set(s.args[1], env));
    case K::Diff: return set_difference(eval_set(s.args[0], env), eval_set(s.args[1], env));
  }
  fail("unsupported set expression", s.span, env);
}

Scalar eval_arith(const ArithExpr& a, const Env& env) {
  using K = ArithExpr::Kind;
  switch (a.kind) {
    case K::Const: return a.value;
    case K::Var: {
      const Scalar* v = env.find(a.name);
      if (!v) {
        if (env.find_set(a.name)) fail("set " + a.name + " used as a value", a.span, env);
        fail("unbound variable " + a.name, a.span, env);
      }
      return *v;
    }
    case K::NumTerm:
      fail("numeric symbol '" + a.name + "' cannot be evaluated while grounding", a.span, env);
    case K::Sqrt: return square_root(eval_arith(a.args[0], env), a.span, env);
    default: break;
  }
  Scalar x = eval_arith(a.args[0], env);
  Scalar y = eval_arith(a.args[1], env);
  return apply(a.kind, x, y, a.span, env);
}

bool eval_cond(const Cond& c, const Env& env) {
  using K = Cond::Kind;
  switch (c.kind) {
    case K::And: return eval_cond(c.args[0], env) && eval_cond(c.args[1], env);
    case K::Or: return eval_cond(c.args[0], env) || eval_cond(c.args[1], env);
    case K::Not: return !eval_cond(c.args[0], env);
    case K::In: return eval_set(c.set[0], env).contains(eval_arith(c.operands[0], env));
    case K::Compare: {
      Scalar a = eval_arith(c.operands[0], env);
      Scalar b = eval_arith(c.operands[1], env);
      try {
        return compare_scalars(c.cmp, a, b);
      } catch (const TypeError& e) {
        fail(e.what(), c.span, env);
      }
    }
  }
  return false;
}

GroundFormula ground(const Program& p) { return Grounder(p).run(); }

GroundFormula normalize_card(const GroundFormula& card) {
  using GK = GroundFormula::Kind;
  const auto n = static_cast<std::int64_t>(card.children.size());
  const std::int64_t k = card.k;
  auto conj = [&](bool negate) {
    std::vector<GroundFormula> parts;
    for (const auto& c : card.children) {
      if (!negate) {
        parts.push_back(c);
      } else if (c.kind == GK::Lit) {
        parts.push_back(GroundFormula::lit(c.atom, !c.positive));
      } else {
        parts.push_back(GroundFormula::make(GK::Not, {c}));
      }
    }
    if (parts.empty()) return GroundFormula::truth(true);
    if (parts.size() == 1) return std::move(parts.front());
    return GroundFormula::make(GK::And, std::move(parts));
  };
  switch (card.card) {
    case CardKind::AtLeast:
      if (k <= 0) return GroundFormula::truth(true);
      if (k > n) return GroundFormula::truth(false);
      if (k == n) return conj(false);
      break;
    case CardKind::AtMost:
      if (k < 0) return GroundFormula::truth(false);
      if (k >= n) return GroundFormula::truth(true);
      if (k == 0) return conj(true);
      break;
    case CardKind::Exact:
      if (k < 0 || k > n) return GroundFormula::truth(false);
      if (k == 0) return conj(true);
      if (k == n) return conj(false);
      break;
  }
  return card;
}

bool evaluate(const GroundFormula& g, const std::function<bool(const std::string&)>& atom,
              const std::function<bool(const GroundFormula&)>& theory) {
  using GK = GroundFormula::Kind;
  switch (g.kind) {
    case GK::True: return true;
    case GK::False: return false;
    case GK::Lit: return atom(g.atom) == g.positive;
    case GK::Not: return !evaluate(g.children[0], atom, theory);
    case GK::And:
      return std::all_of(g.children.begin(), g.children.end(),
                         [&](const GroundFormula& c) { return evaluate(c, atom, theory); });
    case GK::Or:
      return std::any_of(g.children.begin(), g.children.end(),
                         [&](const GroundFormula& c) { return evaluate(c, atom, theory); });
    case GK::Impl:
      return !evaluate(g.children[0], atom, theory) || evaluate(g.children[1], atom, theory);
    case GK::Iff:
      return evaluate(g.children[0], atom, theory) == evaluate(g.children[1], atom, theory);
    case GK::Card: {
      std::int64_t count = 0;
      for (const auto& c : g.children) count += evaluate(c, atom, theory) ? 1 : 0;
      switch (g.card) {
        case CardKind::AtLeast: return count >= g.k;
        case CardKind::AtMost: return count <= g.k;
        case CardKind::Exact: return count == g.k;
      }
      return false;
    }
    case GK::Theory:
      if (!theory) throw InternalError("theory atom evaluated without a theory interpretation");
      return theory(g);
  }
  return false;
}

namespace {

void atoms_into(const GroundFormula& g, std::vector<std::string>& out,
                std::unordered_set<std::string>& seen) {
  if (g.kind == GroundFormula::Kind::Lit && seen.insert(g.atom).second) out.push_back(g.atom);
  for (const auto& c : g.children) atoms_into(c, out, seen);
}

void terms_into(const GroundTerm& t, std::vector<std::pair<std::string, NumericSort>>& out,
                std::set<std::string>& seen) {
  if (t.kind == GroundTerm::Kind::Var && seen.insert(t.name).second)
    out.emplace_back(t.name, t.sort);
  for (const auto& a : t.args) terms_into(a, out, seen);
}

void theory_into(const GroundFormula& g, std::vector<std::pair<std::string, NumericSort>>& out,
                 std::set<std::string>& seen) {
  for (const auto& t : g.terms) terms_into(t, out, seen);
  for (const auto& c : g.children) theory_into(c, out, seen);
}

}  // namespace

std::vector<std::string> collect_atoms(const GroundFormula& g) {
  std::vector<std::string> out;
  std::unordered_set<std::string> seen;
  atoms_into(g, out, seen);
  return out;
}

std::size_t node_count(const GroundFormula& g) {
  std::size_t n = 1;
  for (const auto& c : g.children) n += node_count(c);
  return n;
}

std::vector<std::pair<std::string, NumericSort>> collect_theory_vars(const GroundFormula& g) {
  std::vector<std::pair<std::string, NumericSort>> out;
  std::set<std::string> seen;
  theory_into(g, out, seen);
  return out;
}

bool has_theory_atoms(const GroundFormula& g) {
  if (g.kind == GroundFormula::Kind::Theory) return true;
  return std::any_of(g.children.begin(), g.children.end(), has_theory_atoms);
}

}  // namespace twist
