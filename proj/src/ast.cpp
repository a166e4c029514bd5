// Copyright 2026 The twist Authors
// SPDX-License-Identifier: Apache-2.0

#include "twist/ast.hpp"

#include <algorithm>

namespace twist {

Span cover(Span a, Span b) {
  return {std::min(a.begin, b.begin), std::max(a.end, b.end)};
}

const NumericDecl* Program::find_numeric(const std::string& name) const {
  for (const auto& d : numerics)
    if (d.name == name) return &d;
  return nullptr;
}

namespace {

bool same_scalar(const Scalar& a, const Scalar& b) {
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Scalar::Kind::Int: return a.as_int() == b.as_int();
    case Scalar::Kind::Rat: return a.as_rat() == b.as_rat();
    case Scalar::Kind::Sym: return a.as_sym() == b.as_sym();
  }
  return false;
}

}  // namespace

bool operator==(const ArithExpr& a, const ArithExpr& b) {
  if (a.kind != b.kind) return false;
  if (a.kind == ArithExpr::Kind::Const) return same_scalar(a.value, b.value);
  return a.name == b.name && a.args == b.args;
}

bool operator==(const SetExpr& a, const SetExpr& b) {
  return a.kind == b.kind && a.name == b.name && a.items == b.items && a.args == b.args;
}

bool operator==(const Cond& a, const Cond& b) {
  if (a.kind != b.kind) return false;
  if (a.kind == Cond::Kind::Compare && a.cmp != b.cmp) return false;
  return a.operands == b.operands && a.set == b.set && a.args == b.args;
}

bool operator==(const Binder& a, const Binder& b) {
  return a.var == b.var && a.domain == b.domain;
}

bool operator==(const Expr& a, const Expr& b) {
  if (a.kind != b.kind) return false;
  if (a.kind == Expr::Kind::Card && a.card != b.card) return false;
  if (a.kind == Expr::Kind::Compare && a.cmp != b.cmp) return false;
  return a.name == b.name && a.indices == b.indices && a.children == b.children &&
         a.binders == b.binders && a.when == b.when && a.operands == b.operands;
}

bool operator==(const Program& a, const Program& b) {
  if (a.sets.size() != b.sets.size() || a.numerics.size() != b.numerics.size())
    return false;
  for (std::size_t i = 0; i < a.sets.size(); ++i)
    if (a.sets[i].name != b.sets[i].name || !(a.sets[i].value == b.sets[i].value))
      return false;
  for (std::size_t i = 0; i < a.numerics.size(); ++i)
    if (a.numerics[i].name != b.numerics[i].name || a.numerics[i].sort != b.numerics[i].sort)
      return false;
  return a.formulas == b.formulas;
}

namespace {

using Scope = std::vector<std::string>;

bool bound(const Scope& scope, const std::string& v) {
  return std::find(scope.begin(), scope.end(), v) != scope.end();
}

void collect(const ArithExpr& a, const Scope& scope, std::set<std::string>& out) {
  if (a.kind == ArithExpr::Kind::Var && !bound(scope, a.name)) out.insert(a.name);
  for (const auto& c : a.args) collect(c, scope, out);
}

void collect(const SetExpr& s, const Scope& scope, std::set<std::string>& out) {
  if (s.kind == SetExpr::Kind::Name && !bound(scope, s.name)) out.insert(s.name);
  for (const auto& i : s.items) collect(i, scope, out);
  for (const auto& c : s.args) collect(c, scope, out);
}

void collect(const Cond& c, const Scope& scope, std::set<std::string>& out) {
  for (const auto& o : c.operands) collect(o, scope, out);
  for (const auto& s : c.set) collect(s, scope, out);
  for (const auto& a : c.args) collect(a, scope, out);
}

void collect(const Expr& e, Scope& scope, std::set<std::string>& out) {
  if (e.kind == Expr::Kind::VarAtom && !bound(scope, e.name)) out.insert(e.name);
  for (const auto& i : e.indices) collect(i, scope, out);
  for (const auto& o : e.operands) collect(o, scope, out);
  if (e.binders.empty()) {
    for (const auto& c : e.children) collect(c, scope, out);
    return;
  }
  const std::size_t mark = scope.size();
  for (const auto& b : e.binders) {
    collect(b.domain, scope, out);
    scope.push_back(b.var);
  }
  if (e.when) collect(*e.when, scope, out);
  for (const auto& c : e.children) collect(c, scope, out);
  scope.resize(mark);
}

}  // namespace

std::set<std::string> free_vars(const Expr& e) {
  std::set<std::string> out;
  Scope scope;
  collect(e, scope, out);
  return out;
}

std::set<std::string> free_vars(const SetExpr& s) {
  std::set<std::string> out;
  collect(s, Scope{}, out);
  return out;
}

namespace build {

ArithExpr num(std::int64_t v) {
  ArithExpr a;
  a.value = Scalar::integer(v);
  return a;
}

ArithExpr rat(double v) {
  ArithExpr a;
  a.value = Scalar::rational(v);
  return a;
}

ArithExpr sym(std::string s) {
  ArithExpr a;
  a.value = Scalar::symbol(std::move(s));
  return a;
}

ArithExpr var(std::string dollar_name) {
  ArithExpr a;
  a.kind = ArithExpr::Kind::Var;
  a.name = std::move(dollar_name);
  return a;
}

ArithExpr term(std::string name, std::vector<ArithExpr> indices) {
  ArithExpr a;
  a.kind = ArithExpr::Kind::NumTerm;
  a.name = std::move(name);
  a.args = std::move(indices);
  return a;
}

ArithExpr arith(ArithExpr::Kind k, ArithExpr a, ArithExpr b) {
  ArithExpr out;
  out.kind = k;
  out.args.push_back(std::move(a));
  if (k != ArithExpr::Kind::Sqrt) out.args.push_back(std::move(b));
  return out;
}

SetExpr set_name(std::string dollar_name) {
  SetExpr s;
  s.kind = SetExpr::Kind::Name;
  s.name = std::move(dollar_name);
  return s;
}

SetExpr range(ArithExpr lo, ArithExpr hi) {
  SetExpr s;
  s.kind = SetExpr::Kind::Range;
  s.items = {std::move(lo), std::move(hi)};
  return s;
}

SetExpr literal(std::vector<ArithExpr> items) {
  SetExpr s;
  s.kind = SetExpr::Kind::Literal;
  s.items = std::move(items);
  return s;
}

SetExpr set_op(SetExpr::Kind k, SetExpr a, SetExpr b) {
  SetExpr s;
  s.kind = k;
  s.args = {std::move(a), std::move(b)};
  return s;
}

Cond cmp(CmpOp op, ArithExpr a, ArithExpr b) {
  Cond c;
  c.kind = Cond::Kind::Compare;
  c.cmp = op;
  c.operands = {std::move(a), std::move(b)};
  return c;
}

Cond in(ArithExpr e, SetExpr s) {
  Cond c;
  c.kind = Cond::Kind::In;
  c.operands = {std::move(e)};
  c.set = {std::move(s)};
  return c;
}

Expr top() { return Expr{}; }

Expr bot() {
  Expr e;
  e.kind = Expr::Kind::False;
  return e;
}

Expr atom(std::string name, std::vector<ArithExpr> indices) {
  Expr e;
  e.kind = Expr::Kind::Atom;
  e.name = std::move(name);
  e.indices = std::move(indices);
  return e;
}

Expr var_atom(std::string dollar_name, std::vector<ArithExpr> indices) {
  Expr e = atom(std::move(dollar_name), std::move(indices));
  e.kind = Expr::Kind::VarAtom;
  return e;
}

namespace {
Expr connective(Expr::Kind k, std::vector<Expr> children) {
  Expr e;
  e.kind = k;
  e.children = std::move(children);
  return e;
}
}  // namespace

Expr lnot(Expr e) { return connective(Expr::Kind::Not, {std::move(e)}); }
Expr land(Expr a, Expr b) { return connective(Expr::Kind::And, {std::move(a), std::move(b)}); }
Expr lor(Expr a, Expr b) { return connective(Expr::Kind::Or, {std::move(a), std::move(b)}); }
Expr implies(Expr a, Expr b) {
  return connective(Expr::Kind::Impl, {std::move(a), std::move(b)});
}
Expr iff(Expr a, Expr b) { return connective(Expr::Kind::Iff, {std::move(a), std::move(b)}); }

Expr big(Expr::Kind k, std::vector<Binder> binders, Expr body, std::optional<Cond> when) {
  Expr e = connective(k, {std::move(body)});
  e.binders = std::move(binders);
  e.when = std::move(when);
  return e;
}

Expr card(CardKind k, ArithExpr bound, std::vector<Binder> binders, Expr body,
          std::optional<Cond> when) {
  Expr e = big(Expr::Kind::Card, std::move(binders), std::move(body), std::move(when));
  e.card = k;
  e.operands = {std::move(bound)};
  return e;
}

Expr compare(CmpOp op, ArithExpr a, ArithExpr b) {
  Expr e;
  e.kind = Expr::Kind::Compare;
  e.cmp = op;
  e.operands = {std::move(a), std::move(b)};
  return e;
}

Binder bind(std::string dollar_name, SetExpr domain) {
  return Binder{std::move(dollar_name), std::move(domain), {}};
}

}  // namespace build

}  // namespace twist
