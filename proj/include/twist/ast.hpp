// Copyright 2026 The twist Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "twist/scalar.hpp"

namespace twist {

/// Half-open byte range [begin, end) into the (newline-normalized) source.
struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;
};

/// Joins two spans into the smallest span covering both.
Span cover(Span a, Span b);

enum class CmpOp { Lt, Gt, Le, Ge, Eq, Ne };

/// Index and numeric arithmetic. `name` holds the `$`-name for Var and the
/// symbol name for NumTerm; `args` holds operands (and NumTerm indices).
struct ArithExpr {
  enum class Kind { Const, Var, NumTerm, Add, Sub, Mul, Div, Mod, Sqrt };

  Kind kind = Kind::Const;
  Scalar value;
  std::string name;
  std::vector<ArithExpr> args;
  Span span;
};

struct SetExpr {
  enum class Kind { Name, Range, Literal, Union, Inter, Diff };

  Kind kind = Kind::Literal;
  std::string name;              // Name
  std::vector<ArithExpr> items;  // Range: {lo, hi}; Literal: elements
  std::vector<SetExpr> args;     // Union / Inter / Diff
  Span span;
};

/// Grounding-time condition attached to binders with `when`.
struct Cond {
  enum class Kind { And, Or, Not, Compare, In };

  Kind kind = Kind::Compare;
  CmpOp cmp = CmpOp::Eq;
  std::vector<ArithExpr> operands;  // Compare: {lhs, rhs}; In: {element}
  std::vector<SetExpr> set;         // In: {set}
  std::vector<Cond> args;           // And / Or / Not
  Span span;
};

struct Binder {
  std::string var;  // `$`-name
  SetExpr domain;
  Span span;
};

enum class CardKind { AtLeast, AtMost, Exact };

/// Formula AST. Which fields are meaningful depends on `kind`:
///   Atom / VarAtom: name, indices
///   Not / And / Or / Impl / Iff: children (1 or 2)
///   BigAnd / BigOr: binders, when, children = {body}
///   Card: card, bound, binders, when, children = {body}
///   Compare: cmp, operands = {lhs, rhs}
struct Expr {
  enum class Kind {
    True, False, Atom, VarAtom, Not, And, Or, Impl, Iff, BigAnd, BigOr, Card, Compare
  };

  Kind kind = Kind::True;
  std::string name;
  std::vector<ArithExpr> indices;
  std::vector<Expr> children;
  std::vector<Binder> binders;
  std::optional<Cond> when;
  CardKind card = CardKind::AtLeast;
  std::vector<ArithExpr> operands;  // Card: {k}; Compare: {lhs, rhs}
  CmpOp cmp = CmpOp::Eq;
  Span span;
};

enum class NumericSort { Int, Real };

struct SetDecl {
  std::string name;  // `$`-name
  SetExpr value;
  Span span;
};

struct NumericDecl {
  NumericSort sort = NumericSort::Int;
  std::string name;
  Span span;
};

struct Program {
  std::vector<SetDecl> sets;
  std::vector<NumericDecl> numerics;
  std::vector<Expr> formulas;

  const NumericDecl* find_numeric(const std::string& name) const;
};

// Structural equality; spans do not take part.
bool operator==(const ArithExpr& a, const ArithExpr& b);
bool operator==(const SetExpr& a, const SetExpr& b);
bool operator==(const Cond& a, const Cond& b);
bool operator==(const Binder& a, const Binder& b);
bool operator==(const Expr& a, const Expr& b);
bool operator==(const Program& a, const Program& b);

/// `$`-names occurring in `e` that no enclosing binder binds. Set names
/// referenced by binder domains are included.
std::set<std::string> free_vars(const Expr& e);
std::set<std::string> free_vars(const SetExpr& s);

// Builders, mostly for tests and programmatic construction.
namespace build {

ArithExpr num(std::int64_t v);
ArithExpr rat(double v);
ArithExpr sym(std::string s);
ArithExpr var(std::string dollar_name);
ArithExpr term(std::string name, std::vector<ArithExpr> indices = {});
ArithExpr arith(ArithExpr::Kind k, ArithExpr a, ArithExpr b);

SetExpr set_name(std::string dollar_name);
SetExpr range(ArithExpr lo, ArithExpr hi);
SetExpr literal(std::vector<ArithExpr> items);
SetExpr set_op(SetExpr::Kind k, SetExpr a, SetExpr b);

Cond cmp(CmpOp op, ArithExpr a, ArithExpr b);
Cond in(ArithExpr e, SetExpr s);

Expr top();
Expr bot();
Expr atom(std::string name, std::vector<ArithExpr> indices = {});
Expr var_atom(std::string dollar_name, std::vector<ArithExpr> indices = {});
Expr lnot(Expr e);
Expr land(Expr a, Expr b);
Expr lor(Expr a, Expr b);
Expr implies(Expr a, Expr b);
Expr iff(Expr a, Expr b);
Expr big(Expr::Kind k, std::vector<Binder> binders, Expr body,
         std::optional<Cond> when = std::nullopt);
Expr card(CardKind k, ArithExpr bound, std::vector<Binder> binders, Expr body,
          std::optional<Cond> when = std::nullopt);
Expr compare(CmpOp op, ArithExpr a, ArithExpr b);
Binder bind(std::string dollar_name, SetExpr domain);

}  // namespace build

}  // namespace twist
