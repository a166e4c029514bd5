// Copyright 2026 The twist Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "twist/ast.hpp"
#include "twist/diagnostic.hpp"

namespace twist {

/// Evaluation environment: declared sets and the binder values in effect.
class Env {
 public:
  void define_set(const std::string& name, SetValue value) { sets_[name] = std::move(value); }
  const SetValue* find_set(const std::string& name) const;

  void push(const std::string& var, Scalar value) { binds_.emplace_back(var, std::move(value)); }
  void pop() { binds_.pop_back(); }
  const Scalar* find(const std::string& var) const;

  /// "$i=3, $j=7" for the binders currently in effect, outermost first.
  std::string describe_bindings() const;

 private:
  std::map<std::string, SetValue> sets_;
  std::vector<std::pair<std::string, Scalar>> binds_;
};

/// A propositional atom with ground indices.
struct GroundAtom {
  std::string name;
  std::vector<Scalar> indices;

  /// `name(i1,...,ik)`, or bare `name` without indices.
  std::string text() const;
};

/// Ground numeric term inside a theory atom. `Var` nodes name a theory
/// constant in canonical form (`x_1_2`) and carry its declared sort.
struct GroundTerm {
  enum class Kind { Const, Var, Add, Sub, Mul, Div };

  Kind kind = Kind::Const;
  Scalar value;
  std::string name;
  NumericSort sort = NumericSort::Int;
  std::vector<GroundTerm> args;
};

/// Variable-free formula. Which fields are meaningful depends on `kind`:
///   Lit: atom (canonical text), positive
///   Not / And / Or / Impl / Iff: children (And / Or are n-ary)
///   Card: card, k, children (the counted sub-formulas)
///   Theory: cmp, terms = {lhs, rhs}
struct GroundFormula {
  enum class Kind { True, False, Lit, Not, And, Or, Impl, Iff, Card, Theory };

  Kind kind = Kind::True;
  std::string atom;
  bool positive = true;
  std::vector<GroundFormula> children;
  CardKind card = CardKind::AtLeast;
  std::int64_t k = 0;
  CmpOp cmp = CmpOp::Eq;
  std::vector<GroundTerm> terms;

  static GroundFormula truth(bool v);
  static GroundFormula lit(std::string atom, bool positive = true);
  static GroundFormula make(Kind k, std::vector<GroundFormula> children);
  static GroundFormula cardinality(CardKind kind, std::int64_t k,
                                   std::vector<GroundFormula> children);
};

bool operator==(const GroundTerm& a, const GroundTerm& b);
bool operator==(const GroundFormula& a, const GroundFormula& b);

SetValue eval_set(const SetExpr& s, const Env& env);
Scalar eval_arith(const ArithExpr& a, const Env& env);
bool eval_cond(const Cond& c, const Env& env);

/// Expands every binder and folds constants, yielding one formula: the
/// conjunction of the program's formulas in source order (a single formula
/// is returned as is). Throws CompileError with binder context on failure.
GroundFormula ground(const Program& p);

/// Folds degenerate cardinality constraints (bounds at or outside 0..n,
/// AtLeast n, AtMost 0, Exact 0 / n); other constraints come back unchanged.
GroundFormula normalize_card(const GroundFormula& card);

/// Truth value under an assignment of atoms. Theory atoms are delegated to
/// `theory`; without it they throw InternalError.
bool evaluate(const GroundFormula& g, const std::function<bool(const std::string&)>& atom,
              const std::function<bool(const GroundFormula&)>& theory = {});

/// Atom texts in first-occurrence order of a left-to-right traversal.
std::vector<std::string> collect_atoms(const GroundFormula& g);

/// Number of nodes in the formula tree.
std::size_t node_count(const GroundFormula& g);

/// Theory constants (canonical name, sort) in first-occurrence order.
std::vector<std::pair<std::string, NumericSort>> collect_theory_vars(const GroundFormula& g);

/// True if any Theory node occurs.
bool has_theory_atoms(const GroundFormula& g);

}  // namespace twist
