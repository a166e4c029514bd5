// Copyright 2026 The twist Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "twist/cardinality.hpp"
#include "twist/ground.hpp"

namespace twist {

/// Bijection between DIMACS variables and atom texts. User atoms occupy
/// 1..n_user(); generated (`_`-prefixed) variables follow.
class VarMap : public VarAllocator {
 public:
  /// Numbers a user atom. All user atoms must be added before any fresh one.
  Lit add_user(const std::string& atom);
  Lit fresh(const std::string& name) override;
  int next_serial(char family) override;

  std::optional<Lit> find(const std::string& atom) const;
  /// Text of variable `var` (1-based).
  const std::string& name(int var) const { return backward_.at(static_cast<std::size_t>(var)); }
  int n_vars() const { return static_cast<int>(backward_.size()) - 1; }
  int n_user() const { return n_user_; }

  friend bool operator==(const VarMap& a, const VarMap& b) {
    return a.backward_ == b.backward_ && a.n_user_ == b.n_user_;
  }

 private:
  Lit add(const std::string& name);

  std::unordered_map<std::string, int> forward_;
  std::vector<std::string> backward_{""};
  int n_user_ = 0;
  std::map<char, int> serials_;
};

struct ClauseDb {
  std::vector<Clause> clauses;
  VarMap varmap;

  int n_vars() const { return varmap.n_vars(); }
  /// Removes duplicate literals; drops the clause if it is a tautology.
  /// Throws std::invalid_argument on an empty clause or an unknown variable.
  void add(Clause c);

  friend bool operator==(const ClauseDb& a, const ClauseDb& b) {
    return a.clauses == b.clauses && a.varmap == b.varmap;
  }
};

/// Constant folding and double-negation removal; And/Or are flattened.
GroundFormula simplify(const GroundFormula& g);

/// Equisatisfiable CNF. Every model restricted to the user atoms satisfies
/// `g`, and every model of `g` extends to a model of the result. Throws
/// CompileError when `g` contains a theory atom.
ClauseDb tseitin(const GroundFormula& g, CardEncoding enc = CardEncoding::Auto);

std::string emit_dimacs(const ClauseDb& db, bool comments = true);

class DimacsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Reads DIMACS CNF. `c <atom> = <int>` comment lines name the user atoms
/// (which must be 1..m); other variables get placeholder names `_V<n>`.
ClauseDb parse_dimacs(std::string_view text);

}  // namespace twist
