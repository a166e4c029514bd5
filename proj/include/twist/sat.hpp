// Copyright 2026 The twist Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "twist/cnf.hpp"

namespace twist {

enum class SatStatus { Sat, Unsat, Unknown };

std::string_view to_string(SatStatus s);

struct SolverOptions {
  std::uint64_t seed = 0;
  /// Conflicts allowed per solve call before giving up with Unknown.
  std::uint64_t conflict_budget = 10'000'000;
  /// When non-empty, solving is delegated to this external SAT solver
  /// command (see run_external_sat).
  std::string external_cmd;
  std::chrono::milliseconds external_timeout{30'000};
};

/// Conflict-driven clause-learning solver over DIMACS literals, with
/// two watched literals, 1UIP learning, VSIDS, Luby restarts and phase
/// saving. Clauses may be added between solve calls.
class Solver {
 public:
  explicit Solver(const SolverOptions& opts = {});
  ~Solver();
  Solver(Solver&&) noexcept;
  Solver& operator=(Solver&&) noexcept;

  /// Makes variables 1..n available.
  void reserve_vars(int n);
  int n_vars() const;

  void add_clause(std::span<const Lit> clause);

  SatStatus solve(std::span<const Lit> assumptions = {});

  /// Assignment found by the last Sat answer; index 0 is unused.
  const std::vector<bool>& model() const;

  std::uint64_t conflicts() const;
  std::uint64_t decisions() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

struct SolveResult {
  SatStatus status = SatStatus::Unknown;
  std::vector<bool> model;  // model[v] for v in 1..n_vars; empty unless Sat
};

/// Throws InternalError if some clause is not satisfied by `model`.
void verify_model(std::span<const Clause> clauses, const std::vector<bool>& model);

/// One-shot solve; a Sat answer has been verified against every clause.
SolveResult solve(const ClauseDb& db, std::span<const Lit> assumptions = {},
                  const SolverOptions& opts = {});

/// Model enumeration: each call returns a model differing from all earlier
/// ones on the user atoms, then Unsat once none is left.
class Session {
 public:
  explicit Session(ClauseDb db, const SolverOptions& opts = {});

  SolveResult next();

  const ClauseDb& db() const { return db_; }
  std::size_t models_found() const { return found_; }
  bool exhausted() const { return exhausted_; }

 private:
  ClauseDb db_;
  SolverOptions opts_;
  Solver solver_;
  std::vector<Clause> blocking_;
  std::size_t found_ = 0;
  bool exhausted_ = false;
};

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Number of models projected on the user atoms, capped at `limit`.
/// Throws BudgetExceeded when the solver answers Unknown.
std::uint64_t count_models(const ClauseDb& db, std::uint64_t limit,
                           const SolverOptions& opts = {});

}  // namespace twist
