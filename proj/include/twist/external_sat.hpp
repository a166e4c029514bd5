// Copyright 2026 The twist Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <chrono>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

#include "twist/sat.hpp"

namespace twist {

class ExternalSolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Reads SAT-competition output (`s SATISFIABLE` / `s UNSATISFIABLE` /
/// `s UNKNOWN`, `v` value lines). Variables absent from the `v` lines are
/// false. Throws ExternalSolverError when no status line is present.
SolveResult parse_sat_output(std::string_view out, int n_vars);

/// Writes `db` plus `extra` clauses as DIMACS and runs `cmd` (a command
/// template, see run_template). A timeout yields Unknown.
SolveResult run_external_sat(const ClauseDb& db, std::span<const Clause> extra,
                             const std::string& cmd, std::chrono::milliseconds timeout);

}  // namespace twist
