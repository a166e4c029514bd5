// Copyright 2026 The twist Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <chrono>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "twist/ground.hpp"
#include "twist/sat.hpp"

namespace twist {

enum class Logic { PureSat, QF_IDL, QF_RDL, QF_LIA, QF_LRA };

std::string_view to_string(Logic logic);

/// Exact fraction with a positive denominator, always in lowest terms.
/// Arithmetic throws std::overflow_error when a result leaves int64.
class Rational {
 public:
  Rational() = default;
  Rational(std::int64_t n) : num_(n) {}  // NOLINT(google-explicit-constructor)
  Rational(std::int64_t n, std::int64_t d);

  /// `-12`, `3.25`, `1e-3`, `2.5e+10`; throws std::invalid_argument.
  static Rational parse(std::string_view text);
  /// Integers and rationals; symbols throw TypeError.
  static Rational from_scalar(const Scalar& s);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  bool is_integer() const { return den_ == 1; }

  /// `7`, `-7/2`.
  std::string to_string() const;

  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a) { return Rational(0) - a; }
  friend bool operator==(const Rational& a, const Rational& b) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

/// Pure-sat when no theory atom occurs. Otherwise difference logic when
/// every theory atom is a bound or a difference `x - y` against a constant,
/// linear arithmetic when atoms are affine. Throws CompileError for
/// products of numeric terms, mixed Int/Real sorts, or integer division.
Logic classify(const GroundFormula& g);

struct SmtScript {
  Logic logic = Logic::PureSat;
  std::string text;
  std::vector<std::string> bool_atoms;                       // first-occurrence order
  std::vector<std::pair<std::string, NumericSort>> theory_vars;  // first-occurrence order
};

/// SMT-LIB 2 script asserting `g`. Refuses pure-sat input unless `force`
/// (then the script uses QF_UF). `extra_asserts` are appended as additional
/// `(assert ...)` commands.
SmtScript emit_smtlib(const GroundFormula& g, bool force = false,
                      std::span<const std::string> extra_asserts = {});

/// SMT-LIB spelling of a symbol, quoted with bars when needed.
std::string smt_symbol(const std::string& name);

struct SmtModel {
  std::vector<std::pair<std::string, bool>> atoms;
  std::vector<std::pair<std::string, Rational>> numbers;
};

struct SmtResult {
  SatStatus status = SatStatus::Unknown;
  SmtModel model;  // filled when Sat
};

/// Interprets solver output for `script`. Symbols the solver leaves out of
/// its model are reported as false / 0. Throws ExternalSolverError.
SmtResult parse_smt_output(std::string_view out, const SmtScript& script);

/// Exact re-evaluation of `g` under `m`.
bool check_smt_model(const GroundFormula& g, const SmtModel& m);

/// Solver command: `flag` if given, else $TWISTC_SMT_CMD, else `z3 -in`
/// when z3 is on PATH; empty when none is available.
std::string resolve_smt_command(const std::string& flag = {});

/// Runs the command template on the script and parses the answer. A
/// timeout yields Unknown.
SmtResult run_external_smt(const SmtScript& script, const std::string& cmd,
                           std::chrono::milliseconds timeout = std::chrono::seconds(30));

/// Enumeration over the propositional atoms: each further model differs on
/// at least one of them. Every Sat answer is re-checked against `g`.
class SmtSession {
 public:
  SmtSession(GroundFormula g, std::string cmd,
             std::chrono::milliseconds timeout = std::chrono::seconds(30));

  SmtResult next();

  const GroundFormula& formula() const { return g_; }
  std::size_t models_found() const { return found_; }
  bool exhausted() const { return exhausted_; }

 private:
  GroundFormula g_;
  std::string cmd_;
  std::chrono::milliseconds timeout_;
  std::vector<std::string> blocking_;
  std::size_t found_ = 0;
  bool exhausted_ = false;
};

}  // namespace twist
