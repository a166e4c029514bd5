// Copyright 2026 The twist Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "twist/ast.hpp"
#include "twist/cnf.hpp"
#include "twist/diagnostic.hpp"
#include "twist/ground.hpp"
#include "twist/smt.hpp"

namespace twist {

struct CompileOptions {
  CardEncoding encoding = CardEncoding::Auto;
  /// Stop after grounding and classification (no CNF).
  bool skip_cnf = false;
};

/// Everything the front end produced for one source text. Later stages are
/// present only when the earlier ones succeeded; `cnf` only for pure-sat
/// formulas.
struct Compiled {
  std::string source;  // newline-normalized; diagnostic spans index into it
  std::optional<Program> program;
  std::optional<GroundFormula> ground;
  Logic logic = Logic::PureSat;
  std::optional<ClauseDb> cnf;
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return !has_errors(diagnostics); }
  /// All diagnostics rendered with source excerpts.
  std::string format(std::string_view filename) const;
};

Compiled compile(std::string_view source, const CompileOptions& opts = {});

}  // namespace twist
