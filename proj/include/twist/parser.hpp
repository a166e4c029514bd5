// Copyright 2026 The twist Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "twist/ast.hpp"
#include "twist/diagnostic.hpp"

namespace twist {

struct ParseResult {
  std::optional<Program> program;  // absent iff diagnostics hold an error
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return program.has_value(); }
};

/// Parses a source file:
///
///     sets:
///     $N = (1..9)
///     int x
///     formulas:
///     bigand $i in $N: P($i) => Q($i+1) end
///
/// The `sets:` and `formulas:` headers are optional; top-level formulas are
/// implicitly conjoined. `\r\n` is normalized to `\n` before spans are taken.
ParseResult parse(std::string_view src);

}  // namespace twist
