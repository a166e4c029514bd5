// Copyright 2026 The twist Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

#include "twist/ast.hpp"

namespace twist {

/// Input-language text that parses back to a structurally equal AST.
std::string render_input(const ArithExpr& a);
std::string render_input(const SetExpr& s);
std::string render_input(const Cond& c);
std::string render_input(const Expr& e);
std::string render_input(const Program& p);

/// Display-language (LaTeX math) rendering. Never emits `$`.
///
/// Cardinality operators render as an annotated big conjunction:
/// `\bigwedge^{\leq k}_{...}` (at most), `\bigwedge^{\geq k}_{...}` (at
/// least) and `\bigwedge^{= k}_{...}` (exactly).
std::string render_latex(const ArithExpr& a);
std::string render_latex(const SetExpr& s);
std::string render_latex(const Cond& c);
std::string render_latex(const Expr& e);
std::string render_latex(const Program& p);

}  // namespace twist
