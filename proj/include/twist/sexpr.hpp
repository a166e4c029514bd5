// Copyright 2026 The twist Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace twist {

/// S-expression as read from SMT-LIB text. Atoms keep their spelling,
/// including the bars of quoted symbols and the quotes of strings.
struct SExpr {
  bool is_list = false;
  std::string atom;
  std::vector<SExpr> items;

  bool is_atom(std::string_view s) const { return !is_list && atom == s; }
};

class SExprError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::vector<SExpr> parse_sexprs(std::string_view text);

std::string to_string(const SExpr& e);

/// `|foo|` becomes `foo`; other atoms are returned as is.
std::string unquote_symbol(const std::string& atom);

/// Checks that `script` is a sequence of well-formed commands in which every
/// symbol is declared exactly once and before use (let-bound names are
/// scoped to their body). Throws SExprError describing the first problem.
void check_script(std::string_view script);

}  // namespace twist
