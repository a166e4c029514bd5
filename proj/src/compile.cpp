// Copyright 2026 The twist Authors
// SPDX-License-Identifier: Apache-2.0

#include "twist/compile.hpp"

#include "twist/parser.hpp"

namespace twist {

std::string Compiled::format(std::string_view filename) const {
  std::string out;
  for (const auto& d : diagnostics) out += format_diagnostic(d, source, filename);
  return out;
}

Compiled compile(std::string_view source, const CompileOptions& opts) {
  Compiled c;
  c.source = normalize_newlines(source);
  ParseResult parsed = parse(c.source);
  c.diagnostics = std::move(parsed.diagnostics);
  if (!parsed.ok()) return c;
  c.program = std::move(parsed.program);
  try {
    c.ground = ground(*c.program);
    c.logic = classify(*c.ground);
    if (c.logic == Logic::PureSat && !opts.skip_cnf) c.cnf = tseitin(*c.ground, opts.encoding);
  } catch (const CompileError& e) {
    c.diagnostics.push_back(e.diagnostic());
  }
  return c;
}

}  // namespace twist
