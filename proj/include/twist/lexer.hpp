// Copyright 2026 The twist Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "twist/diagnostic.hpp"

namespace twist {

enum class Tok {
  // literals and names
  Ident, Var, Int, Rat,
  // keywords
  KwBigand, KwBigor, KwAtleast, KwAtmost, KwExact, KwWhen, KwIn, KwAnd, KwOr, KwNot,
  KwEnd, KwInt, KwReal, KwSets, KwFormulas, KwMod, KwSqrt, KwUnion, KwInter, KwDiff,
  KwTop, KwBot,
  // punctuation
  Implies, Equiv, EqEq, NotEq, Le, Ge, Lt, Gt, Plus, Minus, Star, Slash, LParen, RParen,
  Comma, Colon, Assign, DotDot,
  Eof,
};

struct Token {
  Tok kind = Tok::Eof;
  std::string text;
  Span span;
  bool line_start = false;  // first token on its line
};

/// Human-readable token description for diagnostics, e.g. "'and'" or "identifier".
std::string describe(Tok t);

struct LexResult {
  std::vector<Token> tokens;  // no trailing Eof token
  std::vector<Diagnostic> diagnostics;
};

/// Splits newline-normalized source into tokens. `;;` starts a comment
/// running to end of line.
LexResult tokenize(std::string_view src);

}  // namespace twist
