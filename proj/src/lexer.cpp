// Copyright 2026 The twist Authors
// SPDX-License-Identifier: Apache-2.0

#include "twist/lexer.hpp"

#include <array>
#include <utility>

namespace twist {

namespace {

constexpr std::array<std::pair<std::string_view, Tok>, 22> kKeywords{{
    {"bigand", Tok::KwBigand}, {"bigor", Tok::KwBigor},     {"atleast", Tok::KwAtleast},
    {"atmost", Tok::KwAtmost}, {"exact", Tok::KwExact},     {"when", Tok::KwWhen},
    {"in", Tok::KwIn},         {"and", Tok::KwAnd},         {"or", Tok::KwOr},
    {"not", Tok::KwNot},       {"end", Tok::KwEnd},         {"int", Tok::KwInt},
    {"real", Tok::KwReal},     {"sets", Tok::KwSets},       {"formulas", Tok::KwFormulas},
    {"mod", Tok::KwMod},       {"sqrt", Tok::KwSqrt},       {"union", Tok::KwUnion},
    {"inter", Tok::KwInter},   {"diff", Tok::KwDiff},       {"Top", Tok::KwTop},
    {"Bot", Tok::KwBot},
}};

// Longest match first.
constexpr std::array<std::pair<std::string_view, Tok>, 18> kPunct{{
    {"<=>", Tok::Equiv}, {"=>", Tok::Implies}, {"==", Tok::EqEq},  {"!=", Tok::NotEq},
    {"<=", Tok::Le},     {">=", Tok::Ge},      {"..", Tok::DotDot}, {"<", Tok::Lt},
    {">", Tok::Gt},      {"+", Tok::Plus},     {"-", Tok::Minus},   {"*", Tok::Star},
    {"/", Tok::Slash},   {"(", Tok::LParen},   {")", Tok::RParen},  {",", Tok::Comma},
    {":", Tok::Colon},   {"=", Tok::Assign},
}};

bool is_alpha(char c) { return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z'); }
bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_word(char c) { return is_alpha(c) || is_digit(c) || c == '_'; }

// Length of the UTF-8 sequence starting at src[i], clamped to the input and
// to well-formed continuation bytes.
std::size_t utf8_length(std::string_view src, std::size_t i) {
  auto lead = static_cast<unsigned char>(src[i]);
  std::size_t n = lead < 0x80 ? 1 : (lead >> 5) == 0x6 ? 2 : (lead >> 4) == 0xE ? 3
                  : (lead >> 3) == 0x1E ? 4 : 1;
  std::size_t len = 1;
  while (len < n && i + len < src.size() &&
         (static_cast<unsigned char>(src[i + len]) & 0xC0) == 0x80)
    ++len;
  return len;
}

}  // namespace

std::string describe(Tok t) {
  switch (t) {
    case Tok::Ident: return "identifier";
    case Tok::Var: return "$-variable";
    case Tok::Int: return "integer";
    case Tok::Rat: return "number";
    case Tok::Eof: return "end of input";
    default: break;
  }
  for (const auto& [text, tok] : kKeywords)
    if (tok == t) return "'" + std::string(text) + "'";
  for (const auto& [text, tok] : kPunct)
    if (tok == t) return "'" + std::string(text) + "'";
  return "token";
}

LexResult tokenize(std::string_view src) {
  LexResult out;
  std::size_t i = 0;
  bool line_start = true;
  auto push = [&](Tok kind, std::size_t begin, std::size_t end) {
    out.tokens.push_back(
        Token{kind, std::string(src.substr(begin, end - begin)), {begin, end}, line_start});
    line_start = false;
  };

  while (i < src.size()) {
    char c = src[i];
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v') {
      if (c == '\n') line_start = true;
      ++i;
      continue;
    }
    if (c == ';' && i + 1 < src.size() && src[i + 1] == ';') {
      while (i < src.size() && src[i] != '\n') ++i;
      continue;
    }
    const std::size_t begin = i;

    if (is_alpha(c)) {
      while (i < src.size() && is_word(src[i])) ++i;
      std::string_view word = src.substr(begin, i - begin);
      Tok kind = Tok::Ident;
      for (const auto& [text, tok] : kKeywords)
        if (text == word) kind = tok;
      push(kind, begin, i);
      continue;
    }

    if (c == '$') {
      ++i;
      if (i >= src.size() || !is_alpha(src[i])) {
        out.diagnostics.push_back({Severity::Error, "expected a name after '$'", {begin, i},
                                   "variables look like $i or $Facts"});
        continue;
      }
      while (i < src.size() && is_word(src[i])) ++i;
      push(Tok::Var, begin, i);
      continue;
    }

    if (is_digit(c)) {
      while (i < src.size() && is_digit(src[i])) ++i;
      bool rational = false;
      if (i + 1 < src.size() && src[i] == '.' && is_digit(src[i + 1])) {
        rational = true;
        ++i;
        while (i < src.size() && is_digit(src[i])) ++i;
      }
      if (i < src.size() && (src[i] == 'e' || src[i] == 'E')) {
        std::size_t j = i + 1;
        if (j < src.size() && (src[j] == '+' || src[j] == '-')) ++j;
        if (j < src.size() && is_digit(src[j])) {
          rational = true;
          i = j;
          while (i < src.size() && is_digit(src[i])) ++i;
        }
      }
      if (i < src.size() && is_alpha(src[i])) {
        while (i < src.size() && is_word(src[i])) ++i;
        out.diagnostics.push_back(
            {Severity::Error, "malformed number '" + std::string(src.substr(begin, i - begin)) + "'",
             {begin, i}, std::nullopt});
        continue;
      }
      push(rational ? Tok::Rat : Tok::Int, begin, i);
      continue;
    }

    bool matched = false;
    for (const auto& [text, tok] : kPunct) {
      if (src.substr(i, text.size()) == text) {
        i += text.size();
        push(tok, begin, i);
        matched = true;
        break;
      }
    }
    if (matched) continue;

    std::size_t len = utf8_length(src, i);
    i += len;
    std::string shown;
    for (std::size_t k = begin; k < i; ++k) {
      auto b = static_cast<unsigned char>(src[k]);
      if (b >= 0x20 && b < 0x7F) {
        shown.push_back(static_cast<char>(b));
      } else {
        static constexpr char kHex[] = "0123456789ABCDEF";
        shown += "\\x";
        shown.push_back(kHex[b >> 4]);
        shown.push_back(kHex[b & 0xF]);
      }
    }
    if (c == '_')
      out.diagnostics.push_back({Severity::Error, "names may not start with '_'", {begin, i},
                                 "the '_' prefix is reserved for generated atoms"});
    else
      out.diagnostics.push_back(
          {Severity::Error, "unexpected character '" + shown + "'", {begin, i}, std::nullopt});
  }
  return out;
}

}  // namespace twist
