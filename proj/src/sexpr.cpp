// Copyright 2026 The twist Authors
// SPDX-License-Identifier: Apache-2.0

#include "twist/sexpr.hpp"

#include <cctype>
#include <set>
#include <unordered_set>

namespace twist {

namespace {

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  std::vector<SExpr> all() {
    std::vector<SExpr> out;
    for (;;) {
      skip();
      if (pos_ >= text_.size()) return out;
      out.push_back(read());
    }
  }

 private:
  void skip() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else if (c == ';') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else {
        return;
      }
    }
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw SExprError(what + " at offset " + std::to_string(pos_));
  }

  SExpr read() {
    skip();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (c == ')') fail("unbalanced ')'");
    if (c == '(') {
      ++pos_;
      SExpr list;
      list.is_list = true;
      for (;;) {
        skip();
        if (pos_ >= text_.size()) fail("unclosed '('");
        if (text_[pos_] == ')') {
          ++pos_;
          return list;
        }
        list.items.push_back(read());
      }
    }
    const std::size_t start = pos_;
    if (c == '|' || c == '"') {
      const std::size_t end = text_.find(c, pos_ + 1);
      if (end == std::string_view::npos) fail(c == '|' ? "unterminated quoted symbol" : "unterminated string");
      pos_ = end + 1;
    } else {
      while (pos_ < text_.size()) {
        const char d = text_[pos_];
        if (std::isspace(static_cast<unsigned char>(d)) || d == '(' || d == ')' || d == ';' ||
            d == '|' || d == '"')
          break;
        ++pos_;
      }
    }
    SExpr atom;
    atom.atom = std::string(text_.substr(start, pos_ - start));
    return atom;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

bool is_number(const std::string& s) {
  if (s.empty() || !std::isdigit(static_cast<unsigned char>(s[0]))) return false;
  bool dot = false;
  for (char c : s) {
    if (c == '.' && !dot) dot = true;
    else if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return s.back() != '.';
}

const std::unordered_set<std::string>& builtins() {
  static const std::unordered_set<std::string> names = {
      "true", "false", "not", "and", "or", "xor", "=>", "=", "distinct", "ite", "+", "-", "*",
      "/", "div", "mod", "abs", "<", "<=", ">", ">=", "to_real", "to_int", "is_int"};
  return names;
}

const std::set<std::string>& sorts() {
  static const std::set<std::string> names = {"Bool", "Int", "Real"};
  return names;
}

class ScriptChecker {
 public:
  void command(const SExpr& c) {
    if (!c.is_list || c.items.empty() || c.items[0].is_list)
      throw SExprError("command is not a non-empty list: " + to_string(c));
    const std::string& head = c.items[0].atom;
    if (head == "set-option" || head == "set-info") {
      if (c.items.size() != 3) throw SExprError(head + " takes a keyword and a value");
    } else if (head == "set-logic") {
      if (c.items.size() != 2 || c.items[1].is_list) throw SExprError("set-logic takes one symbol");
      if (seen_logic_) throw SExprError("set-logic given twice");
      seen_logic_ = true;
    } else if (head == "declare-const") {
      if (c.items.size() != 3 || c.items[1].is_list || !is_sort(c.items[2]))
        throw SExprError("malformed declare-const: " + to_string(c));
      declare(c.items[1].atom);
    } else if (head == "declare-fun") {
      if (c.items.size() != 4 || c.items[1].is_list || !c.items[2].is_list ||
          !is_sort(c.items[3]))
        throw SExprError("malformed declare-fun: " + to_string(c));
      for (const auto& s : c.items[2].items)
        if (!is_sort(s)) throw SExprError("unknown sort in " + to_string(c));
      declare(c.items[1].atom);
    } else if (head == "assert") {
      if (c.items.size() != 2) throw SExprError("assert takes one term");
      term(c.items[1]);
    } else if (head == "check-sat" || head == "get-model" || head == "exit") {
      if (c.items.size() != 1) throw SExprError(head + " takes no arguments");
    } else {
      throw SExprError("unsupported command '" + head + "'");
    }
  }

 private:
  static bool is_sort(const SExpr& s) { return !s.is_list && sorts().count(s.atom); }

  void declare(const std::string& raw) {
    const std::string name = unquote_symbol(raw);
    if (!declared_.insert(name).second) throw SExprError("symbol '" + name + "' declared twice");
  }

  bool bound(const std::string& name) const {
    if (declared_.count(name)) return true;
    for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it)
      if (it->count(name)) return true;
    return false;
  }

  void symbol(const std::string& raw) {
    if (is_number(raw)) return;
    if (raw.empty() || raw[0] == '"' || raw[0] == ':') throw SExprError("unexpected atom '" + raw + "'");
    if (raw[0] != '|' && builtins().count(raw)) return;
    if (!bound(unquote_symbol(raw))) throw SExprError("symbol '" + raw + "' used before declaration");
  }

  void term(const SExpr& t) {
    if (!t.is_list) {
      symbol(t.atom);
      return;
    }
    if (t.items.empty()) throw SExprError("empty application");
    const SExpr& head = t.items[0];
    if (head.is_list) throw SExprError("application head is a list: " + to_string(t));
    if (head.atom == "let") {
      if (t.items.size() != 3 || !t.items[1].is_list || t.items[1].items.empty())
        throw SExprError("malformed let: " + to_string(t));
      std::unordered_set<std::string> scope;
      for (const auto& b : t.items[1].items) {
        if (!b.is_list || b.items.size() != 2 || b.items[0].is_list)
          throw SExprError("malformed let binding: " + to_string(b));
        term(b.items[1]);  // parallel let: bindings see only the outer scope
        if (!scope.insert(unquote_symbol(b.items[0].atom)).second)
          throw SExprError("name bound twice in one let: " + b.items[0].atom);
      }
      scopes_.push_back(std::move(scope));
      term(t.items[2]);
      scopes_.pop_back();
      return;
    }
    if (t.items.size() < 2) throw SExprError("application without arguments: " + to_string(t));
    if (head.atom[0] == '|' || !builtins().count(head.atom)) symbol(head.atom);
    for (std::size_t i = 1; i < t.items.size(); ++i) term(t.items[i]);
  }

  bool seen_logic_ = false;
  std::unordered_set<std::string> declared_;
  std::vector<std::unordered_set<std::string>> scopes_;
};

}  // namespace

std::vector<SExpr> parse_sexprs(std::string_view text) { return Reader(text).all(); }

std::string to_string(const SExpr& e) {
  if (!e.is_list) return e.atom;
  std::string out = "(";
  for (std::size_t i = 0; i < e.items.size(); ++i) {
    if (i) out += " ";
    out += to_string(e.items[i]);
  }
  return out + ")";
}

std::string unquote_symbol(const std::string& atom) {
  if (atom.size() >= 2 && atom.front() == '|' && atom.back() == '|')
    return atom.substr(1, atom.size() - 2);
  return atom;
}

void check_script(std::string_view script) {
  ScriptChecker checker;
  for (const auto& c : parse_sexprs(script)) checker.command(c);
}

}  // namespace twist
