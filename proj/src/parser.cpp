// Copyright 2026 The twist Authors
// SPDX-License-Identifier: Apache-2.0

#include "twist/parser.hpp"

#include <algorithm>
#include <charconv>
#include <string>

#include "twist/lexer.hpp"

namespace twist {

namespace {

struct ParseFailure {
  Diagnostic diag;
};

constexpr int kMaxDepth = 400;

class Parser {
 public:
  Parser(std::vector<Token> tokens, std::size_t src_size) : toks_(std::move(tokens)) {
    toks_.push_back(Token{Tok::Eof, "", {src_size, src_size}});
  }

  ParseResult run() {
    ParseResult result;
    try {
      Program p = program();
      for (auto& d : warnings_) result.diagnostics.push_back(std::move(d));
      check_program(p, result.diagnostics);
      if (!has_errors(result.diagnostics)) result.program = std::move(p);
    } catch (const ParseFailure& f) {
      for (auto& d : warnings_) result.diagnostics.push_back(std::move(d));
      result.diagnostics.push_back(f.diag);
    }
    return result;
  }

 private:
  // -- token helpers -------------------------------------------------------

  const Token& peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  bool at(Tok t) const { return peek().kind == t; }
  bool accept(Tok t) {
    if (!at(t)) return false;
    ++pos_;
    return true;
  }
  const Token& advance() {
    const Token& t = peek();
    if (pos_ < toks_.size() - 1) ++pos_;
    return t;
  }
  Span prev_span() const { return pos_ == 0 ? Span{} : toks_[pos_ - 1].span; }

  [[noreturn]] void fail(std::string msg, Span span, std::optional<std::string> note = {}) {
    throw ParseFailure{{Severity::Error, std::move(msg), span, std::move(note)}};
  }
  [[noreturn]] void fail_expected(const std::string& what) {
    const Token& t = peek();
    std::string found = t.kind == Tok::Eof ? "end of input" : "'" + t.text + "'";
    fail("expected " + what + ", found " + found, t.span);
  }
  const Token& expect(Tok t, const std::string& what) {
    if (!at(t)) fail_expected(what);
    return advance();
  }

  struct DepthGuard {
    explicit DepthGuard(Parser& p) : p(p) {
      if (p.depth_ >= kMaxDepth) p.fail("nesting too deep", p.peek().span);
      ++p.depth_;
    }
    ~DepthGuard() { --p.depth_; }
    Parser& p;
  };

  bool is_set_name(const std::string& n) const {
    return std::any_of(sets_.begin(), sets_.end(), [&](const auto& s) { return s == n; });
  }
  bool is_numeric(const std::string& n) const {
    return std::any_of(numerics_.begin(), numerics_.end(), [&](const auto& s) { return s == n; });
  }

  // -- program ---------------------------------------------------------------

  Program program() {
    Program p;
    bool formulas_header = false;
    while (!formulas_header) {
      if (at(Tok::KwSets) && peek(1).kind == Tok::Colon) {
        pos_ += 2;
      } else if (at(Tok::Var) && peek(1).kind == Tok::Assign) {
        const Token& name = advance();
        advance();
        if (is_set_name(name.text)) fail("duplicate set declaration '" + name.text + "'", name.span);
        SetExpr value = set_expr();
        p.sets.push_back(SetDecl{name.text, std::move(value), cover(name.span, prev_span())});
        sets_.push_back(name.text);
      } else if (at(Tok::KwInt) || at(Tok::KwReal)) {
        NumericSort sort = advance().kind == Tok::KwInt ? NumericSort::Int : NumericSort::Real;
        do {
          const Token& name = expect(Tok::Ident, "a numeric symbol name");
          if (is_numeric(name.text))
            fail("duplicate numeric declaration '" + name.text + "'", name.span);
          if (is_set_name("$" + name.text))
            fail("numeric symbol '" + name.text + "' clashes with set $" + name.text, name.span);
          p.numerics.push_back(NumericDecl{sort, name.text, name.span});
          numerics_.push_back(name.text);
        } while (accept(Tok::Comma));
      } else if (at(Tok::KwFormulas) && peek(1).kind == Tok::Colon) {
        pos_ += 2;
        formulas_header = true;
      } else {
        break;
      }
    }
    while (!at(Tok::Eof)) p.formulas.push_back(formula());
    if (p.formulas.empty()) fail("expected at least one formula", peek().span);
    return p;
  }

  // -- formulas ----------------------------------------------------------------

  Expr formula() {
    DepthGuard g(*this);
    Expr lhs = implication();
    while (at(Tok::Equiv)) {
      advance();
      Expr rhs = operand("'<=>'", [this] { return implication(); });
      lhs = connective(Expr::Kind::Iff, std::move(lhs), std::move(rhs));
    }
    return lhs;
  }

  Expr implication() {
    DepthGuard g(*this);
    Expr lhs = disjunction();
    if (at(Tok::Implies)) {
      advance();
      Expr rhs = operand("'=>'", [this] { return implication(); });
      return connective(Expr::Kind::Impl, std::move(lhs), std::move(rhs));
    }
    return lhs;
  }

  Expr disjunction() {
    Expr lhs = conjunction();
    while (at(Tok::KwOr)) {
      advance();
      Expr rhs = operand("'or'", [this] { return conjunction(); });
      lhs = connective(Expr::Kind::Or, std::move(lhs), std::move(rhs));
    }
    return lhs;
  }

  Expr conjunction() {
    Expr lhs = unary();
    while (at(Tok::KwAnd)) {
      advance();
      Expr rhs = operand("'and'", [this] { return unary(); });
      lhs = connective(Expr::Kind::And, std::move(lhs), std::move(rhs));
    }
    return lhs;
  }

  template <typename F>
  Expr operand(const std::string& after, F&& parse_rhs) {
    if (at(Tok::Eof) || at(Tok::KwEnd) || at(Tok::RParen))
      fail("expected formula after " + after, peek().span);
    return parse_rhs();
  }

  static Expr connective(Expr::Kind k, Expr a, Expr b) {
    Expr e;
    e.kind = k;
    e.span = cover(a.span, b.span);
    e.children.push_back(std::move(a));
    e.children.push_back(std::move(b));
    return e;
  }

  Expr unary() {
    DepthGuard g(*this);
    if (at(Tok::KwNot)) {
      Span start = advance().span;
      Expr inner = operand("'not'", [this] { return unary(); });
      Expr e;
      e.kind = Expr::Kind::Not;
      e.span = cover(start, inner.span);
      e.children.push_back(std::move(inner));
      return e;
    }
    return primary();
  }

  static bool is_cmp(Tok t) {
    return t == Tok::Lt || t == Tok::Gt || t == Tok::Le || t == Tok::Ge || t == Tok::EqEq ||
           t == Tok::NotEq;
  }
  static CmpOp cmp_of(Tok t) {
    switch (t) {
      case Tok::Lt: return CmpOp::Lt;
      case Tok::Gt: return CmpOp::Gt;
      case Tok::Le: return CmpOp::Le;
      case Tok::Ge: return CmpOp::Ge;
      case Tok::EqEq: return CmpOp::Eq;
      default: return CmpOp::Ne;
    }
  }

  Expr primary() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::KwTop:
      case Tok::KwBot: {
        Expr e;
        e.kind = t.kind == Tok::KwTop ? Expr::Kind::True : Expr::Kind::False;
        e.span = advance().span;
        return e;
      }
      case Tok::KwBigand: return big(Expr::Kind::BigAnd);
      case Tok::KwBigor: return big(Expr::Kind::BigOr);
      case Tok::KwAtleast: return cardinality(CardKind::AtLeast);
      case Tok::KwAtmost: return cardinality(CardKind::AtMost);
      case Tok::KwExact: return cardinality(CardKind::Exact);
      case Tok::LParen: {
        const std::size_t mark = pos_;
        const std::size_t warn_mark = warnings_.size();
        std::optional<ParseFailure> first;
        try {
          Span open = advance().span;
          Expr inner = formula();
          Span close = expect(Tok::RParen, "')'").span;
          if (!is_cmp(peek().kind) && !at(Tok::Plus) && !at(Tok::Minus) && !at(Tok::Star) &&
              !at(Tok::Slash) && !at(Tok::KwMod)) {
            inner.span = cover(open, close);
            return inner;
          }
        } catch (const ParseFailure& f) {
          first = f;
        }
        pos_ = mark;
        warnings_.resize(warn_mark);
        try {
          return comparison_or_atom();
        } catch (const ParseFailure& second) {
          // Report whichever reading got further into the input.
          if (first && first->diag.span.begin > second.diag.span.begin) throw *first;
          throw;
        }
      }
      case Tok::Var:
        if (peek(1).kind == Tok::LParen && !peek(1).line_start) {
          const Token& name = advance();
          Expr e;
          e.kind = Expr::Kind::VarAtom;
          e.name = name.text;
          e.indices = index_list();
          e.span = cover(name.span, prev_span());
          return e;
        }
        return comparison_or_atom();
      case Tok::Ident:
      case Tok::Int:
      case Tok::Rat:
      case Tok::Minus:
      case Tok::KwSqrt:
        return comparison_or_atom();
      default:
        fail_expected("formula");
    }
  }

  Expr comparison_or_atom() {
    ArithExpr lhs = arith();
    if (is_cmp(peek().kind)) {
      CmpOp op = cmp_of(advance().kind);
      ArithExpr rhs = arith();
      Expr e;
      e.kind = Expr::Kind::Compare;
      e.cmp = op;
      e.span = cover(lhs.span, rhs.span);
      e.operands = {std::move(lhs), std::move(rhs)};
      return e;
    }
    Expr e;
    e.span = lhs.span;
    if (lhs.kind == ArithExpr::Kind::Const && lhs.value.is_sym()) {
      e.kind = Expr::Kind::Atom;
      e.name = lhs.value.as_sym();
      return e;
    }
    if (lhs.kind == ArithExpr::Kind::NumTerm) {
      if (is_numeric(lhs.name))
        fail("numeric symbol '" + lhs.name + "' used as a proposition", lhs.span,
             "compare it with ==, <, ... to form a theory atom");
      e.kind = Expr::Kind::Atom;
      e.name = lhs.name;
      e.indices = std::move(lhs.args);
      return e;
    }
    if (lhs.kind == ArithExpr::Kind::Var) {
      e.kind = Expr::Kind::VarAtom;
      e.name = lhs.name;
      return e;
    }
    fail("expected formula, found an arithmetic expression", lhs.span,
         "did you forget a comparison operator?");
  }

  std::vector<ArithExpr> index_list() {
    expect(Tok::LParen, "'('");
    std::vector<ArithExpr> out;
    do {
      out.push_back(arith());
    } while (accept(Tok::Comma));
    expect(Tok::RParen, "')' closing the index list");
    return out;
  }

  std::vector<Binder> binders() {
    std::vector<Binder> out;
    do {
      const Token& v = expect(Tok::Var, "a binder variable like $i");
      for (const auto& b : out)
        if (b.var == v.text) fail("binder variable '" + v.text + "' bound twice", v.span);
      expect(Tok::KwIn, "'in'");
      SetExpr dom = set_expr();
      out.push_back(Binder{v.text, std::move(dom), cover(v.span, prev_span())});
    } while (accept(Tok::Comma));
    return out;
  }

  // Shared tail of big operators and cardinality: [when cond] ':' body 'end'.
  void binder_tail(Expr& e, Span start) {
    if (accept(Tok::KwWhen)) e.when = cond();
    if (!accept(Tok::Colon)) {
      if (at(Tok::KwEnd) || at(Tok::Eof)) fail_expected("':' followed by a formula");
      warnings_.push_back({Severity::Warning, "missing ':' before the body", peek().span,
                           "write ': ' after the binder list"});
    }
    e.children.push_back(formula());
    expect(Tok::KwEnd, "'end'");
    e.span = cover(start, prev_span());
  }

  Expr big(Expr::Kind kind) {
    DepthGuard g(*this);
    Span start = advance().span;
    Expr e;
    e.kind = kind;
    e.binders = binders();
    binder_tail(e, start);
    return e;
  }

  Expr cardinality(CardKind kind) {
    DepthGuard g(*this);
    Span start = advance().span;
    Expr e;
    e.kind = Expr::Kind::Card;
    e.card = kind;
    e.operands.push_back(arith());
    expect(Tok::Comma, "',' after the cardinality bound");
    e.binders = binders();
    binder_tail(e, start);
    return e;
  }

  // -- conditions --------------------------------------------------------------

  Cond cond() {
    DepthGuard g(*this);
    Cond lhs = cond_and();
    while (accept(Tok::KwOr)) lhs = cond_join(Cond::Kind::Or, std::move(lhs), cond_and());
    return lhs;
  }

  Cond cond_and() {
    Cond lhs = cond_not();
    while (accept(Tok::KwAnd)) lhs = cond_join(Cond::Kind::And, std::move(lhs), cond_not());
    return lhs;
  }

  static Cond cond_join(Cond::Kind k, Cond a, Cond b) {
    Cond c;
    c.kind = k;
    c.span = cover(a.span, b.span);
    c.args.push_back(std::move(a));
    c.args.push_back(std::move(b));
    return c;
  }

  Cond cond_not() {
    DepthGuard g(*this);
    if (at(Tok::KwNot)) {
      Span start = advance().span;
      Cond inner = cond_not();
      Cond c;
      c.kind = Cond::Kind::Not;
      c.span = cover(start, inner.span);
      c.args.push_back(std::move(inner));
      return c;
    }
    if (at(Tok::LParen)) {
      const std::size_t mark = pos_;
      try {
        Span open = advance().span;
        Cond inner = cond();
        Span close = expect(Tok::RParen, "')'").span;
        if (!is_cmp(peek().kind) && !at(Tok::KwIn) && !at(Tok::Plus) && !at(Tok::Minus) &&
            !at(Tok::Star) && !at(Tok::Slash) && !at(Tok::KwMod)) {
          inner.span = cover(open, close);
          return inner;
        }
      } catch (const ParseFailure&) {
      }
      pos_ = mark;
    }
    ArithExpr lhs = arith();
    Cond c;
    if (accept(Tok::KwIn)) {
      c.kind = Cond::Kind::In;
      SetExpr s = set_expr();
      c.span = cover(lhs.span, s.span);
      c.operands.push_back(std::move(lhs));
      c.set.push_back(std::move(s));
      return c;
    }
    if (!is_cmp(peek().kind)) fail_expected("a comparison or 'in' in the condition");
    c.kind = Cond::Kind::Compare;
    c.cmp = cmp_of(advance().kind);
    ArithExpr rhs = arith();
    c.span = cover(lhs.span, rhs.span);
    c.operands = {std::move(lhs), std::move(rhs)};
    return c;
  }

  // -- sets --------------------------------------------------------------------

  SetExpr set_expr() {
    DepthGuard g(*this);
    SetExpr lhs = set_term();
    for (;;) {
      SetExpr::Kind k;
      if (at(Tok::KwUnion)) k = SetExpr::Kind::Union;
      else if (at(Tok::KwInter)) k = SetExpr::Kind::Inter;
      else if (at(Tok::KwDiff)) k = SetExpr::Kind::Diff;
      else break;
      advance();
      SetExpr rhs = set_term();
      SetExpr s;
      s.kind = k;
      s.span = cover(lhs.span, rhs.span);
      s.args.push_back(std::move(lhs));
      s.args.push_back(std::move(rhs));
      lhs = std::move(s);
    }
    return lhs;
  }

  SetExpr set_term() {
    DepthGuard g(*this);
    if (at(Tok::Var)) {
      const Token& t = advance();
      SetExpr s;
      s.kind = SetExpr::Kind::Name;
      s.name = t.text;
      s.span = t.span;
      return s;
    }
    Span open = expect(Tok::LParen, "a set (a $-name, (lo..hi) or (a,b,...))").span;
    SetExpr s;
    if (accept(Tok::RParen)) {
      s.kind = SetExpr::Kind::Literal;
      s.span = cover(open, prev_span());
      return s;
    }
    if (at(Tok::LParen) || (at(Tok::Var) && is_set_name(peek().text))) {
      const std::size_t mark = pos_;
      try {
        SetExpr inner = set_expr();
        Span close = expect(Tok::RParen, "')'").span;
        inner.span = cover(open, close);
        return inner;
      } catch (const ParseFailure&) {
        pos_ = mark;
      }
    }
    ArithExpr first = arith();
    if (accept(Tok::DotDot)) {
      s.kind = SetExpr::Kind::Range;
      s.items.push_back(std::move(first));
      s.items.push_back(arith());
      expect(Tok::RParen, "')' closing the range");
    } else if (at(Tok::Comma)) {
      s.kind = SetExpr::Kind::Literal;
      s.items.push_back(std::move(first));
      while (accept(Tok::Comma)) {
        if (at(Tok::RParen)) break;
        s.items.push_back(arith());
      }
      expect(Tok::RParen, "')' closing the set");
    } else if (at(Tok::RParen)) {
      fail("a parenthesized value is not a set", cover(open, peek().span),
           "write a one-element set with a trailing comma, e.g. (A,)");
    } else {
      fail_expected("'..', ',' or ')' in a set");
    }
    s.span = cover(open, prev_span());
    return s;
  }

  // -- arithmetic --------------------------------------------------------------

  static ArithExpr binary(ArithExpr::Kind k, ArithExpr a, ArithExpr b) {
    ArithExpr e;
    e.kind = k;
    e.span = cover(a.span, b.span);
    e.args.push_back(std::move(a));
    e.args.push_back(std::move(b));
    return e;
  }

  ArithExpr arith() {
    DepthGuard g(*this);
    ArithExpr lhs = arith_term();
    for (;;) {
      ArithExpr::Kind k;
      if (at(Tok::Plus)) k = ArithExpr::Kind::Add;
      else if (at(Tok::Minus)) k = ArithExpr::Kind::Sub;
      else break;
      advance();
      lhs = binary(k, std::move(lhs), arith_term());
    }
    return lhs;
  }

  ArithExpr arith_term() {
    ArithExpr lhs = arith_factor();
    for (;;) {
      ArithExpr::Kind k;
      if (at(Tok::Star)) k = ArithExpr::Kind::Mul;
      else if (at(Tok::Slash)) k = ArithExpr::Kind::Div;
      else if (at(Tok::KwMod)) k = ArithExpr::Kind::Mod;
      else break;
      advance();
      lhs = binary(k, std::move(lhs), arith_factor());
    }
    return lhs;
  }

  ArithExpr arith_factor() {
    DepthGuard g(*this);
    if (at(Tok::Minus)) {
      Span start = advance().span;
      if (at(Tok::Int) || at(Tok::Rat)) {
        ArithExpr c = number(true);
        c.span = cover(start, c.span);
        return c;
      }
      ArithExpr operand = arith_factor();
      ArithExpr zero;
      zero.value = Scalar::integer(0);
      zero.span = start;
      ArithExpr e = binary(ArithExpr::Kind::Sub, std::move(zero), std::move(operand));
      return e;
    }
    return arith_primary();
  }

  ArithExpr number(bool negate) {
    const Token& t = advance();
    ArithExpr e;
    e.span = t.span;
    const char* first = t.text.data();
    const char* last = first + t.text.size();
    if (t.kind == Tok::Int) {
      std::int64_t v = 0;
      auto [p, ec] = std::from_chars(first, last, v);
      if (ec != std::errc() || p != last) fail("integer literal out of range", t.span);
      e.value = Scalar::integer(negate ? -v : v);
    } else {
      double v = 0;
      auto [p, ec] = std::from_chars(first, last, v);
      if (ec != std::errc() || p != last) fail("number literal out of range", t.span);
      e.value = Scalar::rational(negate ? -v : v);
    }
    return e;
  }

  ArithExpr arith_primary() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Int:
      case Tok::Rat: return number(false);
      case Tok::Var: {
        ArithExpr e;
        e.kind = ArithExpr::Kind::Var;
        e.name = t.text;
        e.span = advance().span;
        return e;
      }
      case Tok::Ident: {
        const Token& name = advance();
        ArithExpr e;
        e.span = name.span;
        if (at(Tok::LParen) && !peek().line_start) {
          e.kind = ArithExpr::Kind::NumTerm;
          e.name = name.text;
          e.args = index_list();
          e.span = cover(name.span, prev_span());
        } else if (is_numeric(name.text)) {
          e.kind = ArithExpr::Kind::NumTerm;
          e.name = name.text;
        } else {
          e.value = Scalar::symbol(name.text);
        }
        return e;
      }
      case Tok::KwSqrt: {
        Span start = advance().span;
        expect(Tok::LParen, "'(' after 'sqrt'");
        ArithExpr inner = arith();
        expect(Tok::RParen, "')'");
        ArithExpr e;
        e.kind = ArithExpr::Kind::Sqrt;
        e.span = cover(start, prev_span());
        e.args.push_back(std::move(inner));
        return e;
      }
      case Tok::LParen: {
        Span open = advance().span;
        ArithExpr inner = arith();
        Span close = expect(Tok::RParen, "')'").span;
        inner.span = cover(open, close);
        return inner;
      }
      default:
        fail_expected("an arithmetic expression");
    }
  }

  // -- scope checking ----------------------------------------------------------

  struct Scoper {
    const Parser& parser;
    std::vector<std::string> scope;
    std::vector<Diagnostic>& out;

    bool visible(const std::string& v) const {
      return std::find(scope.begin(), scope.end(), v) != scope.end() || parser.is_set_name(v);
    }
    void unbound(const std::string& v, Span s) {
      out.push_back({Severity::Error, "unbound variable '" + v + "'", s,
                     "bind it with 'bigand " + v + " in ...' or declare it as a set"});
    }
    void arith(const ArithExpr& a) {
      if (a.kind == ArithExpr::Kind::Var && !visible(a.name)) unbound(a.name, a.span);
      for (const auto& c : a.args) arith(c);
    }
    void set(const SetExpr& s) {
      if (s.kind == SetExpr::Kind::Name && !visible(s.name)) unbound(s.name, s.span);
      for (const auto& i : s.items) arith(i);
      for (const auto& c : s.args) set(c);
    }
    void cond(const Cond& c) {
      for (const auto& o : c.operands) arith(o);
      for (const auto& s : c.set) set(s);
      for (const auto& a : c.args) cond(a);
    }
    void expr(const Expr& e) {
      if (e.kind == Expr::Kind::VarAtom && !visible(e.name)) unbound(e.name, e.span);
      for (const auto& i : e.indices) arith(i);
      for (const auto& o : e.operands) arith(o);
      const std::size_t mark = scope.size();
      for (const auto& b : e.binders) {
        set(b.domain);
        scope.push_back(b.var);
      }
      if (e.when) cond(*e.when);
      for (const auto& c : e.children) expr(c);
      scope.resize(mark);
    }
  };

  void check_program(const Program& p, std::vector<Diagnostic>& out) const {
    std::vector<std::string> declared;
    for (const auto& d : p.sets) {
      for (const auto& v : free_vars(d.value)) {
        if (std::find(declared.begin(), declared.end(), v) == declared.end())
          out.push_back({Severity::Error, "set '" + v + "' is used before it is declared",
                         d.span, std::nullopt});
      }
      declared.push_back(d.name);
    }
    Scoper s{*this, {}, out};
    for (const auto& f : p.formulas) s.expr(f);
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  int depth_ = 0;
  std::vector<std::string> sets_;
  std::vector<std::string> numerics_;
  std::vector<Diagnostic> warnings_;
};

}  // namespace

ParseResult parse(std::string_view raw) {
  std::string src = normalize_newlines(raw);
  LexResult lex = tokenize(src);
  if (has_errors(lex.diagnostics)) {
    ParseResult r;
    r.diagnostics = std::move(lex.diagnostics);
    return r;
  }
  return Parser(std::move(lex.tokens), src.size()).run();
}

}  // namespace twist
