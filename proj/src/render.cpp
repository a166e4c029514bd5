// Copyright 2026 The twist Authors
// SPDX-License-Identifier: Apache-2.0

#include "twist/render.hpp"

namespace twist {

namespace {

// Binding strength; larger binds tighter.
int precedence(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Iff: return 1;
    case Expr::Kind::Impl: return 2;
    case Expr::Kind::Or: return 3;
    case Expr::Kind::And: return 4;
    case Expr::Kind::Not: return 5;
    default: return 6;
  }
}

int precedence(const ArithExpr& a) {
  switch (a.kind) {
    case ArithExpr::Kind::Add:
    case ArithExpr::Kind::Sub: return 1;
    case ArithExpr::Kind::Mul:
    case ArithExpr::Kind::Div:
    case ArithExpr::Kind::Mod: return 2;
    default: return 3;
  }
}

int precedence(const Cond& c) {
  switch (c.kind) {
    case Cond::Kind::Or: return 1;
    case Cond::Kind::And: return 2;
    case Cond::Kind::Not: return 3;
    default: return 4;
  }
}

class Renderer {
 public:
  explicit Renderer(bool latex) : latex_(latex) {}

  std::string name(const std::string& n) const {
    if (!latex_) return n;
    std::string bare = !n.empty() && n[0] == '$' ? n.substr(1) : n;
    if (bare.size() == 1) return bare;
    std::string out = "\\mathit{";
    for (char c : bare) {
      if (c == '_') out += "\\_";
      else out.push_back(c);
    }
    return out + "}";
  }

  std::string open() const { return latex_ ? "\\{" : "("; }
  std::string close() const { return latex_ ? "\\}" : ")"; }

  std::string cmp(CmpOp op) const {
    switch (op) {
      case CmpOp::Lt: return "<";
      case CmpOp::Gt: return ">";
      case CmpOp::Le: return latex_ ? "\\leq" : "<=";
      case CmpOp::Ge: return latex_ ? "\\geq" : ">=";
      case CmpOp::Eq: return latex_ ? "=" : "==";
      case CmpOp::Ne: return latex_ ? "\\neq" : "!=";
    }
    return "?";
  }

  std::string indices(const std::vector<ArithExpr>& idx) const {
    if (idx.empty()) return "";
    std::string out = latex_ ? "_{" : "(";
    for (std::size_t i = 0; i < idx.size(); ++i) {
      if (i) out += ",";
      out += arith(idx[i], 0);
    }
    return out + (latex_ ? "}" : ")");
  }

  std::string arith(const ArithExpr& a, int min_prec) const {
    std::string s = arith_raw(a);
    return precedence(a) < min_prec ? "(" + s + ")" : s;
  }

  std::string arith_raw(const ArithExpr& a) const {
    using K = ArithExpr::Kind;
    auto bin = [&](const char* op) {
      int p = precedence(a);
      return arith(a.args[0], p) + " " + op + " " + arith(a.args[1], p + 1);
    };
    switch (a.kind) {
      case K::Const:
        return a.value.is_sym() ? name(a.value.as_sym()) : a.value.to_string();
      case K::Var: return name(a.name);
      case K::NumTerm: return name(a.name) + indices(a.args);
      case K::Add: return bin("+");
      case K::Sub: return bin("-");
      case K::Mul: return bin(latex_ ? "\\times" : "*");
      case K::Div: return bin("/");
      case K::Mod: return bin(latex_ ? "\\bmod" : "mod");
      case K::Sqrt:
        return latex_ ? "\\sqrt{" + arith(a.args[0], 0) + "}"
                      : "sqrt(" + arith(a.args[0], 0) + ")";
    }
    return "?";
  }

  std::string set(const SetExpr& s, bool operand) const {
    using K = SetExpr::Kind;
    switch (s.kind) {
      case K::Name: return name(s.name);
      case K::Range:
        return open() + arith(s.items[0], 0) + ".." + arith(s.items[1], 0) + close();
      case K::Literal: {
        std::string out = open();
        for (std::size_t i = 0; i < s.items.size(); ++i) {
          if (i) out += latex_ ? ", " : ",";
          out += arith(s.items[i], 0);
        }
        if (s.items.size() == 1 && !latex_) out += ",";
        return out + close();
      }
      case K::Union:
      case K::Inter:
      case K::Diff: {
        const char* op = s.kind == K::Union   ? (latex_ ? "\\cup" : "union")
                         : s.kind == K::Inter ? (latex_ ? "\\cap" : "inter")
                                              : (latex_ ? "\\setminus" : "diff");
        std::string out = set(s.args[0], false) + " " + op + " " + set(s.args[1], true);
        return operand ? "(" + out + ")" : out;
      }
    }
    return "?";
  }

  std::string cond(const Cond& c, int min_prec) const {
    std::string s = cond_raw(c);
    return precedence(c) < min_prec ? "(" + s + ")" : s;
  }

  std::string cond_raw(const Cond& c) const {
    using K = Cond::Kind;
    switch (c.kind) {
      case K::Compare:
        return arith(c.operands[0], 0) + " " + cmp(c.cmp) + " " + arith(c.operands[1], 0);
      case K::In:
        return arith(c.operands[0], 0) + (latex_ ? " \\in " : " in ") + set(c.set[0], false);
      case K::Not: return (latex_ ? "\\lnot " : "not ") + cond(c.args[0], 3);
      case K::And:
        return cond(c.args[0], 2) + (latex_ ? " \\land " : " and ") + cond(c.args[1], 3);
      case K::Or:
        return cond(c.args[0], 1) + (latex_ ? " \\lor " : " or ") + cond(c.args[1], 2);
    }
    return "?";
  }

  std::string binder_list(const Expr& e) const {
    std::string out;
    for (std::size_t i = 0; i < e.binders.size(); ++i) {
      if (i) out += ", ";
      out += name(e.binders[i].var) + (latex_ ? " \\in " : " in ") +
             set(e.binders[i].domain, false);
    }
    if (e.when) out += (latex_ ? " \\mid " : " when ") + cond(*e.when, 0);
    return out;
  }

  std::string expr(const Expr& e, int min_prec) const {
    std::string s = expr_raw(e);
    if (precedence(e) >= min_prec) return s;
    return latex_ ? "\\left(" + s + "\\right)" : "(" + s + ")";
  }

  std::string expr_raw(const Expr& e) const {
    using K = Expr::Kind;
    auto bin = [&](const char* in, const char* tex, int lhs_prec, int rhs_prec) {
      return expr(e.children[0], lhs_prec) + " " + (latex_ ? tex : in) + " " +
             expr(e.children[1], rhs_prec);
    };
    switch (e.kind) {
      case K::True: return latex_ ? "\\top" : "Top";
      case K::False: return latex_ ? "\\bot" : "Bot";
      case K::Atom:
      case K::VarAtom: return name(e.name) + indices(e.indices);
      case K::Not: return (latex_ ? "\\lnot " : "not ") + expr(e.children[0], 5);
      case K::And: return bin("and", "\\land", 4, 5);
      case K::Or: return bin("or", "\\lor", 3, 4);
      case K::Impl: return bin("=>", "\\Rightarrow", 3, 2);
      case K::Iff: return bin("<=>", "\\Leftrightarrow", 1, 2);
      case K::Compare:
        return arith(e.operands[0], 0) + " " + cmp(e.cmp) + " " + arith(e.operands[1], 0);
      case K::BigAnd:
      case K::BigOr:
        if (latex_)
          return std::string(e.kind == K::BigAnd ? "\\bigwedge" : "\\bigvee") + "_{" +
                 binder_list(e) + "} " + expr(e.children[0], 6);
        return std::string(e.kind == K::BigAnd ? "bigand " : "bigor ") + binder_list(e) +
               ": " + expr(e.children[0], 0) + " end";
      case K::Card: {
        if (latex_) {
          const char* rel = e.card == CardKind::AtMost    ? "\\leq "
                            : e.card == CardKind::AtLeast ? "\\geq "
                                                          : "= ";
          return std::string("\\bigwedge^{") + rel + arith(e.operands[0], 0) + "}_{" +
                 binder_list(e) + "} " + expr(e.children[0], 6);
        }
        const char* kw = e.card == CardKind::AtMost    ? "atmost "
                         : e.card == CardKind::AtLeast ? "atleast "
                                                       : "exact ";
        return kw + arith(e.operands[0], 0) + ", " + binder_list(e) + ": " +
               expr(e.children[0], 0) + " end";
      }
    }
    return "?";
  }

 private:
  bool latex_;
};

const Renderer kInput(false);
const Renderer kLatex(true);

bool starts_with_minus(const std::string& s) { return !s.empty() && s[0] == '-'; }

}  // namespace

std::string render_input(const ArithExpr& a) { return kInput.arith(a, 0); }
std::string render_input(const SetExpr& s) { return kInput.set(s, false); }
std::string render_input(const Cond& c) { return kInput.cond(c, 0); }
std::string render_input(const Expr& e) { return kInput.expr(e, 0); }

std::string render_input(const Program& p) {
  std::string out;
  if (!p.sets.empty()) out += "sets:\n";
  for (const auto& s : p.sets) out += s.name + " = " + render_input(s.value) + "\n";
  for (const auto& n : p.numerics)
    out += std::string(n.sort == NumericSort::Int ? "int " : "real ") + n.name + "\n";
  if (!p.sets.empty() || !p.numerics.empty()) out += "formulas:\n";
  for (const auto& f : p.formulas) {
    std::string text = render_input(f);
    // A leading '-' would otherwise continue the previous formula's arithmetic.
    out += (starts_with_minus(text) ? "(" + text + ")" : text) + "\n";
  }
  return out;
}

std::string render_latex(const ArithExpr& a) { return kLatex.arith(a, 0); }
std::string render_latex(const SetExpr& s) { return kLatex.set(s, false); }
std::string render_latex(const Cond& c) { return kLatex.cond(c, 0); }
std::string render_latex(const Expr& e) { return kLatex.expr(e, 0); }

std::string render_latex(const Program& p) {
  std::string out;
  auto line = [&out](const std::string& s) {
    if (!out.empty()) out += " \\\\\n";
    out += s;
  };
  for (const auto& s : p.sets) line(kLatex.name(s.name) + " = " + render_latex(s.value));
  for (const auto& f : p.formulas) line(render_latex(f));
  return out + "\n";
}

}  // namespace twist
