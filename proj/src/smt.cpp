// Copyright 2026 The twist Authors
// SPDX-License-Identifier: Apache-2.0

#include "twist/smt.hpp"

#include <unistd.h>

#include <cctype>
#include <cstdlib>
#include <limits>
#include <map>
#include <stdexcept>
#include <unordered_map>

#include "twist/diagnostic.hpp"
#include "twist/external_sat.hpp"
#include "twist/process.hpp"
#include "twist/sexpr.hpp"

namespace twist {

std::string_view to_string(Logic logic) {
  switch (logic) {
    case Logic::PureSat: return "pure-sat";
    case Logic::QF_IDL: return "QF_IDL";
    case Logic::QF_RDL: return "QF_RDL";
    case Logic::QF_LIA: return "QF_LIA";
    case Logic::QF_LRA: return "QF_LRA";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Rational

namespace {

using i128 = __int128;

std::int64_t narrow(i128 v) {
  if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min())
    throw std::overflow_error("rational arithmetic overflow");
  return static_cast<std::int64_t>(v);
}

i128 gcd128(i128 a, i128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    i128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

Rational make(i128 n, i128 d) {
  if (d == 0) throw std::domain_error("division by zero");
  if (d < 0) {
    n = -n;
    d = -d;
  }
  const i128 g = gcd128(n, d);
  if (g > 1) {
    n /= g;
    d /= g;
  }
  return Rational(narrow(n), narrow(d));
}

}  // namespace

Rational::Rational(std::int64_t n, std::int64_t d) {
  if (d == 0) throw std::domain_error("division by zero");
  i128 nn = n;
  i128 dd = d;
  if (dd < 0) {
    nn = -nn;
    dd = -dd;
  }
  const i128 g = gcd128(nn, dd);
  if (g > 1) {
    nn /= g;
    dd /= g;
  }
  num_ = narrow(nn);
  den_ = narrow(dd);
}

Rational Rational::parse(std::string_view text) {
  std::size_t i = 0;
  bool neg = false;
  if (i < text.size() && (text[i] == '-' || text[i] == '+')) neg = text[i++] == '-';
  i128 mant = 0;
  int digits = 0;
  int frac = 0;
  bool dot = false;
  auto overflow = [] { throw std::overflow_error("number too large"); };
  for (; i < text.size(); ++i) {
    const char c = text[i];
    if (c == '.' && !dot) {
      dot = true;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      mant = mant * 10 + (c - '0');
      if (mant > std::numeric_limits<std::int64_t>::max()) overflow();
      ++digits;
      if (dot) ++frac;
    } else {
      break;
    }
  }
  if (digits == 0) throw std::invalid_argument("not a number: '" + std::string(text) + "'");
  int exp = 0;
  if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
    ++i;
    bool eneg = false;
    if (i < text.size() && (text[i] == '-' || text[i] == '+')) eneg = text[i++] == '-';
    int edigits = 0;
    for (; i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])); ++i) {
      exp = exp * 10 + (text[i] - '0');
      if (exp > 1000) overflow();
      ++edigits;
    }
    if (edigits == 0) throw std::invalid_argument("not a number: '" + std::string(text) + "'");
    if (eneg) exp = -exp;
  }
  if (i != text.size()) throw std::invalid_argument("not a number: '" + std::string(text) + "'");
  exp -= frac;
  i128 num = neg ? -mant : mant;
  i128 den = 1;
  for (; exp > 0; --exp) {
    num *= 10;
    if (num > std::numeric_limits<std::int64_t>::max() || num < std::numeric_limits<std::int64_t>::min())
      overflow();
  }
  for (; exp < 0; ++exp) {
    den *= 10;
    if (den > std::numeric_limits<std::int64_t>::max()) overflow();
  }
  return make(num, den);
}

Rational Rational::from_scalar(const Scalar& s) {
  if (s.is_int()) return Rational(s.as_int());
  if (s.is_sym()) throw TypeError("symbol '" + s.as_sym() + "' is not a number");
  return parse(s.to_string());
}

std::string Rational::to_string() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational operator+(const Rational& a, const Rational& b) {
  return make(i128(a.num_) * b.den_ + i128(b.num_) * a.den_, i128(a.den_) * b.den_);
}

Rational operator-(const Rational& a, const Rational& b) {
  return make(i128(a.num_) * b.den_ - i128(b.num_) * a.den_, i128(a.den_) * b.den_);
}

Rational operator*(const Rational& a, const Rational& b) {
  return make(i128(a.num_) * b.num_, i128(a.den_) * b.den_);
}

Rational operator/(const Rational& a, const Rational& b) {
  return make(i128(a.num_) * b.den_, i128(a.den_) * b.num_);
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  return i128(a.num_) * b.den_ <=> i128(b.num_) * a.den_;
}

// ---------------------------------------------------------------------------
// Classification

namespace {

using GF = GroundFormula;
using GK = GroundFormula::Kind;
using TK = GroundTerm::Kind;

[[noreturn]] void reject(const std::string& msg) { throw CompileError(msg, Span{}); }

struct Linear {
  std::map<std::string, Rational> coef;
  Rational constant;

  bool is_constant() const { return coef.empty(); }

  void add(const Linear& o, const Rational& factor) {
    for (const auto& [v, c] : o.coef) {
      Rational sum = coef[v] + c * factor;
      if (sum == Rational(0)) coef.erase(v);
      else coef[v] = sum;
    }
    constant = constant + o.constant * factor;
  }
};

Linear linearize(const GroundTerm& t) {
  Linear out;
  switch (t.kind) {
    case TK::Const:
      out.constant = Rational::from_scalar(t.value);
      return out;
    case TK::Var:
      out.coef[t.name] = Rational(1);
      return out;
    case TK::Add:
    case TK::Sub: {
      out = linearize(t.args[0]);
      out.add(linearize(t.args[1]), Rational(t.kind == TK::Add ? 1 : -1));
      return out;
    }
    case TK::Mul: {
      Linear a = linearize(t.args[0]);
      Linear b = linearize(t.args[1]);
      if (!a.is_constant() && !b.is_constant())
        reject("nonlinear term: product of two numeric terms");
      if (!a.is_constant()) std::swap(a, b);
      out.add(b, a.constant);
      return out;
    }
    case TK::Div: {
      Linear a = linearize(t.args[0]);
      Linear b = linearize(t.args[1]);
      if (!b.is_constant()) reject("nonlinear term: division by a numeric term");
      if (b.constant == Rational(0)) reject("division by zero in a numeric term");
      out.add(a, Rational(1) / b.constant);
      return out;
    }
  }
  return out;
}

bool uses_division(const GroundTerm& t) {
  if (t.kind == TK::Div) return true;
  for (const auto& a : t.args)
    if (uses_division(a)) return true;
  return false;
}

void theory_atoms(const GF& g, std::vector<const GF*>& out) {
  if (g.kind == GK::Theory) out.push_back(&g);
  for (const auto& c : g.children) theory_atoms(c, out);
}

NumericSort common_sort(const GF& g) {
  auto vars = collect_theory_vars(g);
  if (vars.empty()) return NumericSort::Int;
  const NumericSort s = vars.front().second;
  for (const auto& [name, sort] : vars)
    if (sort != s)
      reject("mixed int and real numeric terms ('" + vars.front().first + "' and '" + name +
             "') are not supported");
  return s;
}

}  // namespace

Logic classify(const GroundFormula& g) {
  std::vector<const GF*> atoms;
  theory_atoms(g, atoms);
  if (atoms.empty()) return Logic::PureSat;
  const NumericSort sort = common_sort(g);
  bool difference = true;
  for (const GF* a : atoms) {
    if (sort == NumericSort::Int && (uses_division(a->terms[0]) || uses_division(a->terms[1])))
      reject("division is not supported on integer numeric terms");
    Linear lhs = linearize(a->terms[0]);
    lhs.add(linearize(a->terms[1]), Rational(-1));
    if (sort == NumericSort::Int) {
      for (const auto& [v, c] : lhs.coef)
        if (!c.is_integer()) reject("non-integer coefficient on integer term '" + v + "'");
      if (!lhs.constant.is_integer()) reject("non-integer constant compared with integer terms");
    }
    if (lhs.coef.size() > 2) {
      difference = false;
    } else if (lhs.coef.size() == 1) {
      const Rational c = lhs.coef.begin()->second;
      difference = difference && (c == Rational(1) || c == Rational(-1));
    } else if (lhs.coef.size() == 2) {
      const Rational c1 = lhs.coef.begin()->second;
      const Rational c2 = std::next(lhs.coef.begin())->second;
      difference = difference && (c1 == -c2) && (c1 == Rational(1) || c1 == Rational(-1));
    }
  }
  if (sort == NumericSort::Int) return difference ? Logic::QF_IDL : Logic::QF_LIA;
  return difference ? Logic::QF_RDL : Logic::QF_LRA;
}

// ---------------------------------------------------------------------------
// Emission

std::string smt_symbol(const std::string& name) {
  static const char* kReserved[] = {"let",     "forall", "exists", "match",  "par", "_",
                                    "!",       "as",     "true",   "false",  "not", "and",
                                    "or",      "xor",    "ite",    "distinct", "BINARY",
                                    "DECIMAL", "HEXADECIMAL", "NUMERAL", "STRING"};
  auto simple_char = [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) ||
           std::string_view("~!@$%^&*_-+=<>.?/").find(c) != std::string_view::npos;
  };
  bool simple = !name.empty() && !std::isdigit(static_cast<unsigned char>(name[0])) &&
                name[0] != '@' && name[0] != '.';
  for (char c : name) simple = simple && simple_char(c);
  for (const char* r : kReserved) simple = simple && name != r;
  return simple ? name : "|" + name + "|";
}

namespace {

std::string cmp_op(CmpOp op) {
  switch (op) {
    case CmpOp::Lt: return "<";
    case CmpOp::Gt: return ">";
    case CmpOp::Le: return "<=";
    case CmpOp::Ge: return ">=";
    case CmpOp::Eq:
    case CmpOp::Ne: return "=";
  }
  return "=";
}

class Emitter {
 public:
  explicit Emitter(NumericSort sort) : sort_(sort) {}

  std::string formula(const GF& g) {
    switch (g.kind) {
      case GK::True: return "true";
      case GK::False: return "false";
      case GK::Lit: return g.positive ? smt_symbol(g.atom) : "(not " + smt_symbol(g.atom) + ")";
      case GK::Not: return "(not " + formula(g.children[0]) + ")";
      case GK::And:
      case GK::Or: {
        if (g.children.empty()) return g.kind == GK::And ? "true" : "false";
        if (g.children.size() == 1) return formula(g.children[0]);
        std::string out = g.kind == GK::And ? "(and" : "(or";
        for (const auto& c : g.children) out += " " + formula(c);
        return out + ")";
      }
      case GK::Impl: return "(=> " + formula(g.children[0]) + " " + formula(g.children[1]) + ")";
      case GK::Iff: return "(= " + formula(g.children[0]) + " " + formula(g.children[1]) + ")";
      case GK::Card: return card(g);
      case GK::Theory: {
        std::string atom =
            "(" + cmp_op(g.cmp) + " " + term(g.terms[0]) + " " + term(g.terms[1]) + ")";
        return g.cmp == CmpOp::Ne ? "(not " + atom + ")" : atom;
      }
    }
    return "true";
  }

  std::string term(const GroundTerm& t) {
    switch (t.kind) {
      case TK::Const: return constant(Rational::from_scalar(t.value));
      case TK::Var: return smt_symbol(t.name);
      case TK::Add: return "(+ " + term(t.args[0]) + " " + term(t.args[1]) + ")";
      case TK::Sub: return "(- " + term(t.args[0]) + " " + term(t.args[1]) + ")";
      case TK::Mul: return "(* " + term(t.args[0]) + " " + term(t.args[1]) + ")";
      case TK::Div: return "(/ " + term(t.args[0]) + " " + term(t.args[1]) + ")";
    }
    return "0";
  }

 private:
  std::string constant(const Rational& r) const {
    auto magnitude = [this](std::int64_t v) {
      const auto u = v < 0 ? 0 - static_cast<std::uint64_t>(v) : static_cast<std::uint64_t>(v);
      std::string s = std::to_string(u);
      return sort_ == NumericSort::Real ? s + ".0" : s;
    };
    std::string out;
    if (r.is_integer()) {
      out = magnitude(r.num());
    } else {
      out = "(/ " + magnitude(r.num()) + " " + magnitude(r.den()) + ")";
    }
    return r.num() < 0 ? "(- " + out + ")" : out;
  }

  // Sequential counter as nested lets: c_i_j holds when at least j of the
  // first i counted formulas hold.
  std::string card(const GF& g) {
    const int id = ++cards_;
    const auto n = static_cast<std::int64_t>(g.children.size());
    const std::int64_t top = g.card == CardKind::AtLeast ? g.k : g.k + 1;
    auto name = [id](const char* kind, std::int64_t i, std::int64_t j) {
      std::string s = "|_" + std::string(kind) + std::to_string(id) + "_" + std::to_string(i);
      if (j >= 0) s += "_" + std::to_string(j);
      return s + "|";
    };
    auto s = [&](std::int64_t i, std::int64_t j) -> std::string {
      if (j <= 0) return "true";
      if (j > i) return "false";
      return name("c", i, j);
    };
    std::string result;
    switch (g.card) {
      case CardKind::AtLeast: result = s(n, g.k); break;
      case CardKind::AtMost: result = "(not " + s(n, g.k + 1) + ")"; break;
      case CardKind::Exact: result = "(and " + s(n, g.k) + " (not " + s(n, g.k + 1) + "))"; break;
    }
    if (top <= 0) return result;

    std::string out;
    int lets = 0;
    for (std::int64_t i = 1; i <= n; ++i) {
      const std::string f = name("f", i, -1);
      out += "(let ((" + f + " " + formula(g.children[static_cast<std::size_t>(i - 1)]) + ")) ";
      out += "(let (";
      lets += 2;
      for (std::int64_t j = 1; j <= std::min(i, top); ++j) {
        const std::string carry = s(i - 1, j);
        const std::string add = j == 1 ? f : "(and " + f + " " + s(i - 1, j - 1) + ")";
        const std::string def = carry == "false" ? add : "(or " + carry + " " + add + ")";
        out += (j > 1 ? " (" : "(") + name("c", i, j) + " " + def + ")";
      }
      out += ") ";
    }
    out += result + std::string(static_cast<std::size_t>(lets), ')');
    return out;
  }

  NumericSort sort_;
  int cards_ = 0;
};

}  // namespace

SmtScript emit_smtlib(const GroundFormula& g, bool force,
                      std::span<const std::string> extra_asserts) {
  SmtScript script;
  script.logic = classify(g);
  if (script.logic == Logic::PureSat && !force)
    throw CompileError("formula has no numeric comparisons; use DIMACS output (or force SMT-LIB)",
                       Span{});
  script.bool_atoms = collect_atoms(g);
  script.theory_vars = collect_theory_vars(g);
  const NumericSort sort = script.theory_vars.empty() ? NumericSort::Int
                                                      : script.theory_vars.front().second;
  std::string& out = script.text;
  out += "(set-option :produce-models true)\n";
  out += "(set-logic " +
         std::string(script.logic == Logic::PureSat ? "QF_UF" : to_string(script.logic)) + ")\n";
  for (const auto& a : script.bool_atoms) out += "(declare-const " + smt_symbol(a) + " Bool)\n";
  for (const auto& [v, s] : script.theory_vars)
    out += "(declare-const " + smt_symbol(v) + (s == NumericSort::Int ? " Int)\n" : " Real)\n");
  out += "(assert " + Emitter(sort).formula(g) + ")\n";
  for (const auto& extra : extra_asserts) out += "(assert " + extra + ")\n";
  out += "(check-sat)\n(get-model)\n";
  return script;
}

// ---------------------------------------------------------------------------
// Solver output and models

namespace {

Rational value_of(const SExpr& e) {
  if (!e.is_list) return Rational::parse(e.atom);
  if (e.items.size() == 2 && e.items[0].is_atom("-")) return -value_of(e.items[1]);
  if (e.items.size() == 3 && e.items[0].is_atom("/"))
    return value_of(e.items[1]) / value_of(e.items[2]);
  if (e.items.size() == 2 && e.items[0].is_atom("to_real")) return value_of(e.items[1]);
  throw ExternalSolverError("unsupported model value: " + to_string(e));
}

void collect_definitions(const SExpr& e, std::vector<const SExpr*>& out) {
  if (!e.is_list) return;
  if (!e.items.empty() && e.items[0].is_atom("define-fun")) {
    out.push_back(&e);
    return;
  }
  for (const auto& item : e.items) collect_definitions(item, out);
}

Rational eval_term(const GroundTerm& t, const std::unordered_map<std::string, Rational>& values) {
  switch (t.kind) {
    case TK::Const: return Rational::from_scalar(t.value);
    case TK::Var: {
      auto it = values.find(t.name);
      return it == values.end() ? Rational(0) : it->second;
    }
    case TK::Add: return eval_term(t.args[0], values) + eval_term(t.args[1], values);
    case TK::Sub: return eval_term(t.args[0], values) - eval_term(t.args[1], values);
    case TK::Mul: return eval_term(t.args[0], values) * eval_term(t.args[1], values);
    case TK::Div: return eval_term(t.args[0], values) / eval_term(t.args[1], values);
  }
  return Rational(0);
}

}  // namespace

SmtResult parse_smt_output(std::string_view out, const SmtScript& script) {
  std::vector<SExpr> items;
  try {
    items = parse_sexprs(out);
  } catch (const SExprError& e) {
    throw ExternalSolverError(std::string("unreadable solver output: ") + e.what());
  }
  SmtResult r;
  bool have_status = false;
  for (const auto& item : items) {
    if (item.is_list) continue;
    if (item.atom == "sat" || item.atom == "unsat" || item.atom == "unknown") {
      r.status = item.atom == "sat"     ? SatStatus::Sat
                 : item.atom == "unsat" ? SatStatus::Unsat
                                        : SatStatus::Unknown;
      have_status = true;
      break;
    }
  }
  if (!have_status) {
    std::string head(out.substr(0, 300));
    throw ExternalSolverError("solver output has no sat/unsat/unknown answer: " + head);
  }
  if (r.status != SatStatus::Sat) return r;

  std::vector<const SExpr*> defs;
  for (const auto& item : items) collect_definitions(item, defs);
  std::unordered_map<std::string, bool> bools;
  std::unordered_map<std::string, Rational> numbers;
  for (const SExpr* d : defs) {
    if (d->items.size() != 5 || d->items[1].is_list) continue;
    const std::string name = unquote_symbol(d->items[1].atom);
    const SExpr& sort = d->items[3];
    const SExpr& value = d->items[4];
    try {
      if (sort.is_atom("Bool")) {
        if (value.is_atom("true") || value.is_atom("false")) bools[name] = value.is_atom("true");
      } else if (sort.is_atom("Int") || sort.is_atom("Real")) {
        numbers[name] = value_of(value);
      }
    } catch (const std::exception& e) {
      throw ExternalSolverError("bad value for '" + name + "': " + e.what());
    }
  }
  for (const auto& a : script.bool_atoms) {
    auto it = bools.find(a);
    r.model.atoms.emplace_back(a, it != bools.end() && it->second);
  }
  for (const auto& [v, sort] : script.theory_vars) {
    auto it = numbers.find(v);
    Rational value = it == numbers.end() ? Rational(0) : it->second;
    if (sort == NumericSort::Int && !value.is_integer())
      throw ExternalSolverError("non-integer value for integer term '" + v + "'");
    r.model.numbers.emplace_back(v, value);
  }
  return r;
}

bool check_smt_model(const GroundFormula& g, const SmtModel& m) {
  std::unordered_map<std::string, bool> bools(m.atoms.begin(), m.atoms.end());
  std::unordered_map<std::string, Rational> numbers(m.numbers.begin(), m.numbers.end());
  try {
    return evaluate(
        g,
        [&](const std::string& a) {
          auto it = bools.find(a);
          return it != bools.end() && it->second;
        },
        [&](const GF& atom) {
          const Rational l = eval_term(atom.terms[0], numbers);
          const Rational r = eval_term(atom.terms[1], numbers);
          switch (atom.cmp) {
            case CmpOp::Lt: return l < r;
            case CmpOp::Gt: return l > r;
            case CmpOp::Le: return l <= r;
            case CmpOp::Ge: return l >= r;
            case CmpOp::Eq: return l == r;
            case CmpOp::Ne: return l != r;
          }
          return false;
        });
  } catch (const std::overflow_error&) {
    return false;
  } catch (const std::domain_error&) {
    return false;
  }
}

std::string resolve_smt_command(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("TWISTC_SMT_CMD"); env && *env) return env;
  const char* path = std::getenv("PATH");
  if (!path) return {};
  std::string_view rest(path);
  while (!rest.empty()) {
    const auto colon = rest.find(':');
    std::string dir(rest.substr(0, colon));
    rest = colon == std::string_view::npos ? std::string_view{} : rest.substr(colon + 1);
    if (dir.empty()) continue;
    if (::access((dir + "/z3").c_str(), X_OK) == 0) return "z3 -in";
  }
  return {};
}

SmtResult run_external_smt(const SmtScript& script, const std::string& cmd,
                           std::chrono::milliseconds timeout) {
  if (cmd.empty())
    throw ExternalSolverError("no SMT solver available; set TWISTC_SMT_CMD or pass --smt-cmd");
  ProcessResult pr = run_template(cmd, script.text, ".smt2", timeout);
  if (pr.timed_out) return {};
  try {
    return parse_smt_output(pr.out, script);
  } catch (const ExternalSolverError& e) {
    std::string msg = e.what();
    if (!pr.err.empty()) msg += " (stderr: " + pr.err.substr(0, 300) + ")";
    throw ExternalSolverError(msg);
  }
}

SmtSession::SmtSession(GroundFormula g, std::string cmd, std::chrono::milliseconds timeout)
    : g_(std::move(g)), cmd_(std::move(cmd)), timeout_(timeout) {}

SmtResult SmtSession::next() {
  if (exhausted_) return {SatStatus::Unsat, {}};
  SmtScript script = emit_smtlib(g_, true, blocking_);
  SmtResult r = run_external_smt(script, cmd_, timeout_);
  if (r.status == SatStatus::Unsat) exhausted_ = true;
  if (r.status != SatStatus::Sat) return r;
  if (!check_smt_model(g_, r.model))
    throw ExternalSolverError("the SMT solver's model does not satisfy the formula");
  ++found_;
  if (r.model.atoms.empty()) {
    exhausted_ = true;
    return r;
  }
  std::vector<std::string> lits;
  for (const auto& [atom, value] : r.model.atoms)
    lits.push_back(value ? "(not " + smt_symbol(atom) + ")" : smt_symbol(atom));
  if (lits.size() == 1) {
    blocking_.push_back(lits.front());
  } else {
    std::string clause = "(or";
    for (const auto& l : lits) clause += " " + l;
    blocking_.push_back(clause + ")");
  }
  return r;
}

}  // namespace twist
