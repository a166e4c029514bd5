// Copyright 2026 The twist Authors
// SPDX-License-Identifier: Apache-2.0

#include "twist/cnf.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <unordered_set>

#include "twist/diagnostic.hpp"

namespace twist {

Lit VarMap::add(const std::string& name) {
  auto [it, inserted] = forward_.emplace(name, static_cast<int>(backward_.size()));
  if (!inserted) throw std::invalid_argument("variable '" + name + "' registered twice");
  backward_.push_back(name);
  return it->second;
}

Lit VarMap::add_user(const std::string& atom) {
  if (n_user_ != n_vars()) throw std::logic_error("user atoms must precede generated variables");
  Lit v = add(atom);
  ++n_user_;
  return v;
}

Lit VarMap::fresh(const std::string& name) { return add(name); }

int VarMap::next_serial(char family) { return ++serials_[family]; }

std::optional<Lit> VarMap::find(const std::string& atom) const {
  auto it = forward_.find(atom);
  if (it == forward_.end()) return std::nullopt;
  return it->second;
}

void ClauseDb::add(Clause c) {
  if (c.empty()) throw std::invalid_argument("empty clause");
  Clause out;
  out.reserve(c.size());
  std::unordered_set<Lit> seen;
  for (Lit l : c) {
    if (l == 0 || std::abs(l) > n_vars()) throw std::invalid_argument("literal out of range");
    if (seen.count(-l)) return;
    if (seen.insert(l).second) out.push_back(l);
  }
  clauses.push_back(std::move(out));
}

namespace {

using GF = GroundFormula;
using GK = GroundFormula::Kind;

GF negate(GF g) {
  switch (g.kind) {
    case GK::True: return GF::truth(false);
    case GK::False: return GF::truth(true);
    case GK::Lit: g.positive = !g.positive; return g;
    case GK::Not: return std::move(g.children[0]);
    default: return GF::make(GK::Not, {std::move(g)});
  }
}

GF simplify_junction(const GF& g) {
  const bool is_and = g.kind == GK::And;
  const GK absorbing = is_and ? GK::False : GK::True;
  std::vector<GF> kept;
  for (const auto& c : g.children) {
    GF s = simplify(c);
    if (s.kind == absorbing) return GF::truth(!is_and);
    if (s.kind == (is_and ? GK::True : GK::False)) continue;
    if (s.kind == g.kind) {
      for (auto& cc : s.children) kept.push_back(std::move(cc));
    } else {
      kept.push_back(std::move(s));
    }
  }
  if (kept.empty()) return GF::truth(is_and);
  if (kept.size() == 1) return std::move(kept.front());
  return GF::make(g.kind, std::move(kept));
}

}  // namespace

GroundFormula simplify(const GroundFormula& g) {
  switch (g.kind) {
    case GK::True:
    case GK::False:
    case GK::Lit:
    case GK::Theory: return g;
    case GK::Not: return negate(simplify(g.children[0]));
    case GK::And:
    case GK::Or: return simplify_junction(g);
    case GK::Impl: {
      GF a = simplify(g.children[0]);
      GF b = simplify(g.children[1]);
      if (a.kind == GK::False || b.kind == GK::True) return GF::truth(true);
      if (a.kind == GK::True) return b;
      if (b.kind == GK::False) return negate(std::move(a));
      return GF::make(GK::Impl, {std::move(a), std::move(b)});
    }
    case GK::Iff: {
      GF a = simplify(g.children[0]);
      GF b = simplify(g.children[1]);
      if (a.kind == GK::True) return b;
      if (b.kind == GK::True) return a;
      if (a.kind == GK::False) return negate(std::move(b));
      if (b.kind == GK::False) return negate(std::move(a));
      return GF::make(GK::Iff, {std::move(a), std::move(b)});
    }
    case GK::Card: {
      std::int64_t k = g.k;
      std::vector<GF> kept;
      for (const auto& c : g.children) {
        GF s = simplify(c);
        if (s.kind == GK::True) --k;
        else if (s.kind != GK::False) kept.push_back(std::move(s));
      }
      GF card = GF::cardinality(g.card, k, std::move(kept));
      GF folded = normalize_card(card);
      if (folded.kind == GK::Card) return folded;
      return simplify(folded);
    }
  }
  return g;
}

namespace {

enum Polarity { kPos = 1, kNeg = 2, kBoth = 3 };

Polarity flip(Polarity p) {
  return p == kPos ? kNeg : p == kNeg ? kPos : kBoth;
}

// Polarity the counted children need for the constraint itself to be implied.
Polarity card_children(CardKind kind) {
  switch (kind) {
    case CardKind::AtMost: return kNeg;
    case CardKind::AtLeast: return kPos;
    case CardKind::Exact: return kBoth;
  }
  return kBoth;
}

class Tseitin {
 public:
  Tseitin(ClauseDb& db, CardEncoding enc) : db_(db), enc_(enc) {}

  void assert_formula(const GF& g) {
    switch (g.kind) {
      case GK::True: return;
      case GK::False: {
        Lit t = fresh();
        db_.add({t});
        db_.add({-t});
        return;
      }
      case GK::And:
        for (const auto& c : g.children) assert_formula(c);
        return;
      case GK::Not: assert_negation(g.children[0]); return;
      case GK::Iff: {
        Lit a = define(g.children[0], kBoth);
        Lit b = define(g.children[1], kBoth);
        db_.add({-a, b});
        db_.add({a, -b});
        return;
      }
      case GK::Card: {
        auto lits = children_lits(g, card_children(g.card));
        constrain(g.card, lits, g.k, 0);
        return;
      }
      default: {
        Clause c;
        disjuncts(g, false, c);
        db_.add(std::move(c));
      }
    }
  }

 private:
  Lit fresh() { return db_.varmap.fresh("_T" + std::to_string(db_.varmap.next_serial('T'))); }

  Lit lit_of(const GF& g) const {
    Lit v = *db_.varmap.find(g.atom);
    return g.positive ? v : -v;
  }

  void assert_negation(const GF& g) {
    switch (g.kind) {
      case GK::Or:
        for (const auto& c : g.children) assert_negation(c);
        return;
      case GK::Impl:
        assert_formula(g.children[0]);
        assert_negation(g.children[1]);
        return;
      case GK::Not: assert_formula(g.children[0]); return;
      case GK::Card: {
        auto lits = children_lits(g, card_children(g.card) == kBoth ? kBoth
                                                                   : flip(card_children(g.card)));
        complement(g.card, lits, g.k, 0);
        return;
      }
      default: {
        Clause c;
        disjuncts(g, true, c);
        db_.add(std::move(c));
      }
    }
  }

  // Appends literals whose disjunction is equivalent (for satisfiability)
  // to g, or to not-g when `negated`.
  void disjuncts(const GF& g, bool negated, Clause& out) {
    if (g.kind == GK::Lit) {
      out.push_back(negated ? -lit_of(g) : lit_of(g));
      return;
    }
    if (g.kind == GK::Not) {
      disjuncts(g.children[0], !negated, out);
      return;
    }
    if (!negated && g.kind == GK::Or) {
      for (const auto& c : g.children) disjuncts(c, false, out);
      return;
    }
    if (!negated && g.kind == GK::Impl) {
      disjuncts(g.children[0], true, out);
      disjuncts(g.children[1], false, out);
      return;
    }
    if (negated && g.kind == GK::And) {
      for (const auto& c : g.children) disjuncts(c, true, out);
      return;
    }
    out.push_back(negated ? -define(g, kNeg) : define(g, kPos));
  }

  std::vector<Lit> children_lits(const GF& g, Polarity pol) {
    std::vector<Lit> lits;
    lits.reserve(g.children.size());
    for (const auto& c : g.children) lits.push_back(define(c, pol));
    return lits;
  }

  // Clauses for the constraint, each weakened by `guard` (0 for none):
  // they enforce the constraint whenever `guard` is false.
  void constrain(CardKind kind, const std::vector<Lit>& lits, std::int64_t k, Lit guard) {
    CardClauses cc = encode_cardinality(kind, lits, k, enc_, db_.varmap);
    if (cc.infeasible) {
      if (guard == 0) {
        assert_formula(GF::truth(false));
      } else {
        db_.add({guard});
      }
      return;
    }
    for (auto& c : cc.clauses) {
      if (guard != 0) c.push_back(guard);
      db_.add(std::move(c));
    }
  }

  // The negation of the constraint, weakened by `guard` like constrain().
  void complement(CardKind kind, const std::vector<Lit>& lits, std::int64_t k, Lit guard) {
    switch (kind) {
      case CardKind::AtMost: constrain(CardKind::AtLeast, lits, k + 1, guard); return;
      case CardKind::AtLeast: constrain(CardKind::AtMost, lits, k - 1, guard); return;
      case CardKind::Exact: {
        Lit below = fresh();
        Lit above = fresh();
        Clause pick{below, above};
        if (guard != 0) pick.push_back(guard);
        db_.add(std::move(pick));
        constrain(CardKind::AtMost, lits, k - 1, -below);
        constrain(CardKind::AtLeast, lits, k + 1, -above);
        return;
      }
    }
  }

  Lit define(const GF& g, Polarity pol) {
    switch (g.kind) {
      case GK::Lit: return lit_of(g);
      case GK::Not: return -define(g.children[0], flip(pol));
      case GK::True:
      case GK::False: {
        if (constant_ == 0) {
          constant_ = fresh();
          db_.add({constant_});
        }
        return g.kind == GK::True ? constant_ : -constant_;
      }
      case GK::Theory:
        throw CompileError("numeric comparisons need the SMT back end", Span{});
      case GK::And:
      case GK::Or: {
        auto lits = children_lits(g, pol);
        Lit t = fresh();
        const bool is_and = g.kind == GK::And;
        // And: t -> each child; Or: each child -> t.
        if (pol & (is_and ? kPos : kNeg)) {
          for (Lit l : lits) db_.add(is_and ? Clause{-t, l} : Clause{-l, t});
        }
        if (pol & (is_and ? kNeg : kPos)) {
          Clause c{is_and ? t : -t};
          for (Lit l : lits) c.push_back(is_and ? -l : l);
          db_.add(std::move(c));
        }
        return t;
      }
      case GK::Impl: {
        Lit a = define(g.children[0], flip(pol));
        Lit b = define(g.children[1], pol);
        Lit t = fresh();
        if (pol & kPos) db_.add({-t, -a, b});
        if (pol & kNeg) {
          db_.add({a, t});
          db_.add({-b, t});
        }
        return t;
      }
      case GK::Iff: {
        Lit a = define(g.children[0], kBoth);
        Lit b = define(g.children[1], kBoth);
        Lit t = fresh();
        if (pol & kPos) {
          db_.add({-t, -a, b});
          db_.add({-t, a, -b});
        }
        if (pol & kNeg) {
          db_.add({t, a, b});
          db_.add({t, -a, -b});
        }
        return t;
      }
      case GK::Card: {
        Polarity need = card_children(g.card);
        Polarity child = pol == kPos ? need : pol == kNeg ? flip(need) : kBoth;
        auto lits = children_lits(g, child);
        Lit t = fresh();
        if (pol & kPos) constrain(g.card, lits, g.k, -t);
        if (pol & kNeg) complement(g.card, lits, g.k, t);
        return t;
      }
    }
    throw InternalError("unhandled formula kind in CNF conversion");
  }

  ClauseDb& db_;
  CardEncoding enc_;
  Lit constant_ = 0;
};

}  // namespace

ClauseDb tseitin(const GroundFormula& g, CardEncoding enc) {
  if (has_theory_atoms(g))
    throw CompileError("formula contains numeric comparisons; use the SMT back end", Span{});
  ClauseDb db;
  for (const auto& atom : collect_atoms(g)) db.varmap.add_user(atom);
  Tseitin(db, enc).assert_formula(simplify(g));
  return db;
}

std::string emit_dimacs(const ClauseDb& db, bool comments) {
  std::string out;
  if (comments) {
    for (int v = 1; v <= db.varmap.n_user(); ++v)
      out += "c " + db.varmap.name(v) + " = " + std::to_string(v) + "\n";
  }
  out += "p cnf " + std::to_string(db.n_vars()) + " " + std::to_string(db.clauses.size()) + "\n";
  for (const auto& c : db.clauses) {
    for (Lit l : c) out += std::to_string(l) + " ";
    out += "0\n";
  }
  return out;
}

namespace {

std::vector<std::string_view> fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

long long to_int(std::string_view s, std::size_t line_no) {
  long long v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    throw DimacsError("line " + std::to_string(line_no) + ": expected an integer, got '" +
                      std::string(s) + "'");
  return v;
}

}  // namespace

ClauseDb parse_dimacs(std::string_view text) {
  std::map<long long, std::string> names;
  long long n_vars = -1;
  long long n_clauses = -1;
  std::vector<Clause> clauses;
  Clause current;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    std::size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    auto f = fields(line);
    if (f.empty()) continue;
    if (f[0] == "c") {
      // Atom texts never contain spaces, so a name comment is exactly 4 fields.
      if (f.size() == 4 && f[2] == "=") {
        long long v = 0;
        auto [p, ec] = std::from_chars(f[3].data(), f[3].data() + f[3].size(), v);
        if (ec == std::errc() && p == f[3].data() + f[3].size() && v > 0)
          names.emplace(v, std::string(f[1]));
      }
      continue;
    }
    if (f[0] == "p") {
      if (n_vars >= 0) throw DimacsError("line " + std::to_string(line_no) + ": second header");
      if (f.size() != 4 || f[1] != "cnf")
        throw DimacsError("line " + std::to_string(line_no) + ": malformed header");
      n_vars = to_int(f[2], line_no);
      n_clauses = to_int(f[3], line_no);
      if (n_vars < 0 || n_clauses < 0 || n_vars > 100'000'000)
        throw DimacsError("line " + std::to_string(line_no) + ": bad header counts");
      continue;
    }
    if (n_vars < 0) throw DimacsError("line " + std::to_string(line_no) + ": clause before header");
    for (auto tok : f) {
      long long l = to_int(tok, line_no);
      if (l == 0) {
        if (current.empty())
          throw DimacsError("line " + std::to_string(line_no) + ": empty clause");
        clauses.push_back(std::move(current));
        current.clear();
      } else {
        if (std::llabs(l) > n_vars)
          throw DimacsError("line " + std::to_string(line_no) + ": literal " + std::to_string(l) +
                            " exceeds variable count");
        current.push_back(static_cast<Lit>(l));
      }
    }
  }
  if (n_vars < 0) throw DimacsError("missing 'p cnf' header");
  if (!current.empty()) throw DimacsError("last clause is not terminated by 0");
  if (static_cast<long long>(clauses.size()) != n_clauses)
    throw DimacsError("header announces " + std::to_string(n_clauses) + " clauses, found " +
                      std::to_string(clauses.size()));

  ClauseDb db;
  try {
    long long expected = 1;
    for (const auto& [v, name] : names) {
      if (v != expected || v > n_vars) throw DimacsError("atom names must cover variables 1..m");
      db.varmap.add_user(name);
      ++expected;
    }
    for (long long v = expected; v <= n_vars; ++v) db.varmap.fresh("_V" + std::to_string(v));
    for (auto& c : clauses) db.add(std::move(c));
  } catch (const std::invalid_argument& e) {
    throw DimacsError(e.what());
  }
  return db;
}

}  // namespace twist
