// Copyright 2026 The twist Authors
// SPDX-License-Identifier: Apache-2.0

#include <chrono>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "support/oracles.hpp"
#include "twist/cnf.hpp"
#include "twist/compile.hpp"
#include "twist/parser.hpp"

using namespace twist;
using GF = GroundFormula;
using GK = GroundFormula::Kind;

namespace {

GF lit(const std::string& a, bool pos = true) { return GF::lit(a, pos); }

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE_MESSAGE(in.good(), path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

GF ground_src(const std::string& src) {
  ParseResult r = parse(src);
  REQUIRE_MESSAGE(r.ok(), src);
  return ground(*r.program);
}

/// Checks both directions of the projection property over every assignment
/// to the atoms of `g`: the assignment satisfies `g` exactly when the CNF
/// plus the corresponding unit clauses is satisfiable.
bool projection_holds(const GF& g, const ClauseDb& db) {
  std::set<std::string> names;
  oracle::atoms_of(g, names);
  const std::vector<std::string> atoms(names.begin(), names.end());
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << atoms.size()); ++bits) {
    std::map<std::string, bool> a;
    std::vector<Clause> cs = db.clauses;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      const bool v = (bits >> i) & 1;
      a[atoms[i]] = v;
      if (auto var = db.varmap.find(atoms[i])) cs.push_back({v ? *var : -*var});
    }
    if (oracle::eval(g, a) != oracle::dpll_sat(cs, db.n_vars())) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("a conjunction of atoms becomes unit clauses") {
  ClauseDb db = tseitin(GF::make(GK::And, {lit("p"), lit("q")}));
  CHECK(db.clauses == std::vector<Clause>{{1}, {2}});
  CHECK(db.n_vars() == 2);
  CHECK(db.varmap.n_user() == 2);
}

TEST_CASE("a nested conjunction gets one definition variable") {
  GF g = GF::make(GK::Or, {lit("p"), GF::make(GK::And, {lit("q"), lit("r")})});
  ClauseDb db = tseitin(g);
  CHECK(db.n_vars() == 4);
  CHECK(db.varmap.name(4) == "_T1");
  std::set<Clause> got;
  for (auto c : db.clauses) {
    std::sort(c.begin(), c.end());
    got.insert(c);
  }
  CHECK(got == std::set<Clause>{{1, 4}, {-4, 2}, {-4, 3}});
  CHECK(projection_holds(g, db));
}

TEST_CASE("user atoms are numbered in first-occurrence order") {
  ClauseDb db = tseitin(ground_src("c or a\nb => a\n"));
  CHECK(db.varmap.name(1) == "c");
  CHECK(db.varmap.name(2) == "a");
  CHECK(db.varmap.name(3) == "b");
}

TEST_CASE("simplification") {
  CHECK(simplify(GF::make(GK::Not, {GF::make(GK::Not, {lit("p")})})) == lit("p"));
  CHECK(simplify(GF::make(GK::And, {lit("p"), GF::truth(false)})) == GF::truth(false));
  CHECK(simplify(GF::make(GK::Or, {lit("p"), GF::make(GK::Or, {lit("q"), GF::truth(false)})})) ==
        GF::make(GK::Or, {lit("p"), lit("q")}));
  CHECK(simplify(GF::make(GK::Impl, {GF::truth(false), lit("q")})) == GF::truth(true));
}

TEST_CASE("degenerate inputs") {
  ClauseDb t = tseitin(GF::truth(true));
  CHECK(t.clauses.empty());
  ClauseDb f = tseitin(GF::truth(false));
  CHECK_FALSE(oracle::dpll_sat(f.clauses, f.n_vars()));
  ClauseDb contra = tseitin(GF::make(GK::And, {lit("p"), lit("p", false)}));
  CHECK_FALSE(oracle::dpll_sat(contra.clauses, contra.n_vars()));
}

TEST_CASE("theory atoms are refused") {
  GF g = ground_src("int x\nformulas:\nx(1) > 0\n");
  CHECK_THROWS_AS(tseitin(g), CompileError);
}

TEST_CASE("clause database hygiene") {
  ClauseDb db;
  db.varmap.add_user("a");
  db.varmap.add_user("b");
  db.add({1, 1, -2});
  db.add({1, -1});
  CHECK(db.clauses == std::vector<Clause>{{1, -2}});
  CHECK_THROWS_AS(db.add({}), std::invalid_argument);
  CHECK_THROWS_AS(db.add({3}), std::invalid_argument);
  CHECK_THROWS_AS(db.add({0}), std::invalid_argument);
}

TEST_CASE("random formulas: equisatisfiable with exact projection") {
  std::mt19937_64 rng(4242);
  const std::vector<std::string> atoms = {"a", "b", "c", "d"};
  const auto start = std::chrono::steady_clock::now();
  for (int i = 0; i < 1000; ++i) {
    GF g = oracle::random_formula(rng, atoms, 5);
    for (auto enc : {CardEncoding::Binomial, CardEncoding::SequentialCounter}) {
      ClauseDb db = tseitin(g, enc);
      for (const auto& c : db.clauses) {
        CHECK_FALSE(c.empty());
        std::set<int> seen;
        for (Lit l : c) {
          CHECK(std::abs(l) <= db.n_vars());
          CHECK(seen.insert(l).second);
          CHECK_FALSE(seen.count(-l));
        }
      }
      const bool sat = !oracle::models(g, atoms).empty();
      CHECK(sat == oracle::dpll_sat(db.clauses, db.n_vars()));
      CHECK(projection_holds(g, db));
    }
  }
  CHECK(std::chrono::steady_clock::now() - start < std::chrono::seconds(60));
}

TEST_CASE("DIMACS emission format") {
  ClauseDb db;
  db.varmap.add_user("x");
  db.varmap.add_user("y");
  db.add({1});
  db.add({2});
  CHECK(emit_dimacs(db) == "c x = 1\nc y = 2\np cnf 2 2\n1 0\n2 0\n");
  CHECK(emit_dimacs(db, false) == "p cnf 2 2\n1 0\n2 0\n");
  ClauseDb empty;
  empty.varmap.add_user("z");
  CHECK(emit_dimacs(empty, false) == "p cnf 1 0\n");
}

TEST_CASE("DIMACS round trip") {
  std::mt19937_64 rng(7);
  for (int round = 0; round < 200; ++round) {
    ClauseDb db;
    const int n = 1 + static_cast<int>(rng() % 12);
    for (int v = 1; v <= n; ++v) db.varmap.add_user("v" + std::to_string(v) + "(" +
                                                    std::to_string(round) + ")");
    for (int c = 0, m = static_cast<int>(rng() % 20); c < m; ++c) {
      Clause cl;
      for (int j = 0, w = 1 + static_cast<int>(rng() % 4); j < w; ++j) {
        const int v = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(n));
        cl.push_back(rng() % 2 ? v : -v);
      }
      db.add(cl);
    }
    const std::string text = emit_dimacs(db);
    ClauseDb back = parse_dimacs(text);
    CHECK(back == db);
    CHECK(emit_dimacs(back) == text);
    CHECK(parse_dimacs(emit_dimacs(db, false)).clauses == db.clauses);
  }
}

TEST_CASE("DIMACS parse errors") {
  CHECK_THROWS_AS(parse_dimacs("1 0\n"), DimacsError);
  CHECK_THROWS_AS(parse_dimacs("p cnf 2 1\n3 0\n"), DimacsError);
  CHECK_THROWS_AS(parse_dimacs("p cnf 2 2\n1 0\n"), DimacsError);
  CHECK_THROWS_AS(parse_dimacs("p cnf x 1\n1 0\n"), DimacsError);
  ClauseDb ok = parse_dimacs("c hello\np cnf 3 1\n1 -3 0\n");
  CHECK(ok.n_vars() == 3);
  CHECK(ok.varmap.name(2) == "_V2");
}

TEST_CASE("golden DIMACS files are reproduced byte for byte") {
  struct Case {
    const char* source;
    const char* golden;
    CardEncoding enc;
    bool comments;
  };
  const std::string corpus = TWIST_CORPUS_DIR;
  const std::string golden = TWIST_GOLDEN_DIR;
  const Case cases[] = {
      {"/xor.tw", "/xor.cnf", CardEncoding::Auto, true},
      {"/chain.tw", "/chain.cnf", CardEncoding::Auto, true},
      {"/frame_axioms.tw", "/frame_axioms.cnf", CardEncoding::Auto, true},
      {"/sudoku.tw", "/sudoku.cnf", CardEncoding::Auto, true},
      {"/takuzu.tw", "/takuzu_nocomments.cnf", CardEncoding::Auto, false},
  };
  for (const auto& c : cases) {
    CompileOptions opts;
    opts.encoding = c.enc;
    for (int run = 0; run < 2; ++run) {
      Compiled out = compile(slurp(corpus + c.source), opts);
      REQUIRE(out.cnf.has_value());
      CHECK_MESSAGE(emit_dimacs(*out.cnf, c.comments) == slurp(golden + c.golden), c.golden);
    }
  }
  CompileOptions seq;
  seq.encoding = CardEncoding::SequentialCounter;
  Compiled e = compile(slurp(golden + "/exact2of4.tw"), seq);
  REQUIRE(e.cnf.has_value());
  CHECK(emit_dimacs(*e.cnf) == slurp(golden + "/exact2of4_seqcounter.cnf"));
}

TEST_CASE("the chain golden file holds one implication clause per step") {
  ClauseDb db = parse_dimacs(slurp(std::string(TWIST_GOLDEN_DIR) + "/chain.cnf"));
  REQUIRE(db.clauses.size() == 9);
  for (int i = 1; i <= 9; ++i) {
    const Clause& c = db.clauses[static_cast<std::size_t>(i - 1)];
    REQUIRE(c.size() == 2);
    CHECK(db.varmap.name(-c[0]) == "P(" + std::to_string(i) + ")");
    CHECK(db.varmap.name(c[1]) == "Q(" + std::to_string(i + 1) + ")");
  }
}

TEST_CASE("a 2x2 mini sudoku keeps its solutions through CNF") {
  GF g = ground_src(
      "$D = (1, 2)\n"
      "bigand $r in $D, $c in $D: exact 1, $d in $D: P($r,$c,$d) end end\n"
      "bigand $r in $D, $d in $D: exact 1, $c in $D: P($r,$c,$d) end end\n"
      "bigand $c in $D, $d in $D: exact 1, $r in $D: P($r,$c,$d) end end\n");
  ClauseDb db = tseitin(g);
  CHECK(projection_holds(g, db));
  // Brute force over the 2^8 placements: a Latin square of order 2 is
  // fixed by its top-left digit.
  int latin = 0;
  for (int bits = 0; bits < 256; ++bits) {
    auto at = [&](int r, int c, int d) { return (bits >> ((r - 1) * 4 + (c - 1) * 2 + (d - 1))) & 1; };
    bool ok = true;
    for (int x = 1; x <= 2; ++x)
      for (int y = 1; y <= 2; ++y) {
        ok = ok && at(x, y, 1) + at(x, y, 2) == 1;
        ok = ok && at(x, 1, y) + at(x, 2, y) == 1;
        ok = ok && at(1, x, y) + at(2, x, y) == 1;
      }
    latin += ok;
  }
  CHECK(latin == 2);
  CHECK(oracle::projected_models(db.clauses, db.n_vars(), db.varmap.n_user()).size() == 2);
}
