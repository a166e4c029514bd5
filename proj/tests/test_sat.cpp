// Copyright 2026 The twist Authors
// SPDX-License-Identifier: Apache-2.0

#include <chrono>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "support/checkers.hpp"
#include "support/oracles.hpp"
#include "twist/compile.hpp"
#include "twist/external_sat.hpp"
#include "twist/modelview.hpp"
#include "twist/sat.hpp"

using namespace twist;

namespace {

ClauseDb make_db(int n, const std::vector<Clause>& clauses) {
  ClauseDb db;
  for (int v = 1; v <= n; ++v) db.varmap.add_user("x" + std::to_string(v));
  for (const auto& c : clauses) db.add(c);
  return db;
}

ClauseDb compile_src(const std::string& src) {
  Compiled c = compile(src);
  REQUIRE_MESSAGE(c.ok(), c.format("input"));
  REQUIRE(c.cnf.has_value());
  return *c.cnf;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// PHP(n+1, n): pigeon p sits in hole h when variable p*n+h+1 is true.
ClauseDb pigeonhole(int n) {
  std::vector<Clause> cs;
  auto var = [n](int p, int h) { return p * n + h + 1; };
  for (int p = 0; p <= n; ++p) {
    Clause c;
    for (int h = 0; h < n; ++h) c.push_back(var(p, h));
    cs.push_back(c);
  }
  for (int h = 0; h < n; ++h)
    for (int p = 0; p <= n; ++p)
      for (int q = p + 1; q <= n; ++q) cs.push_back({-var(p, h), -var(q, h)});
  return make_db((n + 1) * n, cs);
}

std::set<std::vector<bool>> enumerate(const ClauseDb& db, const SolverOptions& opts = {}) {
  Session s(db, opts);
  std::set<std::vector<bool>> out;
  for (;;) {
    SolveResult r = s.next();
    if (r.status != SatStatus::Sat) {
      CHECK(r.status == SatStatus::Unsat);
      break;
    }
    std::vector<bool> proj(r.model.begin() + 1, r.model.begin() + 1 + db.varmap.n_user());
    CHECK(out.insert(proj).second);
  }
  CHECK(s.exhausted());
  return out;
}

}  // namespace

TEST_CASE("trivial instances") {
  CHECK(solve(make_db(1, {{1}, {-1}})).status == SatStatus::Unsat);
  SolveResult r = solve(make_db(2, {{1, 2}}));
  REQUIRE(r.status == SatStatus::Sat);
  CHECK((r.model[1] || r.model[2]));
  CHECK(solve(make_db(0, {})).status == SatStatus::Sat);
}

TEST_CASE("pigeonhole formulas are unsatisfiable") {
  for (int n = 1; n <= 6; ++n) CHECK_MESSAGE(solve(pigeonhole(n)).status == SatStatus::Unsat, n);
}

TEST_CASE("random 3-CNF over 8 variables: satisfiability and counts match brute force") {
  std::mt19937_64 rng(31337);
  for (int i = 0; i < 300; ++i) {
    const int m = 10 + static_cast<int>(rng() % 40);
    auto cs = oracle::random_3cnf(rng, 8, m);
    ClauseDb db = make_db(8, cs);
    const std::uint64_t truth = oracle::brute_force_count(cs, 8);
    CHECK((solve(db).status == SatStatus::Sat) == (truth > 0));
    CHECK(count_models(db, 1000) == truth);
    CHECK(enumerate(db).size() == truth);
  }
}

TEST_CASE("enumeration over projected models") {
  CHECK(enumerate(compile_src("p or q")).size() == 3);
  CHECK(enumerate(compile_src("exact 2, $i in (1..4): P($i) end")).size() == 6);
  // Auxiliary counter variables never produce repeated user-level models.
  Compiled seq = compile("exact 2, $i in (1..4): P($i) end",
                         CompileOptions{CardEncoding::SequentialCounter, false});
  REQUIRE(seq.cnf.has_value());
  CHECK(seq.cnf->n_vars() > seq.cnf->varmap.n_user());
  CHECK(enumerate(*seq.cnf).size() == 6);
  CHECK(enumerate(compile_src("p and not p")).empty());
}

TEST_CASE("enumeration is complete on random formulas") {
  std::mt19937_64 rng(5);
  const std::vector<std::string> atoms = {"a", "b", "c", "d", "e", "f"};
  for (int i = 0; i < 200; ++i) {
    GroundFormula g = oracle::random_formula(rng, atoms, 4);
    ClauseDb db = tseitin(g, i % 2 ? CardEncoding::SequentialCounter : CardEncoding::Binomial);
    const auto expected = oracle::projected_models(db.clauses, db.n_vars(), db.varmap.n_user());
    CHECK(enumerate(db) == expected);
  }
}

TEST_CASE("count_models") {
  CHECK(count_models(compile_src("p and not p"), 10) == 0);
  CHECK(count_models(compile_src("p or not p"), 10) == 2);
  CHECK(count_models(compile_src("exact 2, $i in (1..4): P($i) end"), 4) == 4);
  CHECK_THROWS_AS(count_models(compile_src("p"), 0), std::invalid_argument);
}

TEST_CASE("fixed seed gives the same model sequence") {
  ClauseDb db = compile_src("atleast 3, $i in (1..7): P($i) end");
  for (std::uint64_t seed : {0u, 1u, 99u}) {
    SolverOptions opts;
    opts.seed = seed;
    Session a(db, opts), b(db, opts);
    for (int i = 0; i < 20; ++i) {
      SolveResult x = a.next(), y = b.next();
      CHECK(x.status == y.status);
      CHECK(x.model == y.model);
    }
  }
}

TEST_CASE("assumptions") {
  ClauseDb db = make_db(3, {{1, 2}, {-1, 3}});
  CHECK(solve(db, std::vector<Lit>{-2, -3}).status == SatStatus::Unsat);
  SolveResult r = solve(db, std::vector<Lit>{1});
  REQUIRE(r.status == SatStatus::Sat);
  CHECK(r.model[1]);
  CHECK(r.model[3]);
  Solver s;
  s.reserve_vars(3);
  for (const auto& c : db.clauses) s.add_clause(c);
  CHECK(s.solve(std::vector<Lit>{-2, -3}) == SatStatus::Unsat);
  CHECK(s.solve() == SatStatus::Sat);
}

TEST_CASE("an exhausted conflict budget answers unknown") {
  SolverOptions opts;
  opts.conflict_budget = 5;
  CHECK(solve(pigeonhole(7), {}, opts).status == SatStatus::Unknown);
  CHECK_THROWS_AS(count_models(pigeonhole(7), 5, opts), BudgetExceeded);
}

TEST_CASE("model verification rejects a bad assignment") {
  std::vector<Clause> cs = {{1, 2}, {-1}};
  CHECK_NOTHROW(verify_model(cs, {false, false, true}));
  CHECK_THROWS_AS(verify_model(cs, {false, true, false}), InternalError);
}

TEST_CASE("sudoku solves quickly to a valid grid with a unique solution") {
  Compiled c = compile(slurp(std::string(TWIST_CORPUS_DIR) + "/sudoku.tw"));
  REQUIRE(c.cnf.has_value());
  CHECK(c.cnf->varmap.n_user() == 729);
  const auto start = std::chrono::steady_clock::now();
  Session s(*c.cnf);
  SolveResult r = s.next();
  CHECK(std::chrono::steady_clock::now() - start < std::chrono::seconds(5));
  REQUIRE(r.status == SatStatus::Sat);
  check::Grid9 grid;
  REQUIRE(check::sudoku_grid(decode(r.model, c.cnf->varmap), grid));
  CHECK(check::sudoku_valid(grid));
  CHECK(check::sudoku_respects_clues(grid));
  CHECK(s.next().status == SatStatus::Unsat);
  CHECK(s.models_found() == 1);
}

TEST_CASE("external solver mode") {
  SolverOptions opts;
  opts.external_cmd = std::string(TWIST_DIMACS_PATH) + " {file}";
  ClauseDb db = compile_src("p or q");
  CHECK(solve(db, {}, opts).status == SatStatus::Sat);
  CHECK(enumerate(db, opts).size() == 3);
  CHECK(solve(compile_src("p and not p"), {}, opts).status == SatStatus::Unsat);
  SolverOptions piped;
  piped.external_cmd = TWIST_DIMACS_PATH;
  CHECK(enumerate(compile_src("exact 2, $i in (1..4): P($i) end"), piped).size() == 6);
}

TEST_CASE("SAT-competition output parsing") {
  SolveResult r = parse_sat_output("c comment\ns SATISFIABLE\nv 1 -2\nv 3 0\n", 4);
  REQUIRE(r.status == SatStatus::Sat);
  CHECK(r.model == std::vector<bool>{false, true, false, true, false});
  CHECK(parse_sat_output("s UNSATISFIABLE\n", 2).status == SatStatus::Unsat);
  CHECK(parse_sat_output("s UNKNOWN\n", 2).status == SatStatus::Unknown);
  CHECK_THROWS_AS(parse_sat_output("garbage\n", 2), ExternalSolverError);
}
