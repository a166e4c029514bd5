// Copyright 2026 The twist Authors
// SPDX-License-Identifier: Apache-2.0

#include <chrono>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "support/naive_expander.hpp"
#include "support/oracles.hpp"
#include "twist/ground.hpp"
#include "twist/parser.hpp"
#include "twist/render.hpp"

using namespace twist;
using GF = GroundFormula;
using GK = GroundFormula::Kind;

namespace {

GF ground_src(const std::string& src) {
  ParseResult r = parse(src);
  REQUIRE_MESSAGE(r.ok(), src);
  return ground(*r.program);
}

std::string ground_error(const std::string& src, std::string* context = nullptr) {
  ParseResult r = parse(src);
  REQUIRE_MESSAGE(r.ok(), src);
  try {
    ground(*r.program);
  } catch (const CompileError& e) {
    if (context) *context = e.context();
    return e.what();
  }
  FAIL("grounding succeeded: " << src);
  return {};
}

GF lit(const std::string& a, bool pos = true) { return GF::lit(a, pos); }

Env empty_env;

SetValue set_of(const std::string& src) {
  ParseResult r = parse("$S = " + src + "\nTop\n");
  REQUIRE_MESSAGE(r.ok(), src);
  return eval_set(r.program->sets[0].value, empty_env);
}

std::size_t count_kind(const GF& g, GK k) {
  std::size_t n = g.kind == k;
  for (const auto& c : g.children) n += count_kind(c, k);
  return n;
}

}  // namespace

TEST_CASE("set evaluation") {
  CHECK(set_of("(1..9)") == SetValue::range(1, 9));
  SetValue mixed = set_of("(1..3) union (A, B)");
  REQUIRE(mixed.size() == 5);
  CHECK(mixed.elements()[3] == Scalar::symbol("A"));
  CHECK(set_of("(1..3) inter (A, B)").empty());
  CHECK(set_of("(1..5) diff (2, 4)") == set_of("(1, 3, 5)"));
  ParseResult r = parse("$N = (1..9)\n$E = $N diff $N\nTop\n");
  REQUIRE(r.ok());
  Env env;
  env.define_set("$N", SetValue::range(1, 9));
  CHECK(eval_set(r.program->sets[1].value, env).empty());
}

TEST_CASE("arithmetic and condition evaluation") {
  namespace b = twist::build;
  Env env;
  env.push("$i", Scalar::integer(1));
  env.push("$j", Scalar::integer(2));
  CHECK(eval_arith(b::arith(ArithExpr::Kind::Add, b::var("$i"), b::var("$j")), env) ==
        Scalar::integer(3));
  CHECK(eval_arith(b::arith(ArithExpr::Kind::Mod, b::num(7), b::num(3)), env) == Scalar::integer(1));
  CHECK(eval_arith(b::arith(ArithExpr::Kind::Mod, b::num(-7), b::num(3)), env) ==
        Scalar::integer(2));
  ArithExpr sq;
  sq.kind = ArithExpr::Kind::Sqrt;
  sq.args.push_back(b::num(9));
  Scalar three = eval_arith(sq, env);
  CHECK(three.is_int());
  CHECK(three.as_int() == 3);
  for (std::int64_t v = 0; v <= 400; ++v) {
    sq.args[0] = b::num(v);
    std::int64_t r = 0;
    while ((r + 1) * (r + 1) <= v) ++r;
    CHECK(eval_arith(sq, env).is_int() == (r * r == v));
  }
  CHECK(eval_arith(b::arith(ArithExpr::Kind::Div, b::num(7), b::num(2)), env) ==
        Scalar::rational(3.5));
  CHECK(eval_arith(b::arith(ArithExpr::Kind::Div, b::num(8), b::num(2)), env).is_int());

  Env same;
  same.push("$i", Scalar::integer(2));
  same.push("$j", Scalar::integer(2));
  CHECK_FALSE(eval_cond(b::cmp(CmpOp::Ne, b::var("$i"), b::var("$j")), same));
  Env ones;
  for (const char* v : {"$i", "$j", "$k"}) ones.push(v, Scalar::integer(1));
  CHECK(eval_cond(b::cmp(CmpOp::Lt, b::var("$k"),
                         b::arith(ArithExpr::Kind::Add, b::var("$i"), b::var("$j"))),
                  ones));
  CHECK(eval_cond(b::in(b::num(2), b::range(b::num(1), b::num(3))), env));
  CHECK_THROWS_AS(eval_cond(b::cmp(CmpOp::Lt, b::sym("A"), b::num(3)), env), CompileError);
}

TEST_CASE("a bigand over a range grounds to the exact implication chain") {
  const auto start = std::chrono::steady_clock::now();
  GF g = ground_src("bigand $i in (1..9): P($i) => Q($i+1) end");
  const auto elapsed = std::chrono::steady_clock::now() - start;
  std::vector<GF> chain;
  for (int i = 1; i <= 9; ++i)
    chain.push_back(GF::make(GK::Impl, {lit("P(" + std::to_string(i) + ")"),
                                        lit("Q(" + std::to_string(i + 1) + ")")}));
  CHECK(g == GF::make(GK::And, chain));
  CHECK(elapsed < std::chrono::milliseconds(1));
}

TEST_CASE("grounding examples") {
  CHECK(ground_src("bigor $i in (1..0): P($i) end") == GF::truth(false));
  CHECK(ground_src("bigand $i in (1..0): P($i) end") == GF::truth(true));
  CHECK(ground_src("bigand $X in (A,B), $i in (1,2): $X($i) end") ==
        GF::make(GK::And, {lit("A(1)"), lit("A(2)"), lit("B(1)"), lit("B(2)")}));
  GF when = ground_src("bigand $i in (1..3), $j in (1..3) when $i != $j : P($i,$j) end");
  REQUIRE(when.kind == GK::And);
  CHECK(when.children.size() == 6);
  CHECK(when.children[0] == lit("P(1,2)"));
  CHECK(ground_src("not not p") == lit("p"));
  CHECK(ground_src("p\nq") == GF::make(GK::And, {lit("p"), lit("q")}));
  CHECK(ground_src("bigand $i in (1,): P($i) end") == lit("P(1)"));
  CHECK(ground_src("3 < 4 and p") == GF::make(GK::And, {GF::truth(true), lit("p")}));
}

TEST_CASE("the at-most-one-letter formula over 9x9x9 has 5832 implications") {
  GF g = ground_src(
      "$N = (1..9)\n"
      "bigand $i in $N, $j in $N:\n"
      "  bigand $k in $N, $l in $N when $k != $l: P($i,$j,$k) => not P($i,$j,$l) end\n"
      "end\n");
  std::size_t expected = 0;
  for (int i = 1; i <= 9; ++i)
    for (int j = 1; j <= 9; ++j)
      for (int k = 1; k <= 9; ++k)
        for (int l = 1; l <= 9; ++l) expected += k != l;
  CHECK(expected == 5832);
  CHECK(count_kind(g, GK::Impl) == expected);
  CHECK(collect_atoms(g).size() == 729);
}

TEST_CASE("grounding errors carry binder context") {
  std::string ctx;
  const std::string msg = ground_error(
      "bigand $i in (1..3), $j in (7,): P($i / ($i - 3), $j) end", &ctx);
  CHECK(msg.find("division by zero") != std::string::npos);
  CHECK(ctx == "$i=3, $j=7");
  CHECK(ground_error("bigand $X in (1, 2): $X end").find("not a predicate name") !=
        std::string::npos);
  CHECK(ground_error("atleast 1.5, $i in (1..3): P($i) end").find("integer") !=
        std::string::npos);
  CHECK(ground_error("bigand $i in (A, 1) when $i < 2: P($i) end").size() > 0);
}

TEST_CASE("cardinality folding") {
  auto card = [](CardKind k, std::int64_t bound, std::vector<std::string> atoms) {
    std::vector<GF> cs;
    for (auto& a : atoms) cs.push_back(lit(a));
    return GF::cardinality(k, bound, std::move(cs));
  };
  GF al1 = normalize_card(card(CardKind::AtLeast, 1, {"p", "q", "r"}));
  GF disj = GF::make(GK::Or, {lit("p"), lit("q"), lit("r")});
  const std::vector<std::string> pqr = {"p", "q", "r"};
  CHECK(oracle::models(al1, pqr) == oracle::models(disj, pqr));
  CHECK(normalize_card(card(CardKind::AtMost, 0, {"p", "q"})) ==
        GF::make(GK::And, {lit("p", false), lit("q", false)}));
  CHECK(normalize_card(card(CardKind::Exact, 5, {"a", "b", "c", "d"})) == GF::truth(false));
  CHECK(normalize_card(card(CardKind::AtLeast, 0, {"a"})) == GF::truth(true));
  CHECK(normalize_card(card(CardKind::AtMost, 4, {"a", "b"})) == GF::truth(true));
  CHECK(normalize_card(card(CardKind::AtLeast, 2, {"a", "b"})) ==
        GF::make(GK::And, {lit("a"), lit("b")}));
  GF kept = card(CardKind::AtMost, 1, {"a", "b", "c"});
  CHECK(normalize_card(kept) == kept);

  // Every fold preserves the model set.
  const std::vector<std::string> abcd = {"a", "b", "c", "d"};
  for (auto kind : {CardKind::AtLeast, CardKind::AtMost, CardKind::Exact})
    for (std::int64_t k = -1; k <= 5; ++k) {
      GF c = card(kind, k, abcd);
      CHECK(oracle::models(normalize_card(c), abcd) == oracle::models(c, abcd));
    }
}

TEST_CASE("grounding is deterministic") {
  ParseResult r = parse(
      "$N = (1..4)\n"
      "bigand $i in $N: atmost 2, $j in $N when $j > $i: P($i,$j) end end\n"
      "exact 1, $x in (a, b, c): $x end\n");
  REQUIRE(r.ok());
  CHECK(ground(*r.program) == ground(*r.program));
}

TEST_CASE("theory atoms ground to canonical constants") {
  GF g = ground_src("int x\nformulas:\nx(1,2) + x(2,1) == 5\n");
  REQUIRE(g.kind == GK::Theory);
  CHECK(has_theory_atoms(g));
  auto vars = collect_theory_vars(g);
  REQUIRE(vars.size() == 2);
  CHECK(vars[0].first == "x_1_2");
  CHECK(vars[1].first == "x_2_1");
  CHECK(vars[0].second == NumericSort::Int);
  CHECK(ground_src("1 + 1 == 2") == GF::truth(true));
}

TEST_CASE("random programs agree with a naive expander") {
  constexpr int kPrograms = 500;
  int compared = 0;
  std::uint64_t seed = 1;
  const auto start = std::chrono::steady_clock::now();
  while (compared < kPrograms) {
    naive::ProgramGen gen(seed++);
    Program p = gen.program();
    GF g;
    try {
      g = ground(p);
    } catch (const CompileError& e) {
      FAIL("grounding failed: " << e.what() << "\n" << render_input(p));
    }
    naive::Env env = naive::program_env(p);
    std::set<std::string> universe;
    for (const auto& f : p.formulas) naive::atoms(f, env, universe);
    for (const auto& a : collect_atoms(g)) universe.insert(a);
    if (universe.size() > 12) continue;
    const std::vector<std::string> atoms(universe.begin(), universe.end());

    std::set<oracle::Assignment> expected;
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << atoms.size()); ++bits) {
      std::map<std::string, bool> a;
      oracle::Assignment row(atoms.size());
      for (std::size_t i = 0; i < atoms.size(); ++i) {
        row[i] = (bits >> i) & 1;
        a[atoms[i]] = row[i];
      }
      bool all = true;
      for (const auto& f : p.formulas) all = all && naive::truth(f, env, a);
      if (all) expected.insert(row);
    }
    const auto actual = oracle::models(g, atoms);
    if (actual != expected) FAIL_CHECK("model sets differ for:\n" << render_input(p));
    ++compared;
  }
  CHECK(compared == kPrograms);
  CHECK(std::chrono::steady_clock::now() - start < std::chrono::seconds(60));
}
