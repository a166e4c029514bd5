// Copyright 2026 The twist Authors
// SPDX-License-Identifier: Apache-2.0

#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "support/oracles.hpp"
#include "twist/compile.hpp"
#include "twist/external_sat.hpp"
#include "twist/parser.hpp"
#include "twist/sexpr.hpp"
#include "twist/smt.hpp"

using namespace twist;
using GF = GroundFormula;

namespace {

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

GF corpus(const std::string& name) {
  return ground_src(slurp(std::string(TWIST_CORPUS_DIR) + "/" + name));
}

SmtScript raw_script(const std::string& text) {
  SmtScript s;
  s.text = text;
  return s;
}

double as_double(const Rational& r) {
  return static_cast<double>(r.num()) / static_cast<double>(r.den());
}

const std::string& solver() {
  static const std::string cmd = resolve_smt_command();
  return cmd;
}

}  // namespace

TEST_CASE("logic classification") {
  CHECK(classify(ground_src("p or q")) == Logic::PureSat);
  CHECK(classify(ground_src("real tau\nformulas:\ntau(a) < tau(b)\n")) == Logic::QF_RDL);
  CHECK(classify(ground_src("int x\nformulas:\nx(1,1) + x(1,2) == 5\n")) == Logic::QF_LIA);
  CHECK(classify(ground_src("int x\nformulas:\nx(1) - x(2) <= 3 and x(3) > 0\n")) ==
        Logic::QF_IDL);
  CHECK(classify(ground_src("real t\nformulas:\n2 * t(1) + t(2) < 3\n")) == Logic::QF_LRA);
  CHECK(classify(corpus("temporal_mutex.tw")) == Logic::QF_RDL);
  CHECK(classify(corpus("kamaji.tw")) == Logic::QF_LIA);
  CHECK(classify(corpus("frame_axioms.tw")) == Logic::PureSat);
}

TEST_CASE("classification errors") {
  CHECK_THROWS_AS(classify(ground_src("int x\nformulas:\nx(1) * x(2) == 4\n")), CompileError);
  CHECK_THROWS_AS(classify(ground_src("int x\nreal y\nformulas:\nx(1) < y(1)\n")),
                  CompileError);
  CHECK_THROWS_AS(classify(ground_src("int x\nformulas:\nx(1) / 2 == 4\n")), CompileError);
  CHECK_THROWS_AS(classify(ground_src("int x\nformulas:\nx(1) == 2.5\n")), CompileError);
}

TEST_CASE("adding a theory atom never yields pure-sat") {
  std::mt19937_64 rng(11);
  const GF atom = ground_src("int x\nformulas:\nx(1) >= 2\n");
  for (int i = 0; i < 200; ++i) {
    GF g = oracle::random_formula(rng, {"a", "b", "c"}, 4);
    CHECK(classify(GF::make(GF::Kind::And, {g, atom})) != Logic::PureSat);
    CHECK(classify(GF::make(GF::Kind::Or, {atom, g})) != Logic::PureSat);
  }
}

TEST_CASE("golden scripts") {
  const std::string dir = TWIST_GOLDEN_DIR;
  SmtScript tau = emit_smtlib(ground_src(slurp(dir + "/tau.tw")));
  CHECK(tau.text == slurp(dir + "/tau.smt2"));
  CHECK(tau.text.find("(declare-const tau_a Real)") != std::string::npos);
  CHECK(tau.text.find("(declare-const tau_b Real)") != std::string::npos);
  CHECK(tau.text.find("(assert (< tau_a tau_b))") != std::string::npos);
  CHECK(emit_smtlib(corpus("temporal_mutex.tw")).text == slurp(dir + "/temporal_mutex.smt2"));
}

TEST_CASE("emission details") {
  CHECK_THROWS_AS(emit_smtlib(ground_src("p")), CompileError);
  SmtScript top = emit_smtlib(GF::truth(true), true);
  CHECK(top.text.find("(assert true)") != std::string::npos);
  CHECK(top.logic == Logic::PureSat);
  SmtScript neg = emit_smtlib(ground_src("real t\nformulas:\nt(1) != -2.5\n"));
  CHECK(neg.text.find("(not (= t_1 (- (/ 5.0 2.0))))") != std::string::npos);
  CHECK(smt_symbol("abc") == "abc");
  CHECK(smt_symbol("P(1,2)") == "|P(1,2)|");
  std::vector<std::string> extra = {"(not p)"};
  SmtScript ex = emit_smtlib(ground_src("p or q"), true, extra);
  CHECK(ex.text.find("(assert (not p))") != std::string::npos);
  CHECK(ex.bool_atoms == std::vector<std::string>{"p", "q"});
}

TEST_CASE("every corpus file emits a well-formed script") {
  for (const char* name : {"temporal_mutex.tw", "kamaji.tw", "frame_axioms.tw", "sudoku.tw",
                           "takuzu.tw", "xor.tw", "chain.tw"}) {
    SmtScript s = emit_smtlib(corpus(name), true);
    CHECK_NOTHROW(check_script(s.text));
    CHECK(s.text.find("(check-sat)") != std::string::npos);
  }
  std::mt19937_64 rng(3);
  for (int i = 0; i < 300; ++i) {
    SmtScript s = emit_smtlib(oracle::random_formula(rng, {"a", "b", "P(1)", "x y"}, 5), true);
    CHECK_NOTHROW(check_script(s.text));
  }
}

TEST_CASE("script checker") {
  CHECK_NOTHROW(check_script("(declare-const x Int)(assert (> x 0))(check-sat)"));
  CHECK_THROWS_AS(check_script("(assert (> x 0))"), SExprError);
  CHECK_THROWS_AS(check_script("(declare-const x Int)(declare-const x Int)"), SExprError);
  CHECK_THROWS_AS(check_script("(assert (> 1 0)"), SExprError);
  CHECK_THROWS_AS(check_script("(frobnicate)"), SExprError);
  CHECK_NOTHROW(check_script("(declare-const p Bool)(assert (let ((a p) (b true)) (and a b)))"));
  CHECK_THROWS_AS(check_script("(declare-const p Bool)(assert (let ((a p) (b a)) b))"),
                  SExprError);
  auto es = parse_sexprs("(a |b c| (d))");
  REQUIRE(es.size() == 1);
  CHECK(es[0].items.size() == 3);
  CHECK(unquote_symbol(es[0].items[1].atom) == "b c");
  CHECK(to_string(es[0]) == "(a |b c| (d))");
}

TEST_CASE("rationals") {
  CHECK(Rational(6, -4) == Rational(-3, 2));
  CHECK(Rational::parse("3.25") == Rational(13, 4));
  CHECK(Rational::parse("-12") == Rational(-12));
  CHECK(Rational::parse("1e-3") == Rational(1, 1000));
  CHECK(Rational::parse("2.5e+2") == Rational(250));
  CHECK(Rational(1, 3) + Rational(1, 6) == Rational(1, 2));
  CHECK(Rational(-7, 2).to_string() == "-7/2");
  CHECK(Rational(1, 2) < Rational(2, 3));
  CHECK_THROWS_AS(Rational::parse("abc"), std::invalid_argument);
  CHECK_THROWS_AS(Rational(INT64_MAX) + Rational(1), std::overflow_error);
  CHECK_THROWS_AS(Rational(1) / Rational(0), std::exception);
}

TEST_CASE("solver output parsing and model re-check") {
  GF g = ground_src("int x\nformulas:\nG => x(1) + x(2) == 5\nG\n");
  SmtScript s = emit_smtlib(g);
  SmtResult r = parse_smt_output(
      "sat\n(\n  (define-fun G () Bool true)\n  (define-fun x_1 () Int (- 2))\n"
      "  (define-fun x_2 () Int 7)\n)\n",
      s);
  REQUIRE(r.status == SatStatus::Sat);
  CHECK(check_smt_model(g, r.model));
  SmtResult bad = parse_smt_output("sat\n((define-fun G () Bool true))\n", s);
  CHECK_FALSE(check_smt_model(g, bad.model));
  CHECK(parse_smt_output("unsat\n", s).status == SatStatus::Unsat);
  CHECK(parse_smt_output("unknown\n", s).status == SatStatus::Unknown);
  CHECK_THROWS_AS(parse_smt_output("(error \"boom\")\n", s), ExternalSolverError);

  SmtScript real = emit_smtlib(ground_src("real t\nformulas:\nt(1) > 0.5\n"));
  SmtResult frac = parse_smt_output("sat\n((define-fun t_1 () Real (/ 3.0 4.0)))\n", real);
  REQUIRE(frac.model.numbers.size() == 1);
  CHECK(frac.model.numbers[0].second == Rational(3, 4));
}

TEST_CASE("adapter with a scripted stand-in solver") {
  SmtScript s = emit_smtlib(ground_src("int x\nformulas:\nx(1) > 0\n"));
  SmtResult r = run_external_smt(
      s, "cat >/dev/null; printf 'sat\\n((define-fun x_1 () Int 3))\\n'", std::chrono::seconds(5));
  REQUIRE(r.status == SatStatus::Sat);
  CHECK(r.model.numbers[0].second == Rational(3));
  CHECK(run_external_smt(s, "sleep 5", std::chrono::milliseconds(200)).status ==
        SatStatus::Unknown);
  CHECK(resolve_smt_command("my-solver --in") == "my-solver --in");
}

TEST_CASE("external solver runs" * doctest::skip(solver().empty())) {
  SUBCASE("(< 1 0) is unsat") {
    SmtResult r = run_external_smt(raw_script("(assert (< 1 0))\n(check-sat)\n"), solver());
    CHECK(r.status == SatStatus::Unsat);
  }
  SUBCASE("(> x 0) gets a positive x") {
    SmtScript s = emit_smtlib(ground_src("int x\nformulas:\nx > 0\n"));
    SmtResult r = run_external_smt(s, solver());
    REQUIRE(r.status == SatStatus::Sat);
    REQUIRE(r.model.numbers.size() == 1);
    CHECK(r.model.numbers[0].second > Rational(0));
  }
  SUBCASE("the group sum instance sums to 5") {
    GF g = corpus("kamaji.tw");
    SmtResult r = run_external_smt(emit_smtlib(g), solver());
    REQUIRE(r.status == SatStatus::Sat);
    Rational sum;
    for (const auto& [name, v] : r.model.numbers) sum = sum + v;
    CHECK(sum == Rational(5));
    CHECK(check_smt_model(g, r.model));
  }
  SUBCASE("temporal mutex and frame axioms are sat and re-verify") {
    for (const char* name : {"temporal_mutex.tw", "frame_axioms.tw"}) {
      GF g = corpus(name);
      SmtResult r = run_external_smt(emit_smtlib(g, true), solver());
      REQUIRE(r.status == SatStatus::Sat);
      CHECK(check_smt_model(g, r.model));
    }
  }
  SUBCASE("temporal mutex orders the intervals") {
    GF g = corpus("temporal_mutex.tw");
    SmtResult r = run_external_smt(emit_smtlib(g), solver());
    REQUIRE(r.status == SatStatus::Sat);
    std::map<std::string, double> t;
    for (const auto& [name, v] : r.model.numbers) t[name] = as_double(v);
    CHECK((t["taue_2_1"] < t["taus_1_1"] || t["taue_1_1"] < t["taus_2_1"]));
  }
  SUBCASE("enumeration over the propositional atoms") {
    SmtSession s(ground_src("int x\nformulas:\n(p or q) and x(1) > 2\n"), solver());
    int n = 0;
    while (s.next().status == SatStatus::Sat) ++n;
    CHECK(n == 3);
    CHECK(s.exhausted());
  }
}
