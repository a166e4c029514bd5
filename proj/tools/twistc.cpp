// Copyright 2026 The twist Authors
// SPDX-License-Identifier: Apache-2.0

// Command-line front end: check, latex, dimacs, smt2, solve, count.

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <json.hpp>
#include <regex>
#include <sstream>

#include "twist/compile.hpp"
#include "twist/external_sat.hpp"
#include "twist/modelview.hpp"
#include "twist/parser.hpp"
#include "twist/process.hpp"
#include "twist/render.hpp"
#include "twist/sat.hpp"
#include "twist/smt.hpp"

namespace {

using namespace twist;
using json = nlohmann::json;

enum Exit : int {
  kSat = 0,
  kUserError = 1,
  kIoError = 2,
  kUnsat = 20,
  kUnknown = 30,
  kInternal = 99,
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string input;
  std::string encoding = "auto";
  bool no_comments = false;
  bool force = false;
  std::uint64_t limit = 1;
  std::string filter;
  bool true_only = false;
  bool false_only = false;
  std::uint64_t seed = 0;
  std::uint64_t budget = 10'000'000;
  bool json = false;
  std::string smt_cmd;
  std::string sat_cmd;
  double timeout = 30;
};

std::string read_input(const std::string& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    if (std::cin.bad()) throw IoError("cannot read standard input");
    return ss.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("cannot read '" + path + "'");
  return text;
}

std::string display_name(const std::string& path) { return path == "-" ? "<stdin>" : path; }

CardEncoding encoding_of(const std::string& name) {
  if (name == "binomial") return CardEncoding::Binomial;
  if (name == "seqcounter") return CardEncoding::SequentialCounter;
  return CardEncoding::Auto;
}

// Compiles the input, printing diagnostics; nullopt when there were errors.
std::optional<Compiled> front_end(const Options& o, bool skip_cnf) {
  Compiled c = compile(read_input(o.input), {encoding_of(o.encoding), skip_cnf});
  std::cerr << c.format(display_name(o.input));
  if (!c.ok()) return std::nullopt;
  return c;
}

int report(const CompileError& e, const Options& o, const std::string& source) {
  std::cerr << format_diagnostic(e.diagnostic(), source, display_name(o.input));
  return kUserError;
}

SolverOptions solver_options(const Options& o) {
  SolverOptions s;
  s.seed = o.seed;
  s.conflict_budget = o.budget;
  s.external_cmd = o.sat_cmd;
  s.external_timeout = std::chrono::milliseconds(static_cast<long long>(o.timeout * 1000));
  return s;
}

Polarity polarity_of(const Options& o) {
  return o.true_only ? Polarity::TrueOnly : o.false_only ? Polarity::FalseOnly : Polarity::All;
}

int cmd_check(const Options& o) {
  auto c = front_end(o, true);
  if (!c) return kUserError;
  std::cout << "ok: " << collect_atoms(*c->ground).size() << " atoms, "
            << to_string(c->logic) << "\n";
  return kSat;
}

int cmd_latex(const Options& o) {
  const std::string source = normalize_newlines(read_input(o.input));
  ParseResult p = parse(source);
  for (const auto& d : p.diagnostics) std::cerr << format_diagnostic(d, source, display_name(o.input));
  if (!p.ok()) return kUserError;
  std::cout << render_latex(*p.program);
  return kSat;
}

int cmd_dimacs(const Options& o) {
  auto c = front_end(o, false);
  if (!c) return kUserError;
  if (!c->cnf) {
    std::cerr << display_name(o.input)
              << ": error: formula has numeric comparisons; use 'smt2' instead\n";
    return kUserError;
  }
  std::cout << emit_dimacs(*c->cnf, !o.no_comments);
  return kSat;
}

int cmd_smt2(const Options& o) {
  auto c = front_end(o, true);
  if (!c) return kUserError;
  try {
    std::cout << emit_smtlib(*c->ground, o.force).text;
  } catch (const CompileError& e) {
    return report(e, o, c->source);
  }
  return kSat;
}

struct FoundModel {
  ModelView view;
  std::vector<std::pair<std::string, Rational>> values;
};

void print_text(const std::vector<FoundModel>& models, const Options& o) {
  const std::regex re(o.filter.empty() ? std::string(".") : o.filter);
  for (std::size_t i = 0; i < models.size(); ++i) {
    if (i) std::cout << "====\n";
    const ModelView v = apply_filter(models[i].view, o.filter, polarity_of(o));
    for (const auto& r : v.rows) std::cout << (r.value ? "1 " : "0 ") << r.atom << "\n";
    if (o.true_only || o.false_only) continue;
    for (const auto& [name, value] : models[i].values) {
      if (!o.filter.empty() && !std::regex_search(name, re)) continue;
      std::cout << name << " = " << value.to_string() << "\n";
    }
  }
}

void print_json(SatStatus status, const std::vector<FoundModel>& models, const Options& o) {
  json out{{"status", std::string(to_string(status))}, {"models", json::array()}};
  bool numeric = false;
  json values = json::array();
  for (const auto& m : models) {
    json rows = json::array();
    for (const auto& r : apply_filter(m.view, o.filter, polarity_of(o)).rows)
      rows.push_back({{"atom", r.atom}, {"value", r.value}});
    out["models"].push_back(rows);
    json vals = json::array();
    for (const auto& [name, value] : m.values) {
      numeric = true;
      vals.push_back({{"name", name}, {"value", value.to_string()}});
    }
    values.push_back(vals);
  }
  if (numeric) out["values"] = values;
  std::cout << out.dump(2) << "\n";
}

// Runs the enumeration; returns the status of the first answer.
SatStatus enumerate(const Compiled& c, const Options& o, std::uint64_t limit,
                    std::vector<FoundModel>& found, bool& stopped_unknown) {
  SatStatus first = SatStatus::Unknown;
  stopped_unknown = false;
  auto record = [&](SatStatus s) {
    if (found.empty()) first = s;
    if (s == SatStatus::Unknown) stopped_unknown = true;
  };
  if (c.cnf) {
    Session s(*c.cnf, solver_options(o));
    while (found.size() < limit) {
      SolveResult r = s.next();
      record(r.status);
      if (r.status != SatStatus::Sat) break;
      found.push_back({decode(r.model, s.db().varmap), {}});
    }
  } else {
    const std::string cmd = resolve_smt_command(o.smt_cmd);
    if (cmd.empty())
      throw ExternalSolverError("no SMT solver available; set TWISTC_SMT_CMD or pass --smt-cmd");
    SmtSession s(*c.ground, cmd, solver_options(o).external_timeout);
    while (found.size() < limit) {
      SmtResult r = s.next();
      record(r.status);
      if (r.status != SatStatus::Sat) break;
      found.push_back({make_view(r.model.atoms), r.model.numbers});
    }
  }
  return found.empty() ? first : SatStatus::Sat;
}

int cmd_solve(const Options& o) {
  if (!o.filter.empty()) {
    try {
      apply_filter({}, o.filter, Polarity::All);
    } catch (const FilterError& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kUserError;
    }
  }
  auto c = front_end(o, false);
  if (!c) return kUserError;
  std::vector<FoundModel> found;
  bool unknown = false;
  const SatStatus status = enumerate(*c, o, o.limit, found, unknown);
  if (o.json) {
    print_json(status, found, o);
  } else if (status == SatStatus::Sat) {
    print_text(found, o);
  } else {
    std::cout << to_string(status) << "\n";
  }
  if (status == SatStatus::Sat) return kSat;
  return status == SatStatus::Unsat ? kUnsat : kUnknown;
}

int cmd_count(const Options& o) {
  auto c = front_end(o, false);
  if (!c) return kUserError;
  std::vector<FoundModel> found;
  bool unknown = false;
  enumerate(*c, o, o.limit, found, unknown);
  if (unknown) {
    std::cout << "unknown\n";
    return kUnknown;
  }
  std::cout << found.size() << "\n";
  return kSat;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"twistc: compile and solve propositional logic with sets and cardinalities"};
  app.require_subcommand(1);
  Options o;

  auto input = [&o](CLI::App* sub) {
    sub->add_option("file", o.input, "Source file, or - for standard input")->required();
  };
  auto check = app.add_subcommand("check", "Parse and ground; report diagnostics");
  input(check);
  auto latex = app.add_subcommand("latex", "Print the LaTeX rendering");
  input(latex);
  auto dimacs = app.add_subcommand("dimacs", "Print the DIMACS CNF");
  input(dimacs);
  dimacs->add_option("--encoding", o.encoding, "Cardinality encoding")
      ->check(CLI::IsMember({"auto", "binomial", "seqcounter"}));
  dimacs->add_flag("--no-comments", o.no_comments, "Omit the atom-name comment lines");
  auto smt2 = app.add_subcommand("smt2", "Print the SMT-LIB 2 script");
  input(smt2);
  smt2->add_flag("--force", o.force, "Emit a script even without numeric comparisons");

  auto solving = [&o](CLI::App* sub) {
    sub->add_option("--encoding", o.encoding, "Cardinality encoding")
        ->check(CLI::IsMember({"auto", "binomial", "seqcounter"}));
    sub->add_option("--seed", o.seed, "Solver random seed");
    sub->add_option("--budget", o.budget, "Conflict budget per solver call")
        ->check(CLI::PositiveNumber);
    sub->add_option("--smt-cmd", o.smt_cmd, "SMT solver command template");
    sub->add_option("--sat-cmd", o.sat_cmd, "External SAT solver command template");
    sub->add_option("--timeout", o.timeout, "External solver timeout in seconds")
        ->check(CLI::PositiveNumber);
  };
  auto solve = app.add_subcommand("solve", "Print models");
  input(solve);
  solving(solve);
  solve->add_option("--limit", o.limit, "Maximum number of models")->check(CLI::PositiveNumber);
  solve->add_option("--filter", o.filter, "Show atoms matching this regular expression");
  auto t = solve->add_flag("--true-only", o.true_only, "Show true atoms only");
  auto f = solve->add_flag("--false-only", o.false_only, "Show false atoms only");
  t->excludes(f);
  solve->add_flag("--json", o.json, "JSON output");
  auto count = app.add_subcommand("count", "Count models up to a limit");
  input(count);
  solving(count);
  count->add_option("--limit", o.limit, "Stop counting here")->required()->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUserError;
  }

  try {
    if (*check) return cmd_check(o);
    if (*latex) return cmd_latex(o);
    if (*dimacs) return cmd_dimacs(o);
    if (*smt2) return cmd_smt2(o);
    if (*solve) return cmd_solve(o);
    if (*count) return cmd_count(o);
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIoError;
  } catch (const SpawnError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIoError;
  } catch (const ExternalSolverError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIoError;
  } catch (const InternalError& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  }
  return kUserError;
}
