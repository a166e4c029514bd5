// Copyright 2026 The twist Authors
// SPDX-License-Identifier: Apache-2.0

#include "twist/external_sat.hpp"

#include <charconv>
#include <cstdlib>
#include <sstream>

#include "twist/process.hpp"

namespace twist {

SolveResult parse_sat_output(std::string_view out, int n_vars) {
  SolveResult r;
  bool have_status = false;
  std::vector<bool> model(static_cast<std::size_t>(n_vars) + 1, false);
  std::istringstream lines{std::string(out)};
  std::string line;
  while (std::getline(lines, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream words(line);
    std::string tag;
    if (!(words >> tag)) continue;
    if (tag == "s") {
      std::string status;
      words >> status;
      have_status = true;
      if (status == "SATISFIABLE") r.status = SatStatus::Sat;
      else if (status == "UNSATISFIABLE") r.status = SatStatus::Unsat;
      else r.status = SatStatus::Unknown;
    } else if (tag == "v") {
      std::string tok;
      while (words >> tok) {
        long long l = 0;
        auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), l);
        if (ec != std::errc() || p != tok.data() + tok.size())
          throw ExternalSolverError("malformed value line: " + line);
        if (l == 0) continue;
        if (std::llabs(l) > n_vars) continue;
        model[static_cast<std::size_t>(std::llabs(l))] = l > 0;
      }
    }
  }
  if (!have_status) throw ExternalSolverError("solver output has no 's' status line");
  if (r.status == SatStatus::Sat) r.model = std::move(model);
  return r;
}

SolveResult run_external_sat(const ClauseDb& db, std::span<const Clause> extra,
                             const std::string& cmd, std::chrono::milliseconds timeout) {
  std::string dimacs;
  if (extra.empty()) {
    dimacs = emit_dimacs(db, false);
  } else {
    ClauseDb copy = db;
    for (const auto& c : extra) copy.add(c);
    dimacs = emit_dimacs(copy, false);
  }
  ProcessResult pr = run_template(cmd, dimacs, ".cnf", timeout);
  if (pr.timed_out) return {SatStatus::Unknown, {}};
  try {
    return parse_sat_output(pr.out, db.n_vars());
  } catch (const ExternalSolverError& e) {
    std::string msg = std::string(e.what()) + " (exit code " + std::to_string(pr.exit_code) + ")";
    if (!pr.err.empty()) msg += ": " + pr.err.substr(0, 500);
    throw ExternalSolverError(msg);
  }
}

}  // namespace twist
