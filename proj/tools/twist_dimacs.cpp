// Copyright 2026 The twist Authors
// SPDX-License-Identifier: Apache-2.0

// Solves a DIMACS file with the built-in solver and answers in the
// SAT-competition format: exit 10 (satisfiable), 20 (unsatisfiable), 0.

#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include "twist/cnf.hpp"
#include "twist/sat.hpp"

int main(int argc, char** argv) {
  std::string text;
  if (argc > 1 && std::string(argv[1]) != "-") {
    std::ifstream in(argv[1], std::ios::binary);
    if (!in) {
      std::cerr << "c cannot open " << argv[1] << "\n";
      return 1;
    }
    text.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  } else {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    text = ss.str();
  }

  twist::ClauseDb db;
  try {
    db = twist::parse_dimacs(text);
  } catch (const twist::DimacsError& e) {
    std::cerr << "c " << e.what() << "\n";
    return 1;
  }
  const twist::SolveResult r = twist::solve(db);
  if (r.status == twist::SatStatus::Unsat) {
    std::cout << "s UNSATISFIABLE\n";
    return 20;
  }
  if (r.status == twist::SatStatus::Unknown) {
    std::cout << "s UNKNOWN\n";
    return 0;
  }
  std::cout << "s SATISFIABLE\n";
  std::string line = "v";
  for (int v = 1; v <= db.n_vars(); ++v) {
    const std::string lit = " " + std::to_string(r.model[v] ? v : -v);
    if (line.size() + lit.size() > 78) {
      std::cout << line << "\n";
      line = "v";
    }
    line += lit;
  }
  std::cout << line << " 0\n";
  return 10;
}
