// Copyright 2026 The twist Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "twist/ast.hpp"

namespace twist {

/// DIMACS literal: +v or -v for variable v >= 1.
using Lit = int;
using Clause = std::vector<Lit>;

enum class CardEncoding {
  Auto,               // binomial when it needs at most kBinomialLimit clauses
  Binomial,           // one clause per (k+1)-subset, no auxiliary variables
  SequentialCounter,  // Sinz counter registers, O(n*k) clauses
};

inline constexpr std::uint64_t kBinomialLimit = 500;

/// Source of fresh auxiliary variables.
class VarAllocator {
 public:
  virtual ~VarAllocator() = default;
  /// Registers a new variable under `name` and returns its number.
  virtual Lit fresh(const std::string& name) = 0;
  /// Next serial number for a family of generated names ('S' counters, 'T'
  /// definitions), starting at 1.
  virtual int next_serial(char family) = 0;
};

/// C(n, r), saturating at UINT64_MAX.
std::uint64_t binomial(std::uint64_t n, std::uint64_t r);

/// At most k of `lits` are true. Requires 0 < k < n.
std::vector<Clause> encode_atmost(std::span<const Lit> lits, std::int64_t k, CardEncoding enc,
                                  VarAllocator& alloc);

/// At least k of `lits` are true. Requires 0 < k <= n.
std::vector<Clause> encode_atleast(std::span<const Lit> lits, std::int64_t k, CardEncoding enc,
                                   VarAllocator& alloc);

/// Exactly k of `lits` are true. Requires 0 <= k <= n.
std::vector<Clause> encode_exact(std::span<const Lit> lits, std::int64_t k, CardEncoding enc,
                                 VarAllocator& alloc);

struct CardClauses {
  bool infeasible = false;  // the constraint can never hold
  std::vector<Clause> clauses;
};

/// Any bound, degenerate ones included: trivially true constraints yield
/// no clauses, impossible ones set `infeasible`.
CardClauses encode_cardinality(CardKind kind, std::span<const Lit> lits, std::int64_t k,
                               CardEncoding enc, VarAllocator& alloc);

/// Encoding `Auto` resolves to for an at-most-k over n literals.
CardEncoding resolve_encoding(CardEncoding enc, std::size_t n, std::int64_t k);

}  // namespace twist
