// Copyright 2026 The twist Authors
// SPDX-License-Identifier: Apache-2.0

#include "twist/cardinality.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace twist {

std::uint64_t binomial(std::uint64_t n, std::uint64_t r) {
  if (r > n) return 0;
  r = std::min(r, n - r);
  unsigned __int128 acc = 1;
  for (std::uint64_t i = 1; i <= r; ++i) {
    acc = acc * (n - r + i) / i;
    if (acc > std::numeric_limits<std::uint64_t>::max())
      return std::numeric_limits<std::uint64_t>::max();
  }
  return static_cast<std::uint64_t>(acc);
}

CardEncoding resolve_encoding(CardEncoding enc, std::size_t n, std::int64_t k) {
  if (enc != CardEncoding::Auto) return enc;
  if (k < 0) return CardEncoding::Binomial;
  return binomial(n, static_cast<std::uint64_t>(k) + 1) <= kBinomialLimit
             ? CardEncoding::Binomial
             : CardEncoding::SequentialCounter;
}

namespace {

std::vector<Clause> binomial_atmost(std::span<const Lit> lits, std::size_t k) {
  // Every (k+1)-subset, in lexicographic order of positions.
  std::vector<Clause> out;
  const std::size_t n = lits.size();
  const std::size_t r = k + 1;
  std::vector<std::size_t> pick(r);
  for (std::size_t i = 0; i < r; ++i) pick[i] = i;
  for (;;) {
    Clause c;
    c.reserve(r);
    for (std::size_t p : pick) c.push_back(-lits[p]);
    out.push_back(std::move(c));
    std::size_t i = r;
    while (i > 0 && pick[i - 1] == n - r + (i - 1)) --i;
    if (i == 0) break;
    ++pick[i - 1];
    for (std::size_t j = i; j < r; ++j) pick[j] = pick[j - 1] + 1;
  }
  return out;
}

std::vector<Clause> counter_atmost(std::span<const Lit> x, std::size_t k, VarAllocator& alloc) {
  // Register row i (1-based, i < n) holds s(i, j): at least j of x1..xi are true.
  const std::size_t n = x.size();
  std::vector<std::vector<Lit>> s(n);
  for (std::size_t i = 1; i < n; ++i) {
    const int row = alloc.next_serial('S');
    s[i].resize(k + 1);
    for (std::size_t j = 1; j <= k; ++j)
      s[i][j] = alloc.fresh("_S" + std::to_string(row) + "_" + std::to_string(j));
  }

  std::vector<Clause> out;
  out.push_back({-x[0], s[1][1]});
  for (std::size_t j = 2; j <= k; ++j) out.push_back({-s[1][j]});
  for (std::size_t i = 2; i < n; ++i) {
    const Lit xi = x[i - 1];
    out.push_back({-xi, s[i][1]});
    out.push_back({-s[i - 1][1], s[i][1]});
    for (std::size_t j = 2; j <= k; ++j) {
      out.push_back({-xi, -s[i - 1][j - 1], s[i][j]});
      out.push_back({-s[i - 1][j], s[i][j]});
    }
    out.push_back({-xi, -s[i - 1][k]});
  }
  out.push_back({-x[n - 1], -s[n - 1][k]});
  return out;
}

std::vector<Lit> negated(std::span<const Lit> lits) {
  std::vector<Lit> out;
  out.reserve(lits.size());
  for (Lit l : lits) out.push_back(-l);
  return out;
}

std::vector<Clause> units(std::span<const Lit> lits) {
  std::vector<Clause> out;
  for (Lit l : lits) out.push_back({l});
  return out;
}

}  // namespace

std::vector<Clause> encode_atmost(std::span<const Lit> lits, std::int64_t k, CardEncoding enc,
                                  VarAllocator& alloc) {
  const auto n = static_cast<std::int64_t>(lits.size());
  if (k <= 0 || k >= n) throw std::invalid_argument("encode_atmost requires 0 < k < n");
  if (resolve_encoding(enc, lits.size(), k) == CardEncoding::Binomial)
    return binomial_atmost(lits, static_cast<std::size_t>(k));
  return counter_atmost(lits, static_cast<std::size_t>(k), alloc);
}

std::vector<Clause> encode_atleast(std::span<const Lit> lits, std::int64_t k, CardEncoding enc,
                                   VarAllocator& alloc) {
  const auto n = static_cast<std::int64_t>(lits.size());
  if (k <= 0 || k > n) throw std::invalid_argument("encode_atleast requires 0 < k <= n");
  if (k == 1) return {Clause(lits.begin(), lits.end())};
  if (k == n) return units(lits);
  std::vector<Lit> neg = negated(lits);
  return encode_atmost(neg, n - k, enc, alloc);
}

std::vector<Clause> encode_exact(std::span<const Lit> lits, std::int64_t k, CardEncoding enc,
                                 VarAllocator& alloc) {
  const auto n = static_cast<std::int64_t>(lits.size());
  if (k < 0 || k > n) throw std::invalid_argument("encode_exact requires 0 <= k <= n");
  std::vector<Clause> out;
  if (k > 0) out = encode_atleast(lits, k, enc, alloc);
  if (k == 0) {
    std::vector<Lit> neg = negated(lits);
    for (auto& c : units(neg)) out.push_back(std::move(c));
  } else if (k < n) {
    for (auto& c : encode_atmost(lits, k, enc, alloc)) out.push_back(std::move(c));
  }
  return out;
}

CardClauses encode_cardinality(CardKind kind, std::span<const Lit> lits, std::int64_t k,
                               CardEncoding enc, VarAllocator& alloc) {
  const auto n = static_cast<std::int64_t>(lits.size());
  CardClauses out;
  switch (kind) {
    case CardKind::AtMost:
      if (k < 0) out.infeasible = true;
      else if (k == 0) out.clauses = units(negated(lits));
      else if (k < n) out.clauses = encode_atmost(lits, k, enc, alloc);
      break;
    case CardKind::AtLeast:
      if (k > n) out.infeasible = true;
      else if (k > 0) out.clauses = encode_atleast(lits, k, enc, alloc);
      break;
    case CardKind::Exact:
      if (k < 0 || k > n) out.infeasible = true;
      else out.clauses = encode_exact(lits, k, enc, alloc);
      break;
  }
  return out;
}

}  // namespace twist
