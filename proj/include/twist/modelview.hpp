// Copyright 2026 The twist Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "twist/cnf.hpp"

namespace twist {

enum class Polarity { All, TrueOnly, FalseOnly };

struct ModelRow {
  std::string atom;
  bool value = false;

  friend bool operator==(const ModelRow&, const ModelRow&) = default;
};

/// Rows in natural order: digit runs compare numerically, so P(2,1) comes
/// before P(10,1). Generated `_` atoms never appear.
struct ModelView {
  std::vector<ModelRow> rows;

  friend bool operator==(const ModelView&, const ModelView&) = default;
};

class FilterError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Natural-order "less than" on atom texts.
bool natural_less(const std::string& a, const std::string& b);

/// One row per user atom of `vm`; `model[v]` is the value of variable v.
ModelView decode(const std::vector<bool>& model, const VarMap& vm);

/// Builds a view from (atom, value) pairs, hiding `_` atoms and sorting.
ModelView make_view(std::vector<std::pair<std::string, bool>> rows);

/// Rows whose atom text contains a match of `pattern` (ECMAScript regular
/// expression, unanchored) and whose value agrees with `polarity`. An empty
/// pattern matches everything. Throws FilterError for an invalid pattern.
ModelView apply_filter(const ModelView& v, const std::string& pattern, Polarity polarity);

/// "all", "true", "false" (also "true-only", "false-only").
Polarity parse_polarity(const std::string& s);

}  // namespace twist
