// Copyright 2026 The twist Authors
// SPDX-License-Identifier: Apache-2.0

#include "twist/modelview.hpp"

#include <algorithm>
#include <cctype>
#include <regex>

namespace twist {

namespace {

bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

}  // namespace

bool natural_less(const std::string& a, const std::string& b) {
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() && j < b.size()) {
    if (is_digit(a[i]) && is_digit(b[j])) {
      std::size_t ie = i;
      std::size_t je = j;
      while (ie < a.size() && is_digit(a[ie])) ++ie;
      while (je < b.size() && is_digit(b[je])) ++je;
      // Compare the runs as numbers: strip leading zeros, then length, then digits.
      std::size_t is = i;
      std::size_t js = j;
      while (is + 1 < ie && a[is] == '0') ++is;
      while (js + 1 < je && b[js] == '0') ++js;
      if (ie - is != je - js) return ie - is < je - js;
      const int c = a.compare(is, ie - is, b, js, je - js);
      if (c != 0) return c < 0;
      if (ie - i != je - j) return ie - i < je - j;
      i = ie;
      j = je;
    } else {
      if (a[i] != b[j]) return static_cast<unsigned char>(a[i]) < static_cast<unsigned char>(b[j]);
      ++i;
      ++j;
    }
  }
  return a.size() - i < b.size() - j;
}

ModelView make_view(std::vector<std::pair<std::string, bool>> rows) {
  ModelView v;
  for (auto& [atom, value] : rows)
    if (!atom.empty() && atom[0] != '_') v.rows.push_back({std::move(atom), value});
  std::stable_sort(v.rows.begin(), v.rows.end(),
                   [](const ModelRow& x, const ModelRow& y) { return natural_less(x.atom, y.atom); });
  return v;
}

ModelView decode(const std::vector<bool>& model, const VarMap& vm) {
  std::vector<std::pair<std::string, bool>> rows;
  rows.reserve(static_cast<std::size_t>(vm.n_user()));
  for (int v = 1; v <= vm.n_user(); ++v) {
    const auto idx = static_cast<std::size_t>(v);
    rows.emplace_back(vm.name(v), idx < model.size() && model[idx]);
  }
  return make_view(std::move(rows));
}

ModelView apply_filter(const ModelView& v, const std::string& pattern, Polarity polarity) {
  std::regex re;
  if (!pattern.empty()) {
    try {
      re = std::regex(pattern, std::regex::ECMAScript);
    } catch (const std::regex_error& e) {
      throw FilterError("invalid regular expression '" + pattern + "': " + e.what());
    }
  }
  ModelView out;
  for (const auto& row : v.rows) {
    if (polarity == Polarity::TrueOnly && !row.value) continue;
    if (polarity == Polarity::FalseOnly && row.value) continue;
    if (!pattern.empty() && !std::regex_search(row.atom, re)) continue;
    out.rows.push_back(row);
  }
  return out;
}

Polarity parse_polarity(const std::string& s) {
  if (s.empty() || s == "all") return Polarity::All;
  if (s == "true" || s == "true-only") return Polarity::TrueOnly;
  if (s == "false" || s == "false-only") return Polarity::FalseOnly;
  throw FilterError("unknown polarity '" + s + "' (expected all, true or false)");
}

}  // namespace twist
