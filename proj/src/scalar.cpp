// Copyright 2026 The twist Authors
// SPDX-License-Identifier: Apache-2.0

#include "twist/scalar.hpp"

#include <charconv>
#include <cmath>

namespace twist {

double Scalar::to_double() const {
  switch (kind()) {
    case Kind::Int: return static_cast<double>(as_int());
    case Kind::Rat: return as_rat();
    case Kind::Sym: break;
  }
  throw TypeError("symbol '" + as_sym() + "' used as a number");
}

bool operator==(const Scalar& a, const Scalar& b) {
  if (a.is_sym() || b.is_sym())
    return a.is_sym() && b.is_sym() && a.as_sym() == b.as_sym();
  if (a.is_int() && b.is_int()) return a.as_int() == b.as_int();
  return a.to_double() == b.to_double();
}

std::string Scalar::to_string() const {
  switch (kind()) {
    case Kind::Int: return std::to_string(as_int());
    case Kind::Sym: return as_sym();
    case Kind::Rat: break;
  }
  double v = as_rat();
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v < 0 ? "-inf" : "inf";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  std::string s(buf, end);
  if (s.find_first_of(".e") == std::string::npos) s += ".0";
  return s;
}

std::partial_ordering compare(const Scalar& a, const Scalar& b) {
  if (a.is_sym() != b.is_sym())
    throw TypeError("cannot compare number with symbol ('" + a.to_string() +
                    "' vs '" + b.to_string() + "')");
  if (a.is_sym()) return a.as_sym() <=> b.as_sym();
  if (a.is_int() && b.is_int()) return a.as_int() <=> b.as_int();
  return a.to_double() <=> b.to_double();
}

bool checked_equal(const Scalar& a, const Scalar& b) {
  if (a.is_sym() != b.is_sym())
    throw TypeError("cannot compare number with symbol ('" + a.to_string() +
                    "' vs '" + b.to_string() + "')");
  return a == b;
}

bool is_identifier(std::string_view s) {
  if (s.empty()) return false;
  auto alpha = [](char c) { return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z'); };
  auto digit = [](char c) { return c >= '0' && c <= '9'; };
  if (!alpha(s.front())) return false;
  for (char c : s)
    if (!alpha(c) && !digit(c) && c != '_') return false;
  return true;
}

void SetValue::insert(Scalar s) {
  if (!contains(s)) elements_.push_back(std::move(s));
}

bool SetValue::contains(const Scalar& s) const {
  for (const auto& e : elements_)
    if (e == s) return true;
  return false;
}

SetValue SetValue::range(std::int64_t lo, std::int64_t hi) {
  SetValue out;
  if (lo > hi) return out;
  out.elements_.reserve(static_cast<std::size_t>(hi - lo + 1));
  for (std::int64_t i = lo; i <= hi; ++i) out.elements_.push_back(Scalar::integer(i));
  return out;
}

SetValue set_union(const SetValue& a, const SetValue& b) {
  SetValue out = a;
  for (const auto& e : b) out.insert(e);
  return out;
}

SetValue set_intersection(const SetValue& a, const SetValue& b) {
  SetValue out;
  for (const auto& e : a)
    if (b.contains(e)) out.elements_.push_back(e);
  return out;
}

SetValue set_difference(const SetValue& a, const SetValue& b) {
  SetValue out;
  for (const auto& e : a)
    if (!b.contains(e)) out.elements_.push_back(e);
  return out;
}

}  // namespace twist
