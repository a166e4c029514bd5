// Copyright 2026 The twist Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace twist {

/// Raised when two scalars of incompatible kinds are ordered or combined.
class TypeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A set element or index value: an integer, a rational (IEEE double), or a
/// symbol.
class Scalar {
 public:
  enum class Kind { Int, Rat, Sym };

  Scalar() : value_(std::int64_t{0}) {}
  static Scalar integer(std::int64_t v) { return Scalar(v); }
  static Scalar rational(double v) { return Scalar(v); }
  static Scalar symbol(std::string s) { return Scalar(std::move(s)); }

  Kind kind() const { return static_cast<Kind>(value_.index()); }
  bool is_int() const { return kind() == Kind::Int; }
  bool is_rat() const { return kind() == Kind::Rat; }
  bool is_sym() const { return kind() == Kind::Sym; }
  bool is_numeric() const { return !is_sym(); }

  std::int64_t as_int() const { return std::get<std::int64_t>(value_); }
  double as_rat() const { return std::get<double>(value_); }
  const std::string& as_sym() const { return std::get<std::string>(value_); }
  /// Numeric value as a double; throws TypeError for symbols.
  double to_double() const;

  /// Identity used for set membership and duplicate removal. Int and Rat
  /// compare numerically; a symbol never equals a number.
  friend bool operator==(const Scalar& a, const Scalar& b);

  /// Text used in atom names, DIMACS comments and source rendering. Rationals
  /// always carry a '.' or exponent so they read back as rationals.
  std::string to_string() const;

 private:
  explicit Scalar(std::int64_t v) : value_(v) {}
  explicit Scalar(double v) : value_(v) {}
  explicit Scalar(std::string s) : value_(std::move(s)) {}

  std::variant<std::int64_t, double, std::string> value_;
};

/// Ordering within a kind (numbers numerically, symbols lexicographically).
/// Mixing a number and a symbol throws TypeError.
std::partial_ordering compare(const Scalar& a, const Scalar& b);

/// Equality as used by `==` / `!=` in conditions: like operator== but a
/// number/symbol mix is a TypeError.
bool checked_equal(const Scalar& a, const Scalar& b);

/// True when `s` is a valid user symbol: [A-Za-z][A-Za-z0-9_]*.
bool is_identifier(std::string_view s);

/// A finite, ordered, duplicate-free collection of scalars.
class SetValue {
 public:
  SetValue() = default;

  /// Appends `s` unless an equal element is already present.
  void insert(Scalar s);
  bool contains(const Scalar& s) const;

  std::size_t size() const { return elements_.size(); }
  bool empty() const { return elements_.empty(); }
  const std::vector<Scalar>& elements() const { return elements_; }
  auto begin() const { return elements_.begin(); }
  auto end() const { return elements_.end(); }

  /// Integers lo..hi ascending; empty when lo > hi.
  static SetValue range(std::int64_t lo, std::int64_t hi);

  friend SetValue set_union(const SetValue& a, const SetValue& b);
  friend SetValue set_intersection(const SetValue& a, const SetValue& b);
  friend SetValue set_difference(const SetValue& a, const SetValue& b);

  friend bool operator==(const SetValue&, const SetValue&) = default;

 private:
  std::vector<Scalar> elements_;
};

SetValue set_union(const SetValue& a, const SetValue& b);
SetValue set_intersection(const SetValue& a, const SetValue& b);
SetValue set_difference(const SetValue& a, const SetValue& b);

}  // namespace twist
