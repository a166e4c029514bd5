// Copyright 2026 The twist Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "twist/ast.hpp"

namespace twist {

enum class Severity { Error, Warning };

struct Diagnostic {
  Severity severity = Severity::Error;
  std::string message;
  Span span;
  std::optional<std::string> note;
};

bool has_errors(const std::vector<Diagnostic>& diags);

/// A compile-time failure tied to a source span (grounding, classification,
/// encoding). `context` lists binder values in effect, e.g. "$i=3, $j=7".
class CompileError : public std::runtime_error {
 public:
  CompileError(std::string message, Span span, std::string context = {})
      : std::runtime_error(message), span_(span), context_(std::move(context)) {}

  Span span() const { return span_; }
  const std::string& context() const { return context_; }
  Diagnostic diagnostic() const;

 private:
  Span span_;
  std::string context_;
};

/// A broken internal invariant (e.g. a solver model that fails verification).
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// 1-based line and column (in bytes) of a byte offset.
struct Location {
  std::size_t line = 1;
  std::size_t column = 1;
};
Location locate(std::string_view source, std::size_t offset);

/// `file:line:col: error: message`, the offending line, and a caret marker.
std::string format_diagnostic(const Diagnostic& d, std::string_view source,
                              std::string_view filename);

/// Replaces every "\r\n" by "\n"; spans are computed on the result.
std::string normalize_newlines(std::string_view src);

}  // namespace twist
