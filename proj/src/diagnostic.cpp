// Copyright 2026 The twist Authors
// SPDX-License-Identifier: Apache-2.0

#include "twist/diagnostic.hpp"

#include <algorithm>
#include <sstream>

namespace twist {

bool has_errors(const std::vector<Diagnostic>& diags) {
  return std::any_of(diags.begin(), diags.end(),
                     [](const Diagnostic& d) { return d.severity == Severity::Error; });
}

Diagnostic CompileError::diagnostic() const {
  Diagnostic d{Severity::Error, what(), span_, std::nullopt};
  if (!context_.empty()) d.note = "while grounding with " + context_;
  return d;
}

Location locate(std::string_view source, std::size_t offset) {
  offset = std::min(offset, source.size());
  Location loc;
  for (std::size_t i = 0; i < offset; ++i) {
    if (source[i] == '\n') {
      ++loc.line;
      loc.column = 1;
    } else {
      ++loc.column;
    }
  }
  return loc;
}

std::string format_diagnostic(const Diagnostic& d, std::string_view source,
                              std::string_view filename) {
  Location loc = locate(source, d.span.begin);
  std::ostringstream os;
  os << filename << ':' << loc.line << ':' << loc.column << ": "
     << (d.severity == Severity::Error ? "error" : "warning") << ": " << d.message << '\n';

  std::size_t begin = std::min(d.span.begin, source.size());
  std::size_t nl = source.substr(0, begin).rfind('\n');
  std::size_t line_start = nl == std::string_view::npos ? 0 : nl + 1;
  std::size_t line_end = source.find('\n', line_start);
  if (line_end == std::string_view::npos) line_end = source.size();
  std::string_view line = source.substr(line_start, line_end - line_start);
  os << "  " << line << '\n' << "  " << std::string(begin - line_start, ' ');
  std::size_t width = std::max<std::size_t>(
      1, std::min(d.span.end, line_end) > begin ? std::min(d.span.end, line_end) - begin : 1);
  os << std::string(width, '^') << '\n';
  if (d.note) os << "  note: " << *d.note << '\n';
  return os.str();
}

std::string normalize_newlines(std::string_view src) {
  std::string out;
  out.reserve(src.size());
  for (std::size_t i = 0; i < src.size(); ++i) {
    if (src[i] == '\r' && i + 1 < src.size() && src[i + 1] == '\n') continue;
    out.push_back(src[i]);
  }
  return out;
}

}  // namespace twist
