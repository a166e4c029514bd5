// Copyright 2026 The twist Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <chrono>
#include <stdexcept>
#include <string>

namespace twist {

struct ProcessResult {
  int exit_code = -1;  // -1 when killed or terminated by a signal
  bool timed_out = false;
  std::string out;
  std::string err;
};

class SpawnError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Runs `command` through /bin/sh, feeding `input` on stdin. The child is
/// killed once `timeout` elapses.
ProcessResult run_shell(const std::string& command, const std::string& input,
                        std::chrono::milliseconds timeout);

/// Single-quotes `s` for /bin/sh.
std::string shell_quote(const std::string& s);

/// Scratch file removed on destruction.
class TempFile {
 public:
  TempFile(const std::string& suffix, const std::string& contents);
  ~TempFile();
  TempFile(const TempFile&) = delete;
  TempFile& operator=(const TempFile&) = delete;

  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

/// Substitutes `{file}` in `tmpl` with a temporary file holding `input`;
/// without the placeholder, `input` goes to stdin instead.
ProcessResult run_template(const std::string& tmpl, const std::string& input,
                           const std::string& suffix, std::chrono::milliseconds timeout);

}  // namespace twist
