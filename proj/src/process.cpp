// Copyright 2026 The twist Authors
// SPDX-License-Identifier: Apache-2.0

#include "twist/process.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <vector>

namespace twist {

namespace {

void close_fd(int& fd) {
  if (fd >= 0) ::close(fd);
  fd = -1;
}

struct Pipe {
  int fd[2] = {-1, -1};
  Pipe() {
    if (::pipe2(fd, O_CLOEXEC) != 0) throw SpawnError(std::string("pipe: ") + std::strerror(errno));
  }
  ~Pipe() {
    close_fd(fd[0]);
    close_fd(fd[1]);
  }
};

}  // namespace

std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') out += "'\\''";
    else out.push_back(c);
  }
  return out + "'";
}

ProcessResult run_shell(const std::string& command, const std::string& input,
                        std::chrono::milliseconds timeout) {
  // A child that exits without reading its input must not kill us.
  static const bool sigpipe_ignored = [] {
    ::signal(SIGPIPE, SIG_IGN);
    return true;
  }();
  (void)sigpipe_ignored;
  Pipe in, out, err;
  const pid_t pid = ::fork();
  if (pid < 0) throw SpawnError(std::string("fork: ") + std::strerror(errno));
  if (pid == 0) {
    ::dup2(in.fd[0], 0);
    ::dup2(out.fd[1], 1);
    ::dup2(err.fd[1], 2);
    ::execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
    ::_exit(127);
  }
  close_fd(in.fd[0]);
  close_fd(out.fd[1]);
  close_fd(err.fd[1]);
  ::fcntl(in.fd[1], F_SETFL, O_NONBLOCK);

  ProcessResult result;
  std::size_t written = 0;
  if (input.empty()) close_fd(in.fd[1]);
  const auto deadline = std::chrono::steady_clock::now() + timeout;
  char buf[65536];
  while (out.fd[0] >= 0 || err.fd[0] >= 0) {
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
        deadline - std::chrono::steady_clock::now());
    if (left.count() <= 0) {
      result.timed_out = true;
      break;
    }
    std::vector<pollfd> fds;
    if (in.fd[1] >= 0) fds.push_back({in.fd[1], POLLOUT, 0});
    if (out.fd[0] >= 0) fds.push_back({out.fd[0], POLLIN, 0});
    if (err.fd[0] >= 0) fds.push_back({err.fd[0], POLLIN, 0});
    const int rc = ::poll(fds.data(), fds.size(), static_cast<int>(left.count()));
    if (rc < 0) {
      if (errno == EINTR) continue;
      break;
    }
    for (const auto& p : fds) {
      if (p.revents == 0) continue;
      if (p.fd == in.fd[1]) {
        const ssize_t n = ::write(p.fd, input.data() + written, input.size() - written);
        if (n > 0) written += static_cast<std::size_t>(n);
        if (n < 0 && errno != EAGAIN) close_fd(in.fd[1]);
        if (written == input.size()) close_fd(in.fd[1]);
      } else {
        const ssize_t n = ::read(p.fd, buf, sizeof buf);
        if (n > 0) {
          (p.fd == out.fd[0] ? result.out : result.err).append(buf, static_cast<std::size_t>(n));
        } else if (n == 0 || errno != EAGAIN) {
          close_fd(p.fd == out.fd[0] ? out.fd[0] : err.fd[0]);
        }
      }
    }
  }
  if (result.timed_out) ::kill(pid, SIGKILL);
  close_fd(in.fd[1]);
  int status = 0;
  while (::waitpid(pid, &status, 0) < 0 && errno == EINTR) {
  }
  if (!result.timed_out && WIFEXITED(status)) result.exit_code = WEXITSTATUS(status);
  return result;
}

TempFile::TempFile(const std::string& suffix, const std::string& contents) {
  std::string pattern = (std::filesystem::temp_directory_path() / "twist-XXXXXX").string() + suffix;
  std::vector<char> name(pattern.begin(), pattern.end());
  name.push_back('\0');
  const int fd = ::mkstemps(name.data(), static_cast<int>(suffix.size()));
  if (fd < 0) throw SpawnError(std::string("temporary file: ") + std::strerror(errno));
  path_ = name.data();
  std::size_t done = 0;
  while (done < contents.size()) {
    const ssize_t n = ::write(fd, contents.data() + done, contents.size() - done);
    if (n <= 0) {
      ::close(fd);
      std::filesystem::remove(path_);
      throw SpawnError("cannot write temporary file");
    }
    done += static_cast<std::size_t>(n);
  }
  ::close(fd);
}

TempFile::~TempFile() {
  std::error_code ec;
  std::filesystem::remove(path_, ec);
}

ProcessResult run_template(const std::string& tmpl, const std::string& input,
                           const std::string& suffix, std::chrono::milliseconds timeout) {
  const auto at = tmpl.find("{file}");
  if (at == std::string::npos) return run_shell(tmpl, input, timeout);
  TempFile file(suffix, input);
  std::string command = tmpl;
  for (auto p = command.find("{file}"); p != std::string::npos; p = command.find("{file}", p)) {
    const std::string quoted = shell_quote(file.path());
    command.replace(p, 6, quoted);
    p += quoted.size();
  }
  return run_shell(command, "", timeout);
}

}  // namespace twist
