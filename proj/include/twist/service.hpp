// Copyright 2026 The twist Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <chrono>
#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>

#include "twist/sat.hpp"

namespace httplib {
class Server;
}

namespace twist {

struct ServiceConfig {
  std::size_t max_sessions = 64;
  std::chrono::seconds idle_timeout{30 * 60};
  std::size_t max_body = 1 << 20;
  std::string smt_cmd;          // resolved with resolve_smt_command()
  std::string ui_dir;           // served under /ui/ when set
  SolverOptions solver;         // seed is overridden per request when given
};

struct HttpReply {
  int status = 200;
  std::string body;  // JSON text
};

/// JSON facade over the compiler and the enumeration sessions. The handler
/// methods are what the HTTP routes call; they are thread safe.
class Service {
 public:
  using Clock = std::chrono::steady_clock;

  explicit Service(ServiceConfig cfg = {});
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  HttpReply compile(const std::string& body);
  HttpReply solve(const std::string& body);
  HttpReply next(const std::string& id);
  HttpReply model(const std::string& id, const std::string& filter, const std::string& polarity);
  HttpReply health() const;

  /// Registers all routes (and the /ui/ mount) on `server`.
  void install(httplib::Server& server);

  std::size_t session_count();
  /// Replaces the clock used for idle expiry (tests).
  void set_clock(std::function<Clock::time_point()> now);

 private:
  struct Record;

  void sweep(Clock::time_point now);
  std::shared_ptr<Record> find(const std::string& id);
  std::string new_id();

  ServiceConfig cfg_;
  std::function<Clock::time_point()> now_;
  std::mutex mu_;
  std::map<std::string, std::shared_ptr<Record>> sessions_;
};

}  // namespace twist
