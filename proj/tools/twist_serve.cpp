// Copyright 2026 The twist Authors
// SPDX-License-Identifier: Apache-2.0

#include <httplib.h>

#include <CLI11.hpp>
#include <iostream>

#include "twist/service.hpp"

int main(int argc, char** argv) {
  CLI::App app{"twist_serve: HTTP/JSON service for compiling and solving"};
  std::string bind = "127.0.0.1";
  int port = 8080;
  twist::ServiceConfig cfg;
  app.add_option("--bind", bind, "Address to listen on");
  app.add_option("--port", port, "Port to listen on")->check(CLI::Range(1, 65535));
  app.add_option("--ui-dir", cfg.ui_dir, "Directory served under /ui/")->check(CLI::ExistingDirectory);
  app.add_option("--smt-cmd", cfg.smt_cmd, "SMT solver command template");
  CLI11_PARSE(app, argc, argv);

  twist::Service service(cfg);
  httplib::Server server;
  service.install(server);
  std::cerr << "listening on http://" << bind << ":" << port << "\n";
  if (!server.listen(bind, port)) {
    std::cerr << "error: cannot listen on " << bind << ":" << port << "\n";
    return 2;
  }
  return 0;
}
