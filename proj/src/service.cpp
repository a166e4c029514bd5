// Copyright 2026 The twist Authors
// SPDX-License-Identifier: Apache-2.0

#include "twist/service.hpp"

#include <httplib.h>

#include <json.hpp>
#include <optional>
#include <random>

#include "twist/compile.hpp"
#include "twist/external_sat.hpp"
#include "twist/modelview.hpp"
#include "twist/render.hpp"
#include "twist/smt.hpp"

namespace twist {

using json = nlohmann::json;

struct Service::Record {
  std::mutex mu;
  Clock::time_point last_used;
  std::unique_ptr<Session> sat;
  std::unique_ptr<SmtSession> smt;
  ModelView view;
  std::vector<std::pair<std::string, Rational>> values;
};

namespace {

HttpReply reply(int status, const json& body) { return {status, body.dump()}; }

HttpReply error(int status, const std::string& message) {
  return reply(status, json{{"error", message}});
}

json diagnostic_json(const Diagnostic& d, const std::string& source) {
  const Location loc = locate(source, d.span.begin);
  json j{{"severity", d.severity == Severity::Error ? "error" : "warning"},
         {"message", d.message},
         {"begin", d.span.begin},
         {"end", d.span.end},
         {"line", loc.line},
         {"column", loc.column}};
  if (d.note) j["note"] = *d.note;
  return j;
}

json diagnostics_json(const Compiled& c) {
  json out = json::array();
  for (const auto& d : c.diagnostics) out.push_back(diagnostic_json(d, c.source));
  return out;
}

json rows_json(const ModelView& v) {
  json out = json::array();
  for (const auto& r : v.rows) out.push_back({{"atom", r.atom}, {"value", r.value}});
  return out;
}

json values_json(const std::vector<std::pair<std::string, Rational>>& values) {
  json out = json::array();
  for (const auto& [name, v] : values) out.push_back({{"name", name}, {"value", v.to_string()}});
  return out;
}

// Parses a request body that must be a JSON object with a string `source`.
std::optional<json> request_object(const std::string& body, std::size_t max, HttpReply& fail) {
  if (body.size() > max) {
    fail = error(413, "request body exceeds " + std::to_string(max) + " bytes");
    return std::nullopt;
  }
  if (body.empty()) {
    fail = error(400, "empty request body");
    return std::nullopt;
  }
  json j = json::parse(body, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    fail = error(400, "request body is not a JSON object");
    return std::nullopt;
  }
  if (!j.contains("source") || !j["source"].is_string()) {
    fail = error(400, "missing string field 'source'");
    return std::nullopt;
  }
  return j;
}

}  // namespace

Service::Service(ServiceConfig cfg) : cfg_(std::move(cfg)), now_([] { return Clock::now(); }) {}

Service::~Service() = default;

void Service::set_clock(std::function<Clock::time_point()> now) {
  std::lock_guard lock(mu_);
  now_ = std::move(now);
}

std::size_t Service::session_count() {
  std::lock_guard lock(mu_);
  sweep(now_());
  return sessions_.size();
}

void Service::sweep(Clock::time_point now) {
  for (auto it = sessions_.begin(); it != sessions_.end();) {
    if (now - it->second->last_used > cfg_.idle_timeout) it = sessions_.erase(it);
    else ++it;
  }
}

std::shared_ptr<Service::Record> Service::find(const std::string& id) {
  std::lock_guard lock(mu_);
  const auto now = now_();
  sweep(now);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) return nullptr;
  it->second->last_used = now;
  return it->second;
}

std::string Service::new_id() {
  static thread_local std::random_device rd;
  std::string id;
  static const char* kHex = "0123456789abcdef";
  for (int i = 0; i < 4; ++i) {
    std::uint32_t word = rd();
    for (int k = 0; k < 8; ++k) {
      id.push_back(kHex[word & 0xf]);
      word >>= 4;
    }
  }
  return id;
}

HttpReply Service::health() const { return reply(200, json{{"status", "ok"}}); }

HttpReply Service::compile(const std::string& body) {
  HttpReply fail;
  auto req = request_object(body, cfg_.max_body, fail);
  if (!req) return fail;
  const Compiled c = twist::compile((*req)["source"].get<std::string>());
  json out{{"ok", c.ok()}, {"diagnostics", diagnostics_json(c)}};
  out["latex"] = c.program ? render_latex(*c.program) : "";
  if (c.ok()) {
    const auto n_atoms = collect_atoms(*c.ground).size();
    json stats{{"n_atoms", n_atoms}};
    if (c.cnf) {
      stats["n_clauses"] = c.cnf->clauses.size();
      stats["n_vars"] = c.cnf->n_vars();
    } else {
      stats["n_clauses"] = 0;
      stats["n_vars"] = n_atoms + collect_theory_vars(*c.ground).size();
    }
    out["stats"] = stats;
    out["logic"] = std::string(to_string(c.logic));
  }
  return reply(200, out);
}

HttpReply Service::solve(const std::string& body) {
  HttpReply fail;
  auto req = request_object(body, cfg_.max_body, fail);
  if (!req) return fail;

  SolverOptions opts = cfg_.solver;
  if (req->contains("seed")) {
    const json& s = (*req)["seed"];
    if (!s.is_number_unsigned()) return error(400, "'seed' must be a non-negative integer");
    opts.seed = s.get<std::uint64_t>();
  }
  CompileOptions copts;
  if (req->contains("encoding")) {
    const json& e = (*req)["encoding"];
    const std::string name = e.is_string() ? e.get<std::string>() : "";
    if (name == "auto") copts.encoding = CardEncoding::Auto;
    else if (name == "binomial") copts.encoding = CardEncoding::Binomial;
    else if (name == "seqcounter") copts.encoding = CardEncoding::SequentialCounter;
    else return error(400, "'encoding' must be one of auto, binomial, seqcounter");
  }

  {
    std::lock_guard lock(mu_);
    sweep(now_());
    if (sessions_.size() >= cfg_.max_sessions) return error(429, "too many open sessions");
  }

  const Compiled c = twist::compile((*req)["source"].get<std::string>(), copts);
  if (!c.ok())
    return reply(200, json{{"status", "error"}, {"diagnostics", diagnostics_json(c)}});

  auto record = std::make_shared<Record>();
  SatStatus status = SatStatus::Unknown;
  try {
    if (c.cnf) {
      record->sat = std::make_unique<Session>(*c.cnf, opts);
      SolveResult r = record->sat->next();
      status = r.status;
      if (status == SatStatus::Sat) record->view = decode(r.model, record->sat->db().varmap);
    } else {
      const std::string cmd = resolve_smt_command(cfg_.smt_cmd);
      if (cmd.empty())
        return reply(200, json{{"status", "error"},
                               {"diagnostics", json::array({{{"severity", "error"},
                                                             {"message", "no SMT solver available"}}})}});
      record->smt = std::make_unique<SmtSession>(*c.ground, cmd, opts.external_timeout);
      SmtResult r = record->smt->next();
      status = r.status;
      if (status == SatStatus::Sat) {
        record->view = make_view(r.model.atoms);
        record->values = r.model.numbers;
      }
    }
  } catch (const ExternalSolverError& e) {
    return reply(200, json{{"status", "error"},
                           {"diagnostics", json::array({{{"severity", "error"},
                                                         {"message", e.what()}}})}});
  }

  json out{{"status", std::string(to_string(status))}};
  if (status != SatStatus::Sat) return reply(200, out);

  out["model"] = rows_json(record->view);
  if (record->smt) out["values"] = values_json(record->values);
  std::lock_guard lock(mu_);
  const auto now = now_();
  sweep(now);
  if (sessions_.size() >= cfg_.max_sessions) return error(429, "too many open sessions");
  record->last_used = now;
  std::string id = new_id();
  while (sessions_.count(id)) id = new_id();
  sessions_.emplace(id, std::move(record));
  out["session_id"] = id;
  return reply(200, out);
}

HttpReply Service::next(const std::string& id) {
  auto record = find(id);
  if (!record) return error(404, "unknown or expired session");
  std::lock_guard lock(record->mu);
  json out;
  try {
    if (record->sat) {
      SolveResult r = record->sat->next();
      if (r.status == SatStatus::Sat) record->view = decode(r.model, record->sat->db().varmap);
      out["status"] = r.status == SatStatus::Unsat ? "exhausted" : std::string(to_string(r.status));
    } else {
      SmtResult r = record->smt->next();
      if (r.status == SatStatus::Sat) {
        record->view = make_view(r.model.atoms);
        record->values = r.model.numbers;
      }
      out["status"] = r.status == SatStatus::Unsat ? "exhausted" : std::string(to_string(r.status));
    }
  } catch (const ExternalSolverError& e) {
    return error(502, e.what());
  }
  if (out["status"] == "sat") {
    out["model"] = rows_json(record->view);
    if (record->smt) out["values"] = values_json(record->values);
  }
  return reply(200, out);
}

HttpReply Service::model(const std::string& id, const std::string& filter,
                         const std::string& polarity) {
  auto record = find(id);
  if (!record) return error(404, "unknown or expired session");
  std::lock_guard lock(record->mu);
  try {
    const ModelView v = apply_filter(record->view, filter, parse_polarity(polarity));
    json out{{"rows", rows_json(v)}};
    if (record->smt) out["values"] = values_json(record->values);
    return reply(200, out);
  } catch (const FilterError& e) {
    return error(422, e.what());
  }
}

void Service::install(httplib::Server& server) {
  server.set_payload_max_length(cfg_.max_body + 1);
  auto send = [](httplib::Response& res, const HttpReply& r) {
    res.status = r.status;
    res.set_content(r.body, "application/json");
  };
  server.Get("/healthz", [this, send](const httplib::Request&, httplib::Response& res) {
    send(res, health());
  });
  server.Post("/compile", [this, send](const httplib::Request& req, httplib::Response& res) {
    send(res, compile(req.body));
  });
  server.Post("/solve", [this, send](const httplib::Request& req, httplib::Response& res) {
    send(res, solve(req.body));
  });
  server.Post(R"(/sessions/([0-9a-f]+)/next)",
              [this, send](const httplib::Request& req, httplib::Response& res) {
                send(res, next(req.matches[1]));
              });
  server.Get(R"(/sessions/([0-9a-f]+)/model)",
             [this, send](const httplib::Request& req, httplib::Response& res) {
               send(res, model(req.matches[1], req.get_param_value("filter"),
                               req.get_param_value("polarity")));
             });
  server.set_exception_handler(
      [send](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
        std::string what = "internal error";
        try {
          std::rethrow_exception(ep);
        } catch (const std::exception& e) {
          what = std::string("internal error: ") + e.what();
        } catch (...) {
        }
        send(res, error(500, what));
      });
  if (!cfg_.ui_dir.empty()) server.set_mount_point("/ui", cfg_.ui_dir);
}

}  // namespace twist
