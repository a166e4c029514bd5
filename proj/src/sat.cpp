// Copyright 2026 The twist Authors
// SPDX-License-Identifier: Apache-2.0

#include "twist/sat.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <random>

#include "twist/diagnostic.hpp"
#include "twist/external_sat.hpp"

namespace twist {

std::string_view to_string(SatStatus s) {
  switch (s) {
    case SatStatus::Sat: return "sat";
    case SatStatus::Unsat: return "unsat";
    case SatStatus::Unknown: return "unknown";
  }
  return "unknown";
}

namespace {

constexpr std::uint32_t kNoClause = std::numeric_limits<std::uint32_t>::max();
constexpr double kVarDecay = 0.95;
constexpr double kClauseDecay = 0.999;
constexpr int kRestartBase = 64;

// Internal literal code: 2*var for the positive literal, 2*var+1 for the negative.
int encode(Lit l) { return l > 0 ? 2 * l : 2 * -l + 1; }

double luby(double y, int x) {
  int size = 1;
  int seq = 0;
  while (size < x + 1) {
    ++seq;
    size = 2 * size + 1;
  }
  while (size - 1 != x) {
    size = (size - 1) >> 1;
    --seq;
    x = x % size;
  }
  return std::pow(y, seq);
}

class VarHeap {
 public:
  explicit VarHeap(const std::vector<double>& activity) : act_(activity) {}

  void grow(int n) { pos_.resize(static_cast<std::size_t>(n) + 1, -1); }
  bool empty() const { return heap_.empty(); }
  bool contains(int v) const { return pos_[v] >= 0; }

  void insert(int v) {
    if (contains(v)) return;
    pos_[v] = static_cast<int>(heap_.size());
    heap_.push_back(v);
    up(pos_[v]);
  }

  void increased(int v) {
    if (contains(v)) up(pos_[v]);
  }

  int pop() {
    int top = heap_[0];
    heap_[0] = heap_.back();
    pos_[heap_[0]] = 0;
    heap_.pop_back();
    pos_[top] = -1;
    if (!heap_.empty()) down(0);
    return top;
  }

 private:
  bool before(int a, int b) const {
    if (act_[a] != act_[b]) return act_[a] > act_[b];
    return a < b;
  }

  void up(int i) {
    int v = heap_[i];
    while (i > 0) {
      int parent = (i - 1) / 2;
      if (!before(v, heap_[parent])) break;
      heap_[i] = heap_[parent];
      pos_[heap_[i]] = i;
      i = parent;
    }
    heap_[i] = v;
    pos_[v] = i;
  }

  void down(int i) {
    int v = heap_[i];
    const int n = static_cast<int>(heap_.size());
    for (;;) {
      int child = 2 * i + 1;
      if (child >= n) break;
      if (child + 1 < n && before(heap_[child + 1], heap_[child])) ++child;
      if (!before(heap_[child], v)) break;
      heap_[i] = heap_[child];
      pos_[heap_[i]] = i;
      i = child;
    }
    heap_[i] = v;
    pos_[v] = i;
  }

  const std::vector<double>& act_;
  std::vector<int> heap_;
  std::vector<int> pos_;
};

struct ClauseRec {
  std::vector<int> lits;
  bool learnt = false;
  bool deleted = false;
  double activity = 0;
};

struct Watcher {
  std::uint32_t cref;
  int blocker;
};

enum class Outcome { True, False, Restart, Budget };

}  // namespace

struct Solver::Impl {
  explicit Impl(const SolverOptions& opts)
      : budget(opts.conflict_budget), rng(opts.seed), order(activity) {
    grow(0);
  }

  // Configuration and statistics.
  std::uint64_t budget;
  std::mt19937_64 rng;
  std::uint64_t n_conflicts = 0;
  std::uint64_t n_decisions = 0;

  // Clause storage.
  std::vector<ClauseRec> arena;
  std::vector<std::uint32_t> learnts;
  std::vector<std::vector<Watcher>> watches;  // watches[c]: clauses watching the negation of c
  double cla_inc = 1;
  double max_learnts = 0;
  std::size_t n_original = 0;

  // Assignment.
  int n = 0;
  std::vector<std::int8_t> assign;  // per var: 1 true, -1 false, 0 unassigned
  std::vector<int> level;
  std::vector<std::uint32_t> reason;
  std::vector<bool> phase;
  std::vector<int> trail;
  std::vector<std::size_t> trail_lim;
  std::size_t qhead = 0;
  bool ok = true;

  // Heuristic.
  std::vector<double> activity;
  double var_inc = 1;
  VarHeap order;

  std::vector<char> seen;
  std::vector<int> assumptions;
  std::vector<bool> model;

  void grow(int new_n) {
    if (new_n < n) return;
    const auto size = static_cast<std::size_t>(new_n) + 1;
    assign.resize(size, 0);
    level.resize(size, 0);
    reason.resize(size, kNoClause);
    phase.resize(size, false);
    activity.resize(size, 0.0);
    seen.resize(size, 0);
    watches.resize(2 * size + 2);
    order.grow(new_n);
    std::uniform_real_distribution<double> jitter(0.0, 1e-5);
    for (int v = n + 1; v <= new_n; ++v) {
      activity[v] = jitter(rng);
      order.insert(v);
    }
    n = new_n;
  }

  int value(int code) const {
    int a = assign[code >> 1];
    return (code & 1) ? -a : a;
  }

  int decision_level() const { return static_cast<int>(trail_lim.size()); }

  void enqueue(int code, std::uint32_t from) {
    int v = code >> 1;
    assign[v] = (code & 1) ? -1 : 1;
    level[v] = decision_level();
    reason[v] = from;
    trail.push_back(code);
  }

  void attach(std::uint32_t cr) {
    const auto& c = arena[cr].lits;
    watches[c[0] ^ 1].push_back({cr, c[1]});
    watches[c[1] ^ 1].push_back({cr, c[0]});
  }

  std::uint32_t propagate() {
    std::uint32_t confl = kNoClause;
    while (qhead < trail.size()) {
      const int p = trail[qhead++];
      const int false_lit = p ^ 1;
      auto& ws = watches[p];
      std::size_t i = 0;
      std::size_t j = 0;
      while (i < ws.size()) {
        const Watcher w = ws[i];
        if (value(w.blocker) == 1) {
          ws[j++] = ws[i++];
          continue;
        }
        auto& c = arena[w.cref].lits;
        if (c[0] == false_lit) std::swap(c[0], c[1]);
        ++i;
        const int first = c[0];
        const Watcher nw{w.cref, first};
        if (first != w.blocker && value(first) == 1) {
          ws[j++] = nw;
          continue;
        }
        bool moved = false;
        for (std::size_t k = 2; k < c.size(); ++k) {
          if (value(c[k]) != -1) {
            std::swap(c[1], c[k]);
            watches[c[1] ^ 1].push_back(nw);
            moved = true;
            break;
          }
        }
        if (moved) continue;
        ws[j++] = nw;
        if (value(first) == -1) {
          confl = w.cref;
          qhead = trail.size();
          while (i < ws.size()) ws[j++] = ws[i++];
        } else {
          enqueue(first, w.cref);
        }
      }
      ws.resize(j);
      if (confl != kNoClause) break;
    }
    return confl;
  }

  void bump_var(int v) {
    activity[v] += var_inc;
    if (activity[v] > 1e100) {
      for (int u = 1; u <= n; ++u) activity[u] *= 1e-100;
      var_inc *= 1e-100;
    }
    order.increased(v);
  }

  void bump_clause(ClauseRec& c) {
    c.activity += cla_inc;
    if (c.activity > 1e20) {
      for (auto cr : learnts) arena[cr].activity *= 1e-20;
      cla_inc *= 1e-20;
    }
  }

  bool redundant(int code) const {
    std::uint32_t r = reason[code >> 1];
    if (r == kNoClause) return false;
    const auto& c = arena[r].lits;
    for (std::size_t k = 1; k < c.size(); ++k) {
      int v = c[k] >> 1;
      if (!seen[v] && level[v] > 0) return false;
    }
    return true;
  }

  // First-UIP conflict analysis. Returns the learnt clause (asserting literal
  // first, a literal of the backjump level second) and the backjump level.
  std::pair<std::vector<int>, int> analyze(std::uint32_t confl) {
    std::vector<int> learnt{-1};
    int path = 0;
    int p = -1;
    std::size_t idx = trail.size();
    do {
      ClauseRec& c = arena[confl];
      if (c.learnt) bump_clause(c);
      for (std::size_t k = (p == -1 ? 0 : 1); k < c.lits.size(); ++k) {
        const int q = c.lits[k];
        const int v = q >> 1;
        if (!seen[v] && level[v] > 0) {
          bump_var(v);
          seen[v] = 1;
          if (level[v] >= decision_level()) ++path;
          else learnt.push_back(q);
        }
      }
      while (!seen[trail[idx - 1] >> 1]) --idx;
      p = trail[--idx];
      confl = reason[p >> 1];
      seen[p >> 1] = 0;
      --path;
    } while (path > 0);
    learnt[0] = p ^ 1;

    std::vector<int> all(learnt.begin() + 1, learnt.end());
    std::size_t j = 1;
    for (std::size_t i = 1; i < learnt.size(); ++i)
      if (!redundant(learnt[i])) learnt[j++] = learnt[i];
    learnt.resize(j);
    for (int q : all) seen[q >> 1] = 0;

    int bt = 0;
    if (learnt.size() > 1) {
      std::size_t max_i = 1;
      for (std::size_t i = 2; i < learnt.size(); ++i)
        if (level[learnt[i] >> 1] > level[learnt[max_i] >> 1]) max_i = i;
      std::swap(learnt[1], learnt[max_i]);
      bt = level[learnt[1] >> 1];
    }
    return {std::move(learnt), bt};
  }

  void cancel_until(int lvl) {
    if (decision_level() <= lvl) return;
    for (std::size_t c = trail.size(); c > trail_lim[lvl]; --c) {
      const int v = trail[c - 1] >> 1;
      phase[v] = assign[v] == 1;
      assign[v] = 0;
      reason[v] = kNoClause;
      order.insert(v);
    }
    qhead = trail_lim[lvl];
    trail.resize(trail_lim[lvl]);
    trail_lim.resize(static_cast<std::size_t>(lvl));
  }

  bool locked(std::uint32_t cr) const {
    const int first = arena[cr].lits[0];
    return value(first) == 1 && reason[first >> 1] == cr;
  }

  void reduce_db() {
    std::vector<std::uint32_t> sorted = learnts;
    std::sort(sorted.begin(), sorted.end(), [&](std::uint32_t a, std::uint32_t b) {
      if (arena[a].activity != arena[b].activity) return arena[a].activity < arena[b].activity;
      return a < b;
    });
    const std::size_t half = sorted.size() / 2;
    learnts.clear();
    for (std::size_t i = 0; i < sorted.size(); ++i) {
      const std::uint32_t cr = sorted[i];
      if (i < half && arena[cr].lits.size() > 2 && !locked(cr)) {
        arena[cr].deleted = true;
        arena[cr].lits.clear();
        arena[cr].lits.shrink_to_fit();
      } else {
        learnts.push_back(cr);
      }
    }
    std::sort(learnts.begin(), learnts.end());
    for (auto& ws : watches) {
      ws.erase(std::remove_if(ws.begin(), ws.end(),
                              [&](const Watcher& w) { return arena[w.cref].deleted; }),
               ws.end());
    }
  }

  int pick_branch() {
    while (!order.empty()) {
      const int v = order.pop();
      if (assign[v] == 0) return phase[v] ? 2 * v : 2 * v + 1;
    }
    return -1;
  }

  Outcome search(int restart_after, std::uint64_t conflict_limit) {
    int local = 0;
    for (;;) {
      const std::uint32_t confl = propagate();
      if (confl != kNoClause) {
        ++n_conflicts;
        ++local;
        if (decision_level() == 0) {
          ok = false;
          return Outcome::False;
        }
        auto [learnt, bt] = analyze(confl);
        cancel_until(bt);
        if (learnt.size() == 1) {
          enqueue(learnt[0], kNoClause);
        } else {
          const auto cr = static_cast<std::uint32_t>(arena.size());
          arena.push_back({std::move(learnt), true, false, 0});
          learnts.push_back(cr);
          attach(cr);
          bump_clause(arena[cr]);
          enqueue(arena[cr].lits[0], cr);
        }
        var_inc /= kVarDecay;
        cla_inc /= kClauseDecay;
        if (n_conflicts >= conflict_limit) return Outcome::Budget;
        continue;
      }
      if (local >= restart_after) {
        cancel_until(0);
        return Outcome::Restart;
      }
      if (static_cast<double>(learnts.size()) >= max_learnts + static_cast<double>(trail.size()))
        reduce_db();

      int next = -1;
      while (decision_level() < static_cast<int>(assumptions.size())) {
        const int a = assumptions[static_cast<std::size_t>(decision_level())];
        if (value(a) == 1) {
          trail_lim.push_back(trail.size());
        } else if (value(a) == -1) {
          return Outcome::False;
        } else {
          next = a;
          break;
        }
      }
      if (next == -1) {
        next = pick_branch();
        if (next == -1) return Outcome::True;
        ++n_decisions;
      }
      trail_lim.push_back(trail.size());
      enqueue(next, kNoClause);
    }
  }

  void add_clause(std::span<const Lit> lits) {
    if (!ok) return;
    cancel_until(0);
    std::vector<int> codes;
    codes.reserve(lits.size());
    int max_var = 0;
    for (Lit l : lits) {
      if (l == 0 || l == std::numeric_limits<Lit>::min())
        throw std::invalid_argument("invalid literal");
      max_var = std::max(max_var, std::abs(l));
      codes.push_back(encode(l));
    }
    grow(max_var);
    std::sort(codes.begin(), codes.end());
    codes.erase(std::unique(codes.begin(), codes.end()), codes.end());
    std::vector<int> kept;
    for (std::size_t i = 0; i < codes.size(); ++i) {
      if (i + 1 < codes.size() && (codes[i] ^ 1) == codes[i + 1]) return;  // tautology
      const int v = value(codes[i]);
      if (v == 1) return;
      if (v == 0) kept.push_back(codes[i]);
    }
    if (kept.empty()) {
      ok = false;
    } else if (kept.size() == 1) {
      enqueue(kept[0], kNoClause);
      ok = propagate() == kNoClause;
    } else {
      const auto cr = static_cast<std::uint32_t>(arena.size());
      arena.push_back({std::move(kept), false, false, 0});
      ++n_original;
      attach(cr);
    }
  }

  SatStatus solve(std::span<const Lit> assume) {
    model.clear();
    if (!ok) return SatStatus::Unsat;
    assumptions.clear();
    for (Lit l : assume) {
      if (l == 0) throw std::invalid_argument("invalid assumption literal");
      grow(std::abs(l));
      assumptions.push_back(encode(l));
    }
    max_learnts = std::max(2000.0, static_cast<double>(n_original) / 3.0);
    const std::uint64_t limit =
        budget > std::numeric_limits<std::uint64_t>::max() - n_conflicts
            ? std::numeric_limits<std::uint64_t>::max()
            : n_conflicts + budget;
    SatStatus status = SatStatus::Unknown;
    for (int restarts = 0;; ++restarts) {
      const auto after = static_cast<int>(luby(2, restarts) * kRestartBase);
      const Outcome o = search(after, limit);
      if (o == Outcome::Restart) {
        max_learnts *= 1.1;
        continue;
      }
      if (o == Outcome::True) {
        status = SatStatus::Sat;
        model.assign(static_cast<std::size_t>(n) + 1, false);
        for (int v = 1; v <= n; ++v) model[v] = assign[v] == 1;
      } else if (o == Outcome::False) {
        status = SatStatus::Unsat;
      }
      break;
    }
    cancel_until(0);
    return status;
  }
};

Solver::Solver(const SolverOptions& opts) : impl_(std::make_unique<Impl>(opts)) {}
Solver::~Solver() = default;
Solver::Solver(Solver&&) noexcept = default;
Solver& Solver::operator=(Solver&&) noexcept = default;

void Solver::reserve_vars(int n) { impl_->grow(n); }
int Solver::n_vars() const { return impl_->n; }
void Solver::add_clause(std::span<const Lit> clause) { impl_->add_clause(clause); }
SatStatus Solver::solve(std::span<const Lit> assumptions) { return impl_->solve(assumptions); }
const std::vector<bool>& Solver::model() const { return impl_->model; }
std::uint64_t Solver::conflicts() const { return impl_->n_conflicts; }
std::uint64_t Solver::decisions() const { return impl_->n_decisions; }

void verify_model(std::span<const Clause> clauses, const std::vector<bool>& model) {
  for (const auto& c : clauses) {
    bool sat = false;
    for (Lit l : c) {
      const auto v = static_cast<std::size_t>(std::abs(l));
      if (v >= model.size()) throw InternalError("model does not cover variable " + std::to_string(v));
      if (model[v] == (l > 0)) {
        sat = true;
        break;
      }
    }
    if (!sat) throw InternalError("solver returned an assignment violating a clause");
  }
}

SolveResult solve(const ClauseDb& db, std::span<const Lit> assumptions, const SolverOptions& opts) {
  SolveResult r;
  if (!opts.external_cmd.empty() && assumptions.empty()) {
    r = run_external_sat(db, {}, opts.external_cmd, opts.external_timeout);
  } else {
    Solver s(opts);
    s.reserve_vars(db.n_vars());
    for (const auto& c : db.clauses) s.add_clause(c);
    r.status = s.solve(assumptions);
    if (r.status == SatStatus::Sat) r.model = s.model();
  }
  if (r.status == SatStatus::Sat) {
    verify_model(db.clauses, r.model);
    for (Lit a : assumptions) {
      const auto v = static_cast<std::size_t>(std::abs(a));
      if (v >= r.model.size() || r.model[v] != (a > 0))
        throw InternalError("model contradicts an assumption");
    }
  }
  return r;
}

Session::Session(ClauseDb db, const SolverOptions& opts)
    : db_(std::move(db)), opts_(opts), solver_(opts) {
  if (!opts_.external_cmd.empty()) return;
  solver_.reserve_vars(db_.n_vars());
  for (const auto& c : db_.clauses) solver_.add_clause(c);
}

SolveResult Session::next() {
  if (exhausted_) return {SatStatus::Unsat, {}};
  SolveResult r;
  if (!opts_.external_cmd.empty()) {
    r = run_external_sat(db_, blocking_, opts_.external_cmd, opts_.external_timeout);
  } else {
    r.status = solver_.solve();
    if (r.status == SatStatus::Sat) r.model = solver_.model();
  }
  if (r.status == SatStatus::Unsat) exhausted_ = true;
  if (r.status != SatStatus::Sat) return r;

  if (r.model.size() < static_cast<std::size_t>(db_.n_vars()) + 1)
    r.model.resize(static_cast<std::size_t>(db_.n_vars()) + 1, false);
  verify_model(db_.clauses, r.model);
  verify_model(blocking_, r.model);
  ++found_;
  const int n_user = db_.varmap.n_user();
  if (n_user == 0) {
    exhausted_ = true;
    return r;
  }
  Clause block;
  block.reserve(static_cast<std::size_t>(n_user));
  for (int v = 1; v <= n_user; ++v) block.push_back(r.model[v] ? -v : v);
  if (opts_.external_cmd.empty()) solver_.add_clause(block);
  blocking_.push_back(std::move(block));
  return r;
}

std::uint64_t count_models(const ClauseDb& db, std::uint64_t limit, const SolverOptions& opts) {
  if (limit == 0) throw std::invalid_argument("count limit must be at least 1");
  Session s(db, opts);
  std::uint64_t count = 0;
  while (count < limit) {
    SolveResult r = s.next();
    if (r.status == SatStatus::Unsat) break;
    if (r.status == SatStatus::Unknown) throw BudgetExceeded("conflict budget exhausted");
    ++count;
  }
  return count;
}

}  // namespace twist
