#pragma once
// Bounded-degree reconstruction by per-vertex set scoring.
//
// For a candidate neighbor set S of vertex u, each trace contributes
//   log |S_i^u| - lambda * sum_{v in S_i^u} (t_i(u) - t_i(v))
// where S_i^u holds the members of S infected before u; a trace in which
// nothing in S precedes u contributes 0 if u is the source and -infinity
// otherwise (u cannot be infected out of nowhere). The score of S is the
// average contribution, the per-trace log conditional density of u's
// infection time under unit-rate exponential edge delays given S. R(u) is
// the score argmax over all S of size at most delta; the edge {u, v} is
// reported when v is in R(u) and v precedes u in at least a third of the
// traces, taking the union over ordered pairs.
//
// Ties in the argmax prefer smaller then lexicographically smaller sets;
// score comparison is plain floating point. Traces missing u (possible
// when cascades die out) switch u's scoring to the partial-trace variant:
// averages and the one-third rule are normalized by the number of traces
// containing u. The result records when that path was taken.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "traceinfer/eval.hpp"
#include "traceinfer/trace.hpp"

namespace traceinfer {

struct ScoreConfig {
  int delta_max = 4;               // largest candidate set size enumerated
  int delta_cap = 4;               // hard ceiling on delta_max
  long long max_subsets = 5'000'000;  // enumeration budget per vertex
};

namespace detail {

// Per-vertex view of the traces: who precedes u, by how much, and where u
// is missing. Row v of prec/gap is contiguous over traces.
struct VertexView {
  long long ell = 0;       // total traces
  long long ell_u = 0;     // traces containing u
  std::vector<char> has_u;         // [trace]
  std::vector<char> is_bad_zero;   // [trace]: contains u and u not source
  std::vector<unsigned char> prec; // [v * ell + i]: v infected before u
  std::vector<double> gap;         // [v * ell + i]: t(u) - t(v) where prec

  VertexView(const TraceSet& ts, int u) {
    const int n = ts.n;
    ell = static_cast<long long>(ts.traces.size());
    has_u.assign(ell, 0);
    is_bad_zero.assign(ell, 0);
    prec.assign(static_cast<std::size_t>(n) * ell, 0);
    gap.assign(static_cast<std::size_t>(n) * ell, 0.0);
    for (long long i = 0; i < ell; ++i) {
      const auto& ev = ts.traces[i].events;
      double tu = 0.0;
      bool found = false;
      for (const auto& [node, t] : ev)
        if (node == u) {
          tu = t;
          found = true;
          break;
        }
      if (!found) continue;
      has_u[i] = 1;
      ++ell_u;
      is_bad_zero[i] = ev.front().node != u;
      for (const auto& [node, t] : ev) {
        if (node == u) break;  // events are time-ordered; later nodes do not precede
        prec[static_cast<std::size_t>(node) * ell + i] = 1;
        gap[static_cast<std::size_t>(node) * ell + i] = tu - t;
      }
    }
  }
};

inline void check_set(const TraceSet& ts, int u, const std::vector<int>& s, int delta) {
  if (u < 0 || u >= ts.n) throw std::invalid_argument("vertex out of range");
  if (static_cast<int>(s.size()) > delta)
    throw std::invalid_argument("candidate set larger than delta");
  std::vector<char> seen(ts.n, 0);
  for (int v : s) {
    if (v < 0 || v >= ts.n) throw std::invalid_argument("set member out of range");
    if (v == u) throw std::invalid_argument("candidate set must not contain the vertex");
    if (seen[v]) throw std::invalid_argument("candidate set repeats a member");
    seen[v] = 1;
  }
}

}  // namespace detail

// Average per-trace score of candidate set s for vertex u. -infinity
// saturates; an empty trace set scores 0 for every set.
inline double score_set(const TraceSet& ts, int u, const std::vector<int>& s,
                        const ScoreConfig& cfg = {}) {
  detail::check_set(ts, u, s, cfg.delta_max);
  const double lambda = ts.params.lambda;
  const long long ell = static_cast<long long>(ts.traces.size());
  if (ell == 0) return 0.0;
  double total = 0.0;
  long long used = 0;
  for (long long i = 0; i < ell; ++i) {
    const auto& ev = ts.traces[i].events;
    double tu = 0.0;
    bool found = false;
    for (const auto& [node, t] : ev)
      if (node == u) {
        tu = t;
        found = true;
        break;
      }
    if (!found) continue;  // partial trace: u never infected here
    ++used;
    int cnt = 0;
    double gap_sum = 0.0;
    for (const auto& [node, t] : ev) {
      if (node == u) break;
      for (int v : s)
        if (v == node) {
          ++cnt;
          gap_sum += tu - t;
          break;
        }
    }
    if (cnt == 0) {
      if (ev.front().node != u) return -std::numeric_limits<double>::infinity();
    } else {
      total += std::log(static_cast<double>(cnt)) - lambda * gap_sum;
    }
  }
  if (used == 0) return 0.0;
  return total / static_cast<double>(used);
}

struct NeighborArgmax {
  std::vector<int> best;
  double best_score = 0.0;
  double runner_up = -std::numeric_limits<double>::infinity();
  long long sets_scored = 0;
};

// Exhaustive argmax of score_set over all candidate sets of size at most
// cfg.delta_max, via depth-first enumeration with incremental per-trace
// counters (O(l) per enumerated set).
inline NeighborArgmax neighbor_argmax(const TraceSet& ts, int u, const ScoreConfig& cfg = {}) {
  if (u < 0 || u >= ts.n) throw std::invalid_argument("vertex out of range");
  if (cfg.delta_max < 0 || cfg.delta_max > cfg.delta_cap)
    throw std::invalid_argument("delta_max " + std::to_string(cfg.delta_max) +
                                " exceeds delta_cap " + std::to_string(cfg.delta_cap));
  // Enumeration budget: sum of binomials C(n-1, k), k = 0..delta.
  {
    long double subsets = 0.0L, term = 1.0L;
    for (int k = 0; k <= cfg.delta_max; ++k) {
      subsets += term;
      term = term * static_cast<long double>(ts.n - 1 - k) / static_cast<long double>(k + 1);
    }
    if (subsets > static_cast<long double>(cfg.max_subsets))
      throw std::invalid_argument(
          "enumeration requires " + std::to_string(static_cast<long long>(subsets)) +
          " subsets, over the budget of " + std::to_string(cfg.max_subsets));
  }

  const detail::VertexView view(ts, u);
  const double lambda = ts.params.lambda;
  const long long ell = view.ell;
  const double neg_inf = -std::numeric_limits<double>::infinity();

  std::vector<double> log_lut(cfg.delta_max + 2, 0.0);
  for (int k = 1; k < static_cast<int>(log_lut.size()); ++k)
    log_lut[k] = std::log(static_cast<double>(k));

  long long bad_zero = 0;  // traces containing u, u not source, nothing in S before u
  for (long long i = 0; i < ell; ++i) bad_zero += view.is_bad_zero[i];
  std::vector<unsigned char> cnt(ell, 0);
  double total_log = 0.0, total_gap = 0.0;

  NeighborArgmax out;
  std::vector<int> current;
  auto eval = [&]() -> double {
    if (view.ell_u == 0) return 0.0;
    if (bad_zero > 0) return neg_inf;
    return (total_log - lambda * total_gap) / static_cast<double>(view.ell_u);
  };
  auto better = [&](double score, const std::vector<int>& s) {
    if (score != out.best_score) return score > out.best_score;
    if (s.size() != out.best.size()) return s.size() < out.best.size();
    return s < out.best;
  };

  // S = {} first.
  out.best_score = eval();
  out.best = {};
  out.sets_scored = 1;

  auto consider = [&]() {
    const double score = eval();
    ++out.sets_scored;
    if (better(score, current)) {
      out.runner_up = out.best_score;
      out.best_score = score;
      out.best = current;
    } else if (score > out.runner_up) {
      out.runner_up = score;
    }
  };

  auto push = [&](int v) {
    const unsigned char* prow = view.prec.data() + static_cast<std::size_t>(v) * ell;
    const double* grow = view.gap.data() + static_cast<std::size_t>(v) * ell;
    for (long long i = 0; i < ell; ++i) {
      if (!prow[i]) continue;
      const int c = cnt[i]++;
      total_log += log_lut[c + 1] - log_lut[c];
      total_gap += grow[i];
      if (c == 0) bad_zero -= view.is_bad_zero[i];
    }
  };
  auto pop = [&](int v) {
    const unsigned char* prow = view.prec.data() + static_cast<std::size_t>(v) * ell;
    const double* grow = view.gap.data() + static_cast<std::size_t>(v) * ell;
    for (long long i = 0; i < ell; ++i) {
      if (!prow[i]) continue;
      const int c = --cnt[i];
      total_log -= log_lut[c + 1] - log_lut[c];
      total_gap -= grow[i];
      if (c == 0) bad_zero += view.is_bad_zero[i];
    }
  };

  auto dfs = [&](auto&& self, int next) -> void {
    if (static_cast<int>(current.size()) == cfg.delta_max) return;
    for (int v = next; v < ts.n; ++v) {
      if (v == u) continue;
      push(v);
      current.push_back(v);
      consider();
      self(self, v + 1);
      current.pop_back();
      pop(v);
    }
  };
  dfs(dfs, 0);
  return out;
}

// Full reconstruction; vertices are scored independently (in parallel).
inline InferenceResult reconstruct_bdd(const TraceSet& ts, const ScoreConfig& cfg = {},
                                       int threads = 0) {
  const auto start = std::chrono::steady_clock::now();
  const int n = ts.n;
  std::vector<std::vector<int>> chosen(n);
  {
    if (threads <= 0) {
      const unsigned hw = std::thread::hardware_concurrency();
      threads = hw == 0 ? 1 : static_cast<int>(hw);
    }
    threads = std::min(threads, n);
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(threads);
    for (int t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        try {
          for (int u = t; u < n; u += threads)
            chosen[u] = neighbor_argmax(ts, u, cfg).best;
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  // Traces containing each vertex, and pairwise precedence counts.
  const long long ell = static_cast<long long>(ts.traces.size());
  std::vector<long long> ell_u(n, 0);
  std::vector<long long> before(static_cast<std::size_t>(n) * n, 0);  // [v * n + u]: v precedes u
  bool partial = false;
  for (long long i = 0; i < ell; ++i) {
    const auto& ev = ts.traces[i].events;
    if (static_cast<int>(ev.size()) != n) partial = true;
    for (std::size_t a = 0; a < ev.size(); ++a) {
      ++ell_u[ev[a].node];
      for (std::size_t b = a + 1; b < ev.size(); ++b)
        ++before[static_cast<std::size_t>(ev[a].node) * n + ev[b].node];
    }
  }

  InferenceResult r;
  r.algorithm = "bdd";
  r.params = "delta=" + std::to_string(cfg.delta_max) + " ell=" + std::to_string(ell) +
             (partial ? " partial_traces=1" : "");
  std::vector<Edge> edges;
  for (int u = 0; u < n; ++u) {
    for (int v : chosen[u]) {
      // v must precede u in at least a third of the traces scored for u.
      if (3 * before[static_cast<std::size_t>(v) * n + u] >= ell_u[u] && ell_u[u] > 0)
        edges.push_back(normalize_edge(u, v));
    }
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  r.edges = std::move(edges);
  r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace traceinfer
