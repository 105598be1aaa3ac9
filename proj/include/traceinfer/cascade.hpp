#pragma once
// Continuous-time cascade simulator.
//
// Model: the source is infected at time 0. Every edge, independently,
// transmits with probability p after an Exp(lambda) incubation delay.
// Equivalently: keep each edge with probability p, assign kept edges
// i.i.d. Exp(lambda) lengths, and read infection times off single-source
// shortest paths. The simulator implements the equivalent form directly.
//
// Draw order per trace (one derived RngStream per trace index):
//   1. source, if the policy is uniform: one uniform_below(n) draw;
//   2. edges in edges() order: if p < 1, one keep coin (u <= p) per edge;
//      for each kept edge one Exp(lambda) length.
// For a fixed seed and p the keep pattern and the uniform draw behind each
// length are therefore independent of lambda, so rescaling lambda by a
// power of two rescales every timestamp exactly (binary floating point
// halves sums exactly).
//
// Nodes the percolated graph does not reach are absent from the trace.
// Events are ordered by (time, node); exact time collisions have
// probability zero but are nudged by one ulp to keep times strictly
// increasing.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <queue>
#include <thread>
#include <vector>

#include "traceinfer/graph.hpp"
#include "traceinfer/rng.hpp"
#include "traceinfer/trace.hpp"

namespace traceinfer {

// One cascade with its sampled percolation and edge lengths exposed, so
// tests can replay shortest paths with an independent oracle.
struct SampledCascade {
  int source = 0;
  std::vector<char> kept;      // parallel to g.edges()
  std::vector<double> length;  // parallel to g.edges(); valid where kept
  Trace trace;
};

namespace detail {

struct DijkstraWorkspace {
  std::vector<double> dist;
  std::vector<char> done;
};

inline void run_dijkstra(const Graph& g, int source, const std::vector<char>& kept,
                         const std::vector<double>& length, DijkstraWorkspace& ws,
                         Trace& out) {
  const double inf = std::numeric_limits<double>::infinity();
  ws.dist.assign(g.n(), inf);
  ws.done.assign(g.n(), 0);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
  ws.dist[source] = 0.0;
  queue.push({0.0, source});
  out.events.clear();
  while (!queue.empty()) {
    const auto [d, u] = queue.top();
    queue.pop();
    if (ws.done[u]) continue;
    ws.done[u] = 1;
    out.events.push_back({u, d});
    for (const auto& [v, e] : g.adjacent(u)) {
      if (!kept[e] || ws.done[v]) continue;
      const double nd = d + length[e];
      if (nd < ws.dist[v]) {
        ws.dist[v] = nd;
        queue.push({nd, v});
      }
    }
  }
  std::sort(out.events.begin(), out.events.end(),
            [](const TraceEvent& a, const TraceEvent& b) {
              return a.time < b.time || (a.time == b.time && a.node < b.node);
            });
  for (std::size_t i = 1; i < out.events.size(); ++i)
    if (!(out.events[i].time > out.events[i - 1].time))
      out.events[i].time = std::nextafter(out.events[i - 1].time,
                                          std::numeric_limits<double>::infinity());
}

}  // namespace detail

inline SampledCascade simulate_one_sampled(const Graph& g, const CascadeParams& params,
                                           SourcePolicy source, RngStream& rng) {
  if (!(params.lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
  if (!(params.p > 0.0) || params.p > 1.0)
    throw std::invalid_argument("p must be in (0, 1]");
  if (g.n() < 1) throw std::invalid_argument("graph has no nodes");
  SampledCascade out;
  if (source.kind == SourcePolicy::Kind::uniform) {
    out.source = static_cast<int>(rng.uniform_below(g.n()));
  } else {
    if (source.node < 0 || source.node >= g.n())
      throw std::invalid_argument("fixed source out of range");
    out.source = source.node;
  }
  const int m = g.edge_count();
  out.kept.assign(m, 1);
  out.length.assign(m, 0.0);
  if (params.p < 1.0)
    for (int e = 0; e < m; ++e) out.kept[e] = rng.bernoulli(params.p);
  for (int e = 0; e < m; ++e)
    if (out.kept[e]) out.length[e] = rng.exponential(params.lambda);
  detail::DijkstraWorkspace ws;
  detail::run_dijkstra(g, out.source, out.kept, out.length, ws, out.trace);
  return out;
}

inline Trace simulate_one(const Graph& g, const CascadeParams& params,
                          SourcePolicy source, RngStream& rng) {
  return simulate_one_sampled(g, params, source, rng).trace;
}

namespace detail {

inline int resolve_threads(int threads, long long work_items) {
  if (threads <= 0) {
    const unsigned hw = std::thread::hardware_concurrency();
    threads = hw == 0 ? 1 : static_cast<int>(hw);
  }
  return static_cast<int>(std::min<long long>(threads, std::max<long long>(work_items, 1)));
}

// Fills out[first..last) with traces first..last; reusable workspace per
// worker keeps allocation out of the inner loop.
inline void fill_trace_block(const Graph& g, const CascadeParams& params,
                             SourcePolicy source, std::uint64_t master_seed,
                             long long first, long long last, Trace* out) {
  const int m = g.edge_count();
  std::vector<char> kept(m);
  std::vector<double> length(m);
  DijkstraWorkspace ws;
  for (long long i = first; i < last; ++i) {
    RngStream rng(master_seed, static_cast<std::uint64_t>(i));
    int src;
    if (source.kind == SourcePolicy::Kind::uniform)
      src = static_cast<int>(rng.uniform_below(g.n()));
    else
      src = source.node;
    std::fill(kept.begin(), kept.end(), 1);
    if (params.p < 1.0)
      for (int e = 0; e < m; ++e) kept[e] = rng.bernoulli(params.p);
    for (int e = 0; e < m; ++e)
      if (kept[e]) length[e] = rng.exponential(params.lambda);
    run_dijkstra(g, src, kept, length, ws, out[i - first]);
  }
}

}  // namespace detail

// count traces, trace i drawn from the stream derived from (master_seed, i).
// The result is independent of the thread count.
inline TraceSet simulate_many(const Graph& g, const CascadeParams& params,
                              SourcePolicy source, long long count,
                              std::uint64_t master_seed, int threads = 0) {
  if (count < 0) throw std::invalid_argument("trace count must be nonnegative");
  if (source.kind == SourcePolicy::Kind::fixed &&
      (source.node < 0 || source.node >= g.n()))
    throw std::invalid_argument("fixed source out of range");
  if (!(params.lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
  if (!(params.p > 0.0) || params.p > 1.0)
    throw std::invalid_argument("p must be in (0, 1]");
  TraceSet ts;
  ts.params = params;
  ts.n = g.n();
  ts.traces.resize(count);
  const int nthreads = detail::resolve_threads(threads, count);
  if (nthreads <= 1) {
    detail::fill_trace_block(g, params, source, master_seed, 0, count, ts.traces.data());
  } else {
    std::vector<std::thread> pool;
    const long long chunk = (count + nthreads - 1) / nthreads;
    for (int t = 0; t < nthreads; ++t) {
      const long long first = t * chunk;
      const long long last = std::min(count, first + chunk);
      if (first >= last) break;
      pool.emplace_back([&, first, last] {
        detail::fill_trace_block(g, params, source, master_seed, first, last,
                                 ts.traces.data() + first);
      });
    }
    for (auto& th : pool) th.join();
  }
  return ts;
}

// Streams traces to fn(index, trace) in index order without materializing
// the whole set. Traces are produced in parallel blocks but delivered
// sequentially, so fn sees exactly the traces simulate_many would store.
template <class Fn>
void simulate_for_each(const Graph& g, const CascadeParams& params, SourcePolicy source,
                       long long count, std::uint64_t master_seed, Fn&& fn,
                       int threads = 0, long long block = 1024) {
  if (count < 0) throw std::invalid_argument("trace count must be nonnegative");
  if (source.kind == SourcePolicy::Kind::fixed &&
      (source.node < 0 || source.node >= g.n()))
    throw std::invalid_argument("fixed source out of range");
  if (!(params.lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
  if (!(params.p > 0.0) || params.p > 1.0)
    throw std::invalid_argument("p must be in (0, 1]");
  const int nthreads = detail::resolve_threads(threads, count);
  std::vector<Trace> buffer;
  for (long long base = 0; base < count; base += block) {
    const long long len = std::min(block, count - base);
    buffer.resize(len);
    if (nthreads <= 1) {
      detail::fill_trace_block(g, params, source, master_seed, base, base + len,
                               buffer.data());
    } else {
      std::vector<std::thread> pool;
      const long long chunk = (len + nthreads - 1) / nthreads;
      for (int t = 0; t < nthreads; ++t) {
        const long long first = t * chunk;
        const long long last = std::min(len, first + chunk);
        if (first >= last) break;
        pool.emplace_back([&, first, last] {
          detail::fill_trace_block(g, params, source, master_seed, base + first,
                                   base + last, buffer.data() + first);
        });
      }
      for (auto& th : pool) th.join();
    }
    for (long long i = 0; i < len; ++i) fn(base + i, buffer[i]);
  }
}

}  // namespace traceinfer
