#pragma once
// Tree reconstruction from complete traces.
//
// For adjacent nodes the infection time difference is one edge incubation,
// Exp(lambda), regardless of where the cascade started; for non-adjacent
// nodes it is a sum or difference along longer paths and skews larger. The
// pair cost is the lower median over traces of |t_i(u) - t_i(v)|, and the
// output is the minimum spanning tree over these costs.
//
// A pair additionally prunes to infinite cost when a witness shows the two
// orders are inconsistent with adjacency: some node w and traces i, j with
//   t_i(w) < t_i(u) < t_i(v)   and   t_j(w) < t_j(v) < t_j(u).
// If {u, v} were an edge, every node before u in trace i sits on u's side
// of the edge and infects u first, so no such w can exist; for non-edges a
// witness appears quickly. The test is exact: it marks the union of trace
// prefixes before u over traces with u earlier, then scans prefixes before
// v in traces with v earlier for a marked node.
//
// Lazy mode (default) runs Kruskal over finite medians and applies the
// witness test only to pairs about to be accepted; eager mode prunes every
// pair up front. Both produce the same tree (the witness outcome depends
// only on the traces), which the tests exercise differentially.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "traceinfer/eval.hpp"
#include "traceinfer/trace.hpp"

namespace traceinfer {

struct TreeConfig {
  bool eager = false;  // reference mode: witness-test every pair before Kruskal
};

namespace detail {

// Rank and time lookups per trace; O(n * l) storage.
struct TraceMatrix {
  int n = 0;
  long long ell = 0;
  std::vector<int> order;     // [trace * n + pos] -> node
  std::vector<int> rank;      // [trace * n + node] -> pos
  std::vector<double> time;   // [trace * n + node] -> timestamp

  TraceMatrix(const TraceSet& ts) : n(ts.n), ell(static_cast<long long>(ts.traces.size())) {
    order.resize(ell * n);
    rank.resize(ell * n);
    time.resize(ell * n);
    for (long long i = 0; i < ell; ++i) {
      const auto& ev = ts.traces[i].events;
      if (static_cast<int>(ev.size()) != n)
        throw std::invalid_argument("tree reconstruction requires complete traces");
      for (int pos = 0; pos < n; ++pos) {
        const auto& [node, t] = ev[pos];
        order[i * n + pos] = node;
        rank[i * n + node] = pos;
        time[i * n + node] = t;
      }
    }
  }

  const int* order_row(long long i) const { return order.data() + i * n; }
  const int* rank_row(long long i) const { return rank.data() + i * n; }
  const double* time_row(long long i) const { return time.data() + i * n; }
};

// Whether some node precedes u in a trace where u precedes v and the same
// node precedes v in a trace where v precedes u. stamp/mark are caller
// workspaces of size n.
inline bool has_witness(const TraceMatrix& m, int u, int v, std::vector<int>& mark,
                        int& mark_tag) {
  ++mark_tag;
  bool any_uv = false;
  for (long long i = 0; i < m.ell; ++i) {
    const int* rank = m.rank_row(i);
    if (rank[u] < rank[v]) {
      const int* order = m.order_row(i);
      const int stop = rank[u];
      for (int pos = 0; pos < stop; ++pos) mark[order[pos]] = mark_tag;
      any_uv = true;
    }
  }
  if (!any_uv) return false;
  for (long long i = 0; i < m.ell; ++i) {
    const int* rank = m.rank_row(i);
    if (rank[v] < rank[u]) {
      const int* order = m.order_row(i);
      const int stop = rank[v];
      for (int pos = 0; pos < stop; ++pos)
        if (mark[order[pos]] == mark_tag) return true;
    }
  }
  return false;
}

struct UnionFind {
  std::vector<int> parent, size;

  explicit UnionFind(int n) : parent(n), size(n, 1) {
    std::iota(parent.begin(), parent.end(), 0);
  }

  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }

  bool unite(int a, int b) {
    a = find(a), b = find(b);
    if (a == b) return false;
    if (size[a] < size[b]) std::swap(a, b);
    parent[b] = a;
    size[a] += size[b];
    return true;
  }
};

}  // namespace detail

// Flat upper-triangular pair costs; index(u, v) with u < v.
struct TreeCosts {
  int n = 0;
  std::vector<double> cost;

  std::size_t index(int u, int v) const {
    return static_cast<std::size_t>(u) * (2 * n - u - 1) / 2 + (v - u - 1);
  }
  double at(int u, int v) const { return cost[index(u, v)]; }
};

// Lower median (order statistic ceil(l/2)) of |t_i(u) - t_i(v)| per pair.
// Witness pruning is not applied here; reconstruct_tree applies it lazily
// or eagerly per its config.
inline TreeCosts tree_costs(const TraceSet& ts) {
  if (ts.n < 2) throw std::invalid_argument("need at least two nodes");
  if (ts.traces.empty()) throw std::invalid_argument("need at least one trace");
  const detail::TraceMatrix m(ts);
  TreeCosts out;
  out.n = ts.n;
  out.cost.resize(static_cast<std::size_t>(ts.n) * (ts.n - 1) / 2);
  const long long ell = m.ell;
  const std::size_t mid = static_cast<std::size_t>((ell - 1) / 2);  // lower median
  std::vector<double> diffs(ell);
  std::size_t idx = 0;
  for (int u = 0; u < ts.n; ++u) {
    for (int v = u + 1; v < ts.n; ++v, ++idx) {
      for (long long i = 0; i < ell; ++i) {
        const double* time = m.time_row(i);
        diffs[i] = std::abs(time[u] - time[v]);
      }
      std::nth_element(diffs.begin(), diffs.begin() + mid, diffs.end());
      out.cost[idx] = diffs[mid];
    }
  }
  return out;
}

// Requires complete traces recorded with p = 1.
inline InferenceResult reconstruct_tree(const TraceSet& ts, const TreeConfig& cfg = {}) {
  const auto start = std::chrono::steady_clock::now();
  if (ts.params.p != 1.0)
    throw std::invalid_argument("tree reconstruction requires p = 1 traces");
  const int n = ts.n;
  if (n < 2) throw std::invalid_argument("need at least two nodes");
  if (ts.traces.empty()) throw std::invalid_argument("need at least one trace");
  const detail::TraceMatrix m(ts);
  TreeCosts costs = tree_costs(ts);

  std::vector<int> mark(n, 0);
  int mark_tag = 0;

  // Pair order: ascending cost, ties lexicographic by (u, v).
  std::vector<std::size_t> by_cost(costs.cost.size());
  std::iota(by_cost.begin(), by_cost.end(), 0);
  std::stable_sort(by_cost.begin(), by_cost.end(), [&](std::size_t a, std::size_t b) {
    return costs.cost[a] < costs.cost[b];
  });

  // Row starts invert the triangular index.
  std::vector<std::size_t> row_start(n - 1);
  for (int u = 0; u + 1 < n; ++u) row_start[u] = costs.index(u, u + 1);
  auto unflatten = [&](std::size_t idx, int& u, int& v) {
    u = static_cast<int>(std::upper_bound(row_start.begin(), row_start.end(), idx) -
                         row_start.begin()) - 1;
    v = u + 1 + static_cast<int>(idx - row_start[u]);
  };

  if (cfg.eager) {
    const double inf = std::numeric_limits<double>::infinity();
    std::size_t idx = 0;
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v, ++idx)
        if (detail::has_witness(m, u, v, mark, mark_tag)) costs.cost[idx] = inf;
  }

  detail::UnionFind uf(n);
  InferenceResult r;
  r.algorithm = "tree";
  r.params = std::string("mode=") + (cfg.eager ? "eager" : "lazy") +
             " ell=" + std::to_string(ts.traces.size());
  long pruned = 0;
  for (std::size_t k = 0; k < by_cost.size() && static_cast<int>(r.edges.size()) < n - 1; ++k) {
    const std::size_t idx = by_cost[k];
    if (std::isinf(costs.cost[idx])) continue;
    int u, v;
    unflatten(idx, u, v);
    if (uf.find(u) == uf.find(v)) continue;
    if (!cfg.eager && detail::has_witness(m, u, v, mark, mark_tag)) {
      ++pruned;
      continue;
    }
    uf.unite(u, v);
    r.edges.push_back({u, v});
  }
  if (static_cast<int>(r.edges.size()) != n - 1)
    throw std::runtime_error("pair costs disconnect the node set; traces are inconsistent "
                             "with a connected tree");
  std::sort(r.edges.begin(), r.edges.end());
  r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace traceinfer
