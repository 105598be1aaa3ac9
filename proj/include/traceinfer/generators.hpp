#pragma once
// Graph families and seeded generators.
//
// Each generator consumes its RngStream in a fixed, documented order, so a
// (spec, seed) pair identifies a graph bit-for-bit on every platform.

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "traceinfer/graph.hpp"
#include "traceinfer/rng.hpp"

namespace traceinfer {

enum class GraphFamily {
  barabasi_albert,
  gnp,
  power_law_tree,
  uniform_random_tree,
  clique,
  clique_minus_edge,
  path,
  custom_edge_list,
};

inline const char* family_name(GraphFamily f) {
  switch (f) {
    case GraphFamily::barabasi_albert: return "barabasi_albert";
    case GraphFamily::gnp: return "gnp";
    case GraphFamily::power_law_tree: return "power_law_tree";
    case GraphFamily::uniform_random_tree: return "uniform_random_tree";
    case GraphFamily::clique: return "clique";
    case GraphFamily::clique_minus_edge: return "clique_minus_edge";
    case GraphFamily::path: return "path";
    case GraphFamily::custom_edge_list: return "custom_edge_list";
  }
  return "unknown";
}

struct GraphSpec {
  GraphFamily family = GraphFamily::gnp;
  int n = 0;
  int m = 2;              // barabasi_albert: edges per arriving node
  double edge_prob = 0.0; // gnp
  double exponent = 3.0;  // power_law_tree
  std::vector<Edge> edges; // custom_edge_list
};

namespace detail {

// Decodes a Prufer sequence a[0..n-3] over labels 0..n-1 into the unique
// tree in which label v appears exactly deg(v) - 1 times in a. Requires
// n >= 2; for n == 2 the sequence is empty and the tree is a single edge.
inline std::vector<Edge> prufer_decode(int n, const std::vector<int>& a) {
  std::vector<Edge> edges;
  edges.reserve(n - 1);
  if (n == 2) {
    edges.push_back({0, 1});
    return edges;
  }
  std::vector<int> deg(n, 1);
  for (int x : a) ++deg[x];
  int ptr = 0;
  while (deg[ptr] != 1) ++ptr;
  int leaf = ptr;
  for (int x : a) {
    edges.push_back(normalize_edge(leaf, x));
    if (--deg[x] == 1 && x < ptr) {
      leaf = x;
    } else {
      ++ptr;
      while (deg[ptr] != 1) ++ptr;
      leaf = ptr;
    }
  }
  edges.push_back(normalize_edge(leaf, n - 1));
  return edges;
}

}  // namespace detail

// Complete graph K_n.
inline Graph make_clique(int n) {
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) edges.push_back({u, v});
  return Graph(n, std::move(edges));
}

// K_n with exactly the edge {0, 1} removed.
inline Graph make_clique_minus_edge(int n) {
  if (n < 2) throw std::invalid_argument("clique_minus_edge requires n >= 2");
  std::vector<Edge> edges;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (!(u == 0 && v == 1)) edges.push_back({u, v});
  return Graph(n, std::move(edges));
}

inline Graph make_path(int n) {
  std::vector<Edge> edges;
  for (int u = 0; u + 1 < n; ++u) edges.push_back({u, u + 1});
  return Graph(n, std::move(edges));
}

inline Graph make_cycle(int n) {
  if (n < 3) throw std::invalid_argument("cycle requires n >= 3");
  std::vector<Edge> edges;
  for (int u = 0; u + 1 < n; ++u) edges.push_back({u, u + 1});
  edges.push_back({0, n - 1});
  return Graph(n, std::move(edges));
}

// Star with center 0 and the given number of leaves.
inline Graph make_star(int leaves) {
  std::vector<Edge> edges;
  for (int v = 1; v <= leaves; ++v) edges.push_back({0, v});
  return Graph(leaves + 1, std::move(edges));
}

// G(n, p): one Bernoulli draw per pair, in lexicographic (u, v) order.
inline Graph generate_gnp(int n, double p, std::uint64_t seed) {
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("gnp requires p in [0, 1]");
  RngStream rng(seed);
  std::vector<Edge> edges;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (rng.bernoulli(p)) edges.push_back({u, v});
  return Graph(n, std::move(edges));
}

// Uniform random labeled tree via a uniform Prufer sequence.
inline Graph generate_uniform_random_tree(int n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("tree requires n >= 1");
  if (n == 1) return Graph(1, {});
  RngStream rng(seed);
  std::vector<int> a(n >= 3 ? n - 2 : 0);
  for (int& x : a) x = static_cast<int>(rng.uniform_below(n));
  return Graph(n, detail::prufer_decode(n, a));
}

// Preferential attachment. Nodes 0..m-1 start as a clique; each node
// v >= m then attaches m edges to distinct earlier nodes, drawn from the
// endpoint urn (one entry per edge endpoint, so selection is proportional
// to degree), rejecting duplicate targets. If the urn is empty (m = 1,
// first arrival) the target is uniform over existing nodes.
inline Graph generate_barabasi_albert(int n, int m, std::uint64_t seed) {
  if (m < 1 || m >= n)
    throw std::invalid_argument("barabasi_albert requires 1 <= m < n");
  RngStream rng(seed);
  std::vector<Edge> edges;
  std::vector<int> urn;
  for (int u = 0; u < m; ++u)
    for (int v = u + 1; v < m; ++v) {
      edges.push_back({u, v});
      urn.push_back(u);
      urn.push_back(v);
    }
  std::vector<int> targets;
  for (int v = m; v < n; ++v) {
    targets.clear();
    while (static_cast<int>(targets.size()) < m) {
      int t;
      if (urn.empty())
        t = static_cast<int>(rng.uniform_below(v));
      else
        t = urn[rng.uniform_below(urn.size())];
      if (std::find(targets.begin(), targets.end(), t) == targets.end())
        targets.push_back(t);
    }
    for (int t : targets) {
      edges.push_back(normalize_edge(t, v));
      urn.push_back(t);
      urn.push_back(v);
    }
  }
  return Graph(n, std::move(edges));
}

// Tree with a power-law degree sequence. Draws n i.i.d. degrees from
// P(d) proportional to d^-exponent on 1..n-1 (inverse CDF on one uniform
// each), nudges random entries until the sum is exactly 2(n-1), then
// realizes the sequence as a uniform random tree over that sequence by
// Prufer-decoding the shuffled degree multiset.
inline Graph generate_power_law_tree(int n, double exponent, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("tree requires n >= 1");
  if (exponent <= 1.0) throw std::invalid_argument("power_law_tree requires exponent > 1");
  if (n == 1) return Graph(1, {});
  if (n == 2) return Graph(2, {{0, 1}});
  RngStream rng(seed);
  std::vector<double> cdf(n - 1);
  double acc = 0.0;
  for (int d = 1; d <= n - 1; ++d) {
    acc += std::pow(static_cast<double>(d), -exponent);
    cdf[d - 1] = acc;
  }
  std::vector<int> deg(n);
  long long sum = 0;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform_unit() * acc;
    const int d = static_cast<int>(std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin()) + 1;
    deg[i] = d;
    sum += d;
  }
  const long long target = 2LL * (n - 1);
  while (sum < target) {
    const int i = static_cast<int>(rng.uniform_below(n));
    if (deg[i] < n - 1) ++deg[i], ++sum;
  }
  while (sum > target) {
    const int i = static_cast<int>(rng.uniform_below(n));
    if (deg[i] >= 2) --deg[i], --sum;
  }
  std::vector<int> seq;
  seq.reserve(n - 2);
  for (int v = 0; v < n; ++v)
    for (int k = 1; k < deg[v]; ++k) seq.push_back(v);
  // Fisher-Yates shuffle.
  for (std::size_t i = seq.size(); i > 1; --i)
    std::swap(seq[i - 1], seq[rng.uniform_below(i)]);
  return Graph(n, detail::prufer_decode(n, seq));
}

inline Graph generate(const GraphSpec& spec, std::uint64_t seed) {
  if (spec.n < 1) throw std::invalid_argument("graph spec requires n >= 1");
  switch (spec.family) {
    case GraphFamily::barabasi_albert:
      return generate_barabasi_albert(spec.n, spec.m, seed);
    case GraphFamily::gnp:
      return generate_gnp(spec.n, spec.edge_prob, seed);
    case GraphFamily::power_law_tree:
      return generate_power_law_tree(spec.n, spec.exponent, seed);
    case GraphFamily::uniform_random_tree:
      return generate_uniform_random_tree(spec.n, seed);
    case GraphFamily::clique:
      return make_clique(spec.n);
    case GraphFamily::clique_minus_edge:
      return make_clique_minus_edge(spec.n);
    case GraphFamily::path:
      return make_path(spec.n);
    case GraphFamily::custom_edge_list:
      return Graph(spec.n, spec.edges);
  }
  throw std::invalid_argument("unknown graph family");
}

}  // namespace traceinfer
