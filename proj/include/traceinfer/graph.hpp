#pragma once
// Undirected simple graphs on dense vertex ids 0..n-1.
//
// Edges are stored once as sorted (u, v) pairs with u < v; the adjacency
// lists carry (neighbor, edge index) so per-edge annotations (percolation
// flags, sampled lengths) live in arrays parallel to edges(). Graphs are
// immutable after construction.

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "traceinfer/errors.hpp"

namespace traceinfer {

using Edge = std::pair<int, int>;

inline Edge normalize_edge(int u, int v) {
  return u < v ? Edge{u, v} : Edge{v, u};
}

class Graph {
 public:
  Graph() = default;

  // Validates, normalizes to u < v, sorts, and rejects self-loops and
  // duplicates.
  Graph(int n, std::vector<Edge> edges) : n_(n) {
    if (n < 0) throw std::invalid_argument("node count must be nonnegative");
    for (auto& [u, v] : edges) {
      if (u < 0 || u >= n || v < 0 || v >= n)
        throw std::invalid_argument("edge endpoint out of range: (" +
                                    std::to_string(u) + ", " + std::to_string(v) + ")");
      if (u == v)
        throw std::invalid_argument("self-loop at node " + std::to_string(u));
      if (u > v) std::swap(u, v);
    }
    std::sort(edges.begin(), edges.end());
    if (std::adjacent_find(edges.begin(), edges.end()) != edges.end())
      throw std::invalid_argument("duplicate edge");
    edges_ = std::move(edges);
    adj_.assign(n_, {});
    for (int e = 0; e < static_cast<int>(edges_.size()); ++e) {
      adj_[edges_[e].first].push_back({edges_[e].second, e});
      adj_[edges_[e].second].push_back({edges_[e].first, e});
    }
    for (auto& nbrs : adj_) std::sort(nbrs.begin(), nbrs.end());
  }

  int n() const { return n_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  const std::vector<Edge>& edges() const { return edges_; }

  // (neighbor, index into edges()) pairs, sorted by neighbor.
  const std::vector<std::pair<int, int>>& adjacent(int u) const { return adj_[u]; }

  int degree(int u) const { return static_cast<int>(adj_[u].size()); }

  int max_degree() const {
    int d = 0;
    for (const auto& nbrs : adj_) d = std::max(d, static_cast<int>(nbrs.size()));
    return d;
  }

  bool has_edge(int u, int v) const {
    const Edge e = normalize_edge(u, v);
    return std::binary_search(edges_.begin(), edges_.end(), e);
  }

 private:
  int n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<std::pair<int, int>>> adj_;
};

struct EdgeSetDiff {
  long true_positives = 0;
  long false_positives = 0;
  long false_negatives = 0;
};

// Set difference counts between a predicted and a reference edge set.
// Both inputs are normalized and deduplicated before comparison.
inline EdgeSetDiff edge_set_diff(std::vector<Edge> predicted, std::vector<Edge> truth) {
  auto canon = [](std::vector<Edge>& es) {
    for (auto& [u, v] : es)
      if (u > v) std::swap(u, v);
    std::sort(es.begin(), es.end());
    es.erase(std::unique(es.begin(), es.end()), es.end());
  };
  canon(predicted);
  canon(truth);
  EdgeSetDiff d;
  std::size_t i = 0, j = 0;
  while (i < predicted.size() && j < truth.size()) {
    if (predicted[i] == truth[j]) {
      ++d.true_positives, ++i, ++j;
    } else if (predicted[i] < truth[j]) {
      ++d.false_positives, ++i;
    } else {
      ++d.false_negatives, ++j;
    }
  }
  d.false_positives += static_cast<long>(predicted.size() - i);
  d.false_negatives += static_cast<long>(truth.size() - j);
  return d;
}

// ---------------------------------------------------------------------------
// Edge-list file format:
//
//   file   := "n " INT LF line*
//   line   := INT " " INT LF          (an edge u v with 0 <= u < v < n)
//
// Duplicate edges, self-loops, out-of-range or unordered endpoints are
// rejected with the offending line number.
// ---------------------------------------------------------------------------

namespace detail {

inline bool parse_int_token(const std::string& s, std::size_t& pos, long long& out) {
  while (pos < s.size() && s[pos] == ' ') ++pos;
  const char* begin = s.data() + pos;
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(begin, end, out);
  if (ec != std::errc{} || ptr == begin) return false;
  pos = static_cast<std::size_t>(ptr - s.data());
  return true;
}

inline bool only_spaces_left(const std::string& s, std::size_t pos) {
  while (pos < s.size() && s[pos] == ' ') ++pos;
  return pos == s.size();
}

}  // namespace detail

inline void write_edge_list(const Graph& g, std::ostream& os) {
  os << "n " << g.n() << "\n";
  for (const auto& [u, v] : g.edges()) os << u << " " << v << "\n";
}

inline void write_edge_list(const Graph& g, const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write_edge_list(g, os);
  if (!os) throw std::runtime_error("write failed: " + path.string());
}

inline Graph read_edge_list(std::istream& is) {
  std::string line;
  long lineno = 0;
  if (!std::getline(is, line)) throw ParseError("empty file, expected 'n <count>' header", 1);
  ++lineno;
  long long n = -1;
  {
    if (line.rfind("n ", 0) != 0) throw ParseError("expected 'n <count>' header", lineno);
    std::size_t pos = 2;
    if (!detail::parse_int_token(line, pos, n) || !detail::only_spaces_left(line, pos) || n < 0)
      throw ParseError("malformed node count", lineno);
  }
  std::vector<Edge> edges;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) {
      if (is.peek() == std::char_traits<char>::eof()) break;
      throw ParseError("blank line", lineno);
    }
    std::size_t pos = 0;
    long long u, v;
    if (!detail::parse_int_token(line, pos, u) || !detail::parse_int_token(line, pos, v) ||
        !detail::only_spaces_left(line, pos))
      throw ParseError("expected 'u v' edge", lineno);
    if (u < 0 || v < 0 || u >= n || v >= n)
      throw ParseError("edge endpoint out of range", lineno);
    if (u == v) throw ParseError("self-loop", lineno);
    if (u > v) throw ParseError("edge endpoints must satisfy u < v", lineno);
    edges.push_back({static_cast<int>(u), static_cast<int>(v)});
  }
  std::vector<Edge> sorted = edges;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    // Rescan to report the line of the second occurrence.
    std::vector<Edge> seen;
    for (std::size_t i = 0; i < edges.size(); ++i) {
      if (std::find(seen.begin(), seen.end(), edges[i]) != seen.end())
        throw ParseError("duplicate edge", static_cast<long>(i) + 2);
      seen.push_back(edges[i]);
    }
  }
  return Graph(static_cast<int>(n), std::move(edges));
}

inline Graph read_edge_list(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open " + path.string());
  return read_edge_list(is);
}

}  // namespace traceinfer
