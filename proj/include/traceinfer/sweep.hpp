#pragma once
// Batch evaluation: a sweep runs a list of cells, where each cell fully
// pins one experiment (graph family + parameters + graph seed, cascade
// parameters, algorithm, trace count, run seed) and yields one CSV row of
// edge-recovery scores. Rows contain no wall-clock fields, so a cell's row
// is a pure function of the cell; finished rows are cached on disk keyed
// by a canonical cell string and reused byte-identically on repeat runs.
//
// Reproducibility: the trace simulation master seed is the cell's run
// seed, so two cells differing only in trace count share a common trace
// prefix. The thinning stage of the degree-weighted first-edge variant
// draws from a stream derived from (run_seed, 1).

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <unistd.h>

#include "traceinfer/bounded_degree.hpp"
#include "traceinfer/cascade.hpp"
#include "traceinfer/degree.hpp"
#include "traceinfer/eval.hpp"
#include "traceinfer/first_edge.hpp"
#include "traceinfer/format.hpp"
#include "traceinfer/generators.hpp"
#include "traceinfer/graph.hpp"
#include "traceinfer/rng.hpp"
#include "traceinfer/tree.hpp"

namespace traceinfer {

struct SweepCell {
  GraphSpec graph;            // family, size and family parameters
  std::uint64_t graph_seed = 0;
  double lambda = 1.0;
  double p = 1.0;
  std::string algo;           // first-edge | first-edge+ | tree | bdd
  int ell = 0;                // number of traces
  std::uint64_t run_seed = 0;
};

struct SweepOptions {
  int threads = 0;            // 0: hardware concurrency
  std::string cache_dir;      // empty: $TRACEINFER_CACHE_DIR, else no cache
  int delta_max = 4;          // bdd neighborhood size bound
  double insert_threshold = 0.5;  // first-edge+ insertion threshold
};

inline const char* sweep_csv_header() {
  return "family,n,graph_seed,lambda,p,algo,ell,run_seed,tp,fp,fn,precision,recall,f1";
}

namespace detail {

inline std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string hex16(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i) {
    s[i] = digits[v & 0xf];
    v >>= 4;
  }
  return s;
}

}  // namespace detail

// Canonical cell description; the cache key and the row are derived from it.
inline std::string cell_key(const SweepCell& c, const SweepOptions& opts) {
  std::string s;
  s += "family=";
  s += family_name(c.graph.family);
  s += ",n=" + std::to_string(c.graph.n);
  s += ",m=" + std::to_string(c.graph.m);
  s += ",prob=";
  append_double(s, c.graph.edge_prob);
  s += ",exp=";
  append_double(s, c.graph.exponent);
  s += ",gseed=" + std::to_string(c.graph_seed);
  s += ",lambda=";
  append_double(s, c.lambda);
  s += ",p=";
  append_double(s, c.p);
  s += ",algo=" + c.algo;
  s += ",ell=" + std::to_string(c.ell);
  s += ",rseed=" + std::to_string(c.run_seed);
  if (c.algo == "bdd") s += ",dmax=" + std::to_string(opts.delta_max);
  if (c.algo == "first-edge+") {
    s += ",thr=";
    append_double(s, opts.insert_threshold);
  }
  return s;
}

inline void validate_cell(const SweepCell& c) {
  if (c.graph.family == GraphFamily::custom_edge_list && c.graph.edges.empty())
    throw std::invalid_argument("custom graph cell has no edges");
  if (!(c.lambda > 0.0)) throw std::invalid_argument("rate must be positive");
  if (!(c.p > 0.0 && c.p <= 1.0))
    throw std::invalid_argument("transmission probability must be in (0, 1]");
  if (c.ell < 0) throw std::invalid_argument("negative trace count");
  if (c.algo != "first-edge" && c.algo != "first-edge+" && c.algo != "tree" &&
      c.algo != "bdd")
    throw std::invalid_argument("unknown algorithm: " + c.algo);
  if (c.algo == "tree" && c.p != 1.0)
    throw std::invalid_argument("tree reconstruction requires p = 1");
}

// Runs one cell from scratch and formats its CSV row.
inline std::string run_cell(const SweepCell& c, const SweepOptions& opts) {
  validate_cell(c);
  const Graph g = generate(c.graph, c.graph_seed);
  const CascadeParams params{c.lambda, c.p};
  const TraceSet ts =
      simulate_many(g, params, SourcePolicy::uniform(), c.ell, c.run_seed, 1);

  InferenceResult result;
  if (c.algo == "first-edge") {
    result = first_edge(ts);
  } else if (c.algo == "first-edge+") {
    DegreeAccumulator acc(g.n());
    for (const Trace& t : ts.traces) acc.feed(t);
    FirstEdgePlusConfig cfg;
    cfg.insert_threshold = opts.insert_threshold;
    cfg.degree_estimate.resize(g.n(), 1.0);
    for (int v = 0; v < g.n(); ++v)
      if (auto d = acc.estimate(v, c.lambda)) cfg.degree_estimate[v] = *d;
    result = first_edge_plus(ts, cfg, derive_stream_seed(c.run_seed, 1));
  } else if (c.algo == "tree") {
    result = reconstruct_tree(ts);
  } else {
    ScoreConfig cfg;
    cfg.delta_max = opts.delta_max;
    cfg.delta_cap = opts.delta_max;
    result = reconstruct_bdd(ts, cfg, 1);
  }
  const EvalReport report = evaluate(result, g);

  std::string row;
  row += family_name(c.graph.family);
  row += ',' + std::to_string(c.graph.n);
  row += ',' + std::to_string(c.graph_seed);
  row += ',';
  append_double(row, c.lambda);
  row += ',';
  append_double(row, c.p);
  row += ',' + c.algo;
  row += ',' + std::to_string(c.ell);
  row += ',' + std::to_string(c.run_seed);
  row += ',' + std::to_string(report.true_positives);
  row += ',' + std::to_string(report.false_positives);
  row += ',' + std::to_string(report.false_negatives);
  row += ',';
  append_double(row, report.precision);
  row += ',';
  append_double(row, report.recall);
  row += ',';
  append_double(row, report.f1);
  return row;
}

namespace detail {

inline std::string effective_cache_dir(const SweepOptions& opts) {
  if (!opts.cache_dir.empty()) return opts.cache_dir;
  if (const char* env = std::getenv("TRACEINFER_CACHE_DIR")) return env;
  return {};
}

// Returns the cached row for the key, or empty if absent or unusable.
inline std::string cache_lookup(const std::filesystem::path& file,
                                const std::string& key) {
  std::ifstream in(file);
  if (!in) return {};
  std::string stored_key, row, extra;
  if (!std::getline(in, stored_key) || !std::getline(in, row) ||
      std::getline(in, extra) || stored_key != key || row.empty()) {
    std::cerr << "warning: ignoring unusable cache entry " << file.string()
              << "\n";
    return {};
  }
  return row;
}

inline void cache_store(const std::filesystem::path& dir,
                        const std::filesystem::path& file,
                        const std::string& key, const std::string& row) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  const std::filesystem::path tmp =
      file.string() + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::trunc);
    out << key << '\n' << row << '\n';
    if (!out) {
      std::cerr << "warning: could not write cache entry " << tmp.string()
                << "\n";
      std::filesystem::remove(tmp, ec);
      return;
    }
  }
  std::filesystem::rename(tmp, file, ec);  // atomic within the directory
  if (ec) {
    std::cerr << "warning: could not publish cache entry " << file.string()
              << ": " << ec.message() << "\n";
    std::filesystem::remove(tmp, ec);
  }
}

}  // namespace detail

// Runs all cells (cached cells are read back instead of recomputed) and
// returns one row per cell, in input order.
inline std::vector<std::string> run_sweep(const std::vector<SweepCell>& cells,
                                          const SweepOptions& opts = {}) {
  for (const SweepCell& c : cells) validate_cell(c);
  if (cells.empty()) return {};
  const std::string cache_root = detail::effective_cache_dir(opts);

  std::vector<std::string> rows(cells.size());
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr error;

  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= cells.size()) return;
      const std::string key = cell_key(cells[i], opts);
      std::filesystem::path file;
      if (!cache_root.empty()) {
        file = std::filesystem::path(cache_root) /
               (detail::hex16(detail::fnv1a64(key)) + ".row");
        const std::string cached = detail::cache_lookup(file, key);
        if (!cached.empty()) {
          rows[i] = cached;
          continue;
        }
      }
      try {
        rows[i] = run_cell(cells[i], opts);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(cells.size());
        return;
      }
      if (!cache_root.empty())
        detail::cache_store(cache_root, file, key, rows[i]);
    }
  };

  int threads = opts.threads > 0
                    ? opts.threads
                    : static_cast<int>(std::thread::hardware_concurrency());
  if (threads < 1) threads = 1;
  if (static_cast<std::size_t>(threads) > cells.size())
    threads = static_cast<int>(cells.size());
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);
  return rows;
}

inline void write_sweep_csv(std::ostream& out,
                            const std::vector<std::string>& rows) {
  out << sweep_csv_header() << '\n';
  for (const std::string& row : rows) out << row << '\n';
}

inline void write_sweep_csv(const std::filesystem::path& path,
                            const std::vector<std::string>& rows) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  write_sweep_csv(out, rows);
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

}  // namespace traceinfer
