#pragma once
// First-edge reconstruction.
//
// The first two infected nodes of a trace are always adjacent: the second
// infection must have arrived over an edge from the first. Collecting the
// leading pair of every trace therefore yields edges of the true graph
// only (precision 1 on model traces), and with enough traces every edge
// eventually leads some cascade.
//
// The "+" variant spends an edge budget derived from degree estimates:
// scanning each trace in infection order, the (k+1)-th infected node is
// attributed to prefix node u_i with probability proportional to u_i's
// degree estimate, and the pair is inserted when that probability reaches
// the insert threshold. A temperature M / E-hat (inferred edges over the
// degree-sum budget) randomly evicts the least confident inferred edge as
// the budget fills, and the scan stops once the budget is reached.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "traceinfer/eval.hpp"
#include "traceinfer/rng.hpp"
#include "traceinfer/trace.hpp"

namespace traceinfer {

class FirstEdgeEngine {
 public:
  // Traces with fewer than two events carry no pair and are counted, not used.
  void feed(const Trace& t) {
    if (t.events.size() < 2) {
      ++skipped_;
      return;
    }
    edges_.insert(normalize_edge(t.events[0].node, t.events[1].node));
  }

  long skipped_traces() const { return skipped_; }
  std::size_t edge_count() const { return edges_.size(); }
  const std::set<Edge>& edges() const { return edges_; }

  InferenceResult finalize() const {
    InferenceResult r;
    r.edges.assign(edges_.begin(), edges_.end());
    r.algorithm = "first-edge";
    r.params = "skipped=" + std::to_string(skipped_);
    return r;
  }

 private:
  std::set<Edge> edges_;
  long skipped_ = 0;
};

inline InferenceResult first_edge(const TraceSet& ts) {
  const auto start = std::chrono::steady_clock::now();
  FirstEdgeEngine engine;
  for (const Trace& t : ts.traces) engine.feed(t);
  InferenceResult r = engine.finalize();
  r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

struct FirstEdgePlusConfig {
  std::vector<double> degree_estimate;  // per node, >= 0, raw (not rounded)
  double insert_threshold = 0.5;        // minimum attribution probability
  double edge_budget = 0.0;             // E-hat; <= 0 derives sum(d)/2
};

class FirstEdgePlusEngine {
 public:
  FirstEdgePlusEngine(const FirstEdgePlusConfig& cfg, std::uint64_t seed)
      : cfg_(cfg), rng_(seed) {
    if (!(cfg_.insert_threshold > 0.0) || cfg_.insert_threshold > 1.0)
      throw std::invalid_argument("insert threshold must be in (0, 1]");
    for (double d : cfg_.degree_estimate)
      if (!(d >= 0.0)) throw std::invalid_argument("degree estimates must be >= 0");
    if (cfg_.edge_budget <= 0.0) {
      double sum = 0.0;
      for (double d : cfg_.degree_estimate) sum += d;
      cfg_.edge_budget = sum / 2.0;
    }
    if (!(cfg_.edge_budget > 0.0))
      throw std::invalid_argument("edge budget must be positive");
  }

  // Returns false once the budget temperature reached 1 and the scan stopped.
  bool feed(const Trace& t) {
    if (stopped_) return false;
    if (t.events.size() < 2) {
      ++skipped_;
      return true;
    }
    const auto& ev = t.events;
    const auto& dhat = cfg_.degree_estimate;
    double sum = 0.0;
    double max_d = -1.0;
    for (std::size_t k = 1; k < ev.size() && !stopped_; ++k) {
      const int prev = ev[k - 1].node;
      if (prev >= static_cast<int>(dhat.size()))
        throw std::invalid_argument("degree estimates do not cover node " +
                                    std::to_string(prev));
      sum += dhat[prev];
      max_d = std::max(max_d, dhat[prev]);
      if (!(sum > 0.0)) continue;
      // Only prefix nodes with estimate >= threshold * sum can qualify;
      // testing the running max first keeps the scan near-linear.
      if (max_d < cfg_.insert_threshold * sum) continue;
      const int arrival = ev[k].node;
      for (std::size_t i = 0; i < k && !stopped_; ++i) {
        const double prob = dhat[ev[i].node] / sum;
        if (prob >= cfg_.insert_threshold)
          insert(normalize_edge(ev[i].node, arrival), prob);
      }
    }
    return !stopped_;
  }

  long skipped_traces() const { return skipped_; }
  bool stopped() const { return stopped_; }
  double edge_budget() const { return cfg_.edge_budget; }

  InferenceResult finalize() const {
    InferenceResult r;
    r.edges.reserve(edges_.size());
    r.confidence.reserve(edges_.size());
    for (const auto& [e, state] : edges_) {
      r.edges.push_back(e);
      r.confidence.push_back(state.prob);
    }
    r.algorithm = "first-edge+";
    r.params = "threshold=" + std::to_string(cfg_.insert_threshold) +
               " budget=" + std::to_string(cfg_.edge_budget) +
               " skipped=" + std::to_string(skipped_) +
               " evicted=" + std::to_string(evicted_);
    return r;
  }

 private:
  struct EdgeState {
    double prob;
    long long seq;  // insertion order, used to break eviction ties (oldest goes)
  };

  void insert(Edge e, double prob) {
    auto it = edges_.find(e);
    if (it != edges_.end()) {
      // Re-derived edges keep their best attribution; no budget step.
      it->second.prob = std::max(it->second.prob, prob);
      return;
    }
    edges_.emplace(e, EdgeState{prob, seq_++});
    const double temperature = static_cast<double>(edges_.size()) / cfg_.edge_budget;
    if (temperature >= 1.0) {
      stopped_ = true;
      return;
    }
    if (rng_.bernoulli(temperature)) {
      // Evict the least confident previously inferred edge (not the one
      // just inserted); ties evict the oldest.
      auto victim = edges_.end();
      for (auto jt = edges_.begin(); jt != edges_.end(); ++jt) {
        if (jt->first == e) continue;
        if (victim == edges_.end() || jt->second.prob < victim->second.prob ||
            (jt->second.prob == victim->second.prob && jt->second.seq < victim->second.seq))
          victim = jt;
      }
      if (victim != edges_.end()) {
        edges_.erase(victim);
        ++evicted_;
      }
    }
  }

  FirstEdgePlusConfig cfg_;
  RngStream rng_;
  std::map<Edge, EdgeState> edges_;
  long long seq_ = 0;
  long skipped_ = 0;
  long evicted_ = 0;
  bool stopped_ = false;
};

inline InferenceResult first_edge_plus(const TraceSet& ts, const FirstEdgePlusConfig& cfg,
                                       std::uint64_t seed) {
  const auto start = std::chrono::steady_clock::now();
  FirstEdgePlusEngine engine(cfg, seed);
  for (const Trace& t : ts.traces)
    if (!engine.feed(t)) break;
  InferenceResult r = engine.finalize();
  r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace traceinfer
