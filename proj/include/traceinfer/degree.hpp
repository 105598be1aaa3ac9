#pragma once
// Degree estimation from first-infection gaps.
//
// From a source of degree d, the wait until the first neighbor fires is the
// minimum of d independent Exp(lambda) clocks, i.e. Exp(d * lambda). Over
// the l traces sourced at a node, the summed gaps T follow an Erlang(l,
// d * lambda) law, and d is estimated by l / (T * lambda). Only traces that
// start at the node contribute; lambda comes from the trace set parameters.
// With p < 1 the observed rate counts transmitting edges only, so estimates
// trend toward p * d; results carry a flag when that applies.

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "traceinfer/format.hpp"
#include "traceinfer/graph.hpp"
#include "traceinfer/trace.hpp"

namespace traceinfer {

// One pass over traces, accumulating per-source gap sums.
class DegreeAccumulator {
 public:
  explicit DegreeAccumulator(int n) : count_(n, 0), gap_sum_(n, 0.0) {}

  void feed(const Trace& t) {
    if (t.events.size() < 2) return;  // a lone source shows no gap
    const int src = t.events[0].node;
    ++count_[src];
    gap_sum_[src] += t.events[1].time - t.events[0].time;
  }

  long traces_for(int node) const { return count_[node]; }

  // l / (T * lambda); nullopt when no trace started at the node.
  std::optional<double> estimate(int node, double lambda) const {
    if (count_[node] == 0) return std::nullopt;
    return static_cast<double>(count_[node]) / (gap_sum_[node] * lambda);
  }

 private:
  std::vector<long> count_;
  std::vector<double> gap_sum_;
};

inline double estimate_degree(const TraceSet& ts, int node) {
  if (node < 0 || node >= ts.n) throw std::invalid_argument("node out of range");
  DegreeAccumulator acc(ts.n);
  for (const Trace& t : ts.traces) acc.feed(t);
  const auto est = acc.estimate(node, ts.params.lambda);
  if (!est)
    throw std::invalid_argument("no trace sourced at node " + std::to_string(node));
  return *est;
}

// Round half up to a nonnegative integer, for the distribution table.
inline long round_degree(double estimate) {
  return static_cast<long>(std::floor(estimate + 0.5));
}

struct CcdfRow {
  long degree = 0;
  double ccdf_true = 0.0;       // fraction of nodes with true degree >= degree
  double ccdf_estimated = 0.0;  // fraction of estimated nodes with rounded estimate >= degree
};

struct DistributionEstimate {
  std::vector<std::optional<double>> estimate;  // per node; nullopt without traces
  long nodes_estimated = 0;
  bool partial_transmission = false;  // p < 1: estimates reflect p * degree
  std::vector<CcdfRow> table;         // empty unless truth was supplied
};

inline DistributionEstimate estimate_distribution(const TraceSet& ts,
                                                  const Graph* truth = nullptr) {
  if (truth && truth->n() != ts.n)
    throw std::invalid_argument("truth graph node count does not match traces");
  DistributionEstimate out;
  out.partial_transmission = ts.params.p < 1.0;
  DegreeAccumulator acc(ts.n);
  for (const Trace& t : ts.traces) acc.feed(t);
  out.estimate.resize(ts.n);
  long max_deg = 0;
  for (int v = 0; v < ts.n; ++v) {
    out.estimate[v] = acc.estimate(v, ts.params.lambda);
    if (out.estimate[v]) {
      ++out.nodes_estimated;
      max_deg = std::max(max_deg, round_degree(*out.estimate[v]));
    }
  }
  if (!truth) return out;
  for (int v = 0; v < truth->n(); ++v)
    max_deg = std::max(max_deg, static_cast<long>(truth->degree(v)));
  // CCDF at d is the fraction with degree >= d; row 0 is always 1.
  std::vector<long> true_at(max_deg + 1, 0), est_at(max_deg + 1, 0);
  for (int v = 0; v < truth->n(); ++v) ++true_at[truth->degree(v)];
  for (int v = 0; v < ts.n; ++v)
    if (out.estimate[v]) ++est_at[std::min(round_degree(*out.estimate[v]), max_deg)];
  out.table.resize(max_deg + 1);
  long true_tail = 0, est_tail = 0;
  for (long d = max_deg; d >= 0; --d) {
    true_tail += true_at[d];
    est_tail += est_at[d];
    out.table[d].degree = d;
    out.table[d].ccdf_true = static_cast<double>(true_tail) / truth->n();
    out.table[d].ccdf_estimated =
        out.nodes_estimated == 0 ? 0.0
                                 : static_cast<double>(est_tail) / out.nodes_estimated;
  }
  return out;
}

inline void write_ccdf_csv(const DistributionEstimate& est, std::ostream& os) {
  os << "degree,ccdf_true,ccdf_estimated\n";
  std::string line;
  for (const auto& row : est.table) {
    line = std::to_string(row.degree);
    line += ',';
    append_double(line, row.ccdf_true);
    line += ',';
    append_double(line, row.ccdf_estimated);
    line += '\n';
    os << line;
  }
}

}  // namespace traceinfer
