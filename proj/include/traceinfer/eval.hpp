#pragma once
// Scoring reconstructed edge sets against ground truth.

#include <cstdint>
#include <string>
#include <vector>

#include "traceinfer/graph.hpp"

namespace traceinfer {

// Output of any reconstruction algorithm.
struct InferenceResult {
  std::vector<Edge> edges;         // normalized u < v, sorted
  std::vector<double> confidence;  // optional, parallel to edges (empty if unused)
  std::string algorithm;
  std::string params;              // human-readable parameter summary
  double wall_seconds = 0.0;
};

struct EvalReport {
  long true_positives = 0;
  long false_positives = 0;
  long false_negatives = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  // Run metadata.
  std::string algorithm;
  std::uint64_t seed = 0;
  long long trace_count = 0;
  std::string graph_id;
};

// Conventions: an empty prediction has precision 0; an empty truth set has
// recall 1; F1 is 0 whenever precision + recall is 0.
inline EvalReport evaluate(const std::vector<Edge>& predicted, const Graph& truth) {
  const EdgeSetDiff d = edge_set_diff(predicted, truth.edges());
  EvalReport r;
  r.true_positives = d.true_positives;
  r.false_positives = d.false_positives;
  r.false_negatives = d.false_negatives;
  const long predicted_count = d.true_positives + d.false_positives;
  const long truth_count = d.true_positives + d.false_negatives;
  r.precision = predicted_count == 0
                    ? 0.0
                    : static_cast<double>(d.true_positives) / predicted_count;
  r.recall = truth_count == 0 ? 1.0
                              : static_cast<double>(d.true_positives) / truth_count;
  r.f1 = (r.precision + r.recall) == 0.0
             ? 0.0
             : 2.0 * r.precision * r.recall / (r.precision + r.recall);
  return r;
}

inline EvalReport evaluate(const InferenceResult& result, const Graph& truth) {
  EvalReport r = evaluate(result.edges, truth);
  r.algorithm = result.algorithm;
  return r;
}

}  // namespace traceinfer
