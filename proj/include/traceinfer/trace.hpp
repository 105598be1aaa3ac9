#pragma once
// Cascade traces: (node, timestamp) event sequences.
//
// A trace records the infection order of one cascade. The first event is the
// source at time 0; times are strictly increasing and each node appears at
// most once. A TraceSet bundles traces with the model parameters that
// produced them; inference algorithms read lambda and p from here.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace traceinfer {

struct CascadeParams {
  double lambda = 1.0;  // edge incubation rate; incubation ~ Exp(lambda)
  double p = 1.0;       // per-edge transmission probability
};

struct TraceEvent {
  int node = 0;
  double time = 0.0;

  friend bool operator==(const TraceEvent&, const TraceEvent&) = default;
};

struct Trace {
  std::vector<TraceEvent> events;

  int source() const { return events.front().node; }
  std::size_t size() const { return events.size(); }

  friend bool operator==(const Trace&, const Trace&) = default;
};

struct TraceSet {
  CascadeParams params;
  int n = 0;                // node id space of the underlying graph
  std::string graph_id;     // optional label naming the source graph
  std::vector<Trace> traces;

  std::size_t size() const { return traces.size(); }

  friend bool operator==(const TraceSet& a, const TraceSet& b) {
    return a.params.lambda == b.params.lambda && a.params.p == b.params.p &&
           a.n == b.n && a.graph_id == b.graph_id && a.traces == b.traces;
  }
};

// Where cascades start.
struct SourcePolicy {
  enum class Kind { uniform, fixed };
  Kind kind = Kind::uniform;
  int node = 0;

  static SourcePolicy uniform() { return {Kind::uniform, 0}; }
  static SourcePolicy fixed(int v) { return {Kind::fixed, v}; }
};

// Structural validity of a single trace against a node id space.
inline void validate_trace(const Trace& t, int n) {
  if (t.events.empty()) throw std::invalid_argument("trace has no events");
  if (t.events.front().time != 0.0)
    throw std::invalid_argument("trace must start at time 0");
  std::vector<char> seen(n, 0);
  double prev = -1.0;
  for (const auto& [node, time] : t.events) {
    if (node < 0 || node >= n)
      throw std::invalid_argument("trace node out of range: " + std::to_string(node));
    if (seen[node])
      throw std::invalid_argument("node repeats in trace: " + std::to_string(node));
    seen[node] = 1;
    if (!(time > prev))
      throw std::invalid_argument("trace times must be strictly increasing");
    prev = time;
  }
}

inline void validate(const TraceSet& ts) {
  if (!(ts.params.lambda > 0.0))
    throw std::invalid_argument("lambda must be positive");
  if (!(ts.params.p > 0.0) || ts.params.p > 1.0)
    throw std::invalid_argument("p must be in (0, 1]");
  if (ts.n < 1) throw std::invalid_argument("node count must be >= 1");
  for (const auto& t : ts.traces) validate_trace(t, ts.n);
}

}  // namespace traceinfer
