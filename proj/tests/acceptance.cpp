// Acceptance gate. Each criterion prints exactly one line:
//
//   ACCEPTANCE <k> PASS: <detail>
//   ACCEPTANCE <k> FAIL: <detail>
//
// and the process exits nonzero if the selected criterion fails. Every
// tolerance, trial count, and wall-clock budget is pinned here; nothing is
// read from the environment. Run with a criterion number 1..8, or no
// argument to run all of them.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "test_support.hpp"
#include "traceinfer/traceinfer.hpp"

using namespace traceinfer;

namespace {

struct Outcome {
  bool ok = false;
  std::string detail;
};

std::string fmt(double x, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  return buf;
}

// ---------------------------------------------------------------- criterion 1
// Simulator timestamps equal an independent shortest-path oracle on 1000
// random (graph, seed) cases, bit for bit; and the first infection gap on a
// star matches the pooled-exponential mean 1/(d*lambda) within 2% over 1e5
// samples.
Outcome criterion_simulator() {
  const int cases = 1000;
  int exact = 0;
  RngStream shape(310001);
  for (int i = 0; i < cases; ++i) {
    Graph g;
    switch (shape.uniform_below(4)) {
      case 0: g = generate_gnp(8 + static_cast<int>(shape.uniform_below(25)),
                               0.2 + 0.4 * shape.uniform_unit(), shape.uniform_below(1u << 30));
        break;
      case 1: g = generate_uniform_random_tree(
                  2 + static_cast<int>(shape.uniform_below(30)), shape.uniform_below(1u << 30));
        break;
      case 2: g = generate_barabasi_albert(6 + static_cast<int>(shape.uniform_below(30)), 2,
                                           shape.uniform_below(1u << 30));
        break;
      default: g = make_cycle(3 + static_cast<int>(shape.uniform_below(30))); break;
    }
    const CascadeParams params{0.25 + 2.0 * shape.uniform_unit(),
                               shape.uniform_below(2) ? 1.0 : 0.5 + 0.5 * shape.uniform_unit()};
    RngStream rng(derive_stream_seed(310002, i));
    const SampledCascade run =
        simulate_one_sampled(g, params, SourcePolicy::uniform(), rng);
    const std::vector<double> dist =
        test_support::bellman_ford_times(g, run.kept, run.length, run.source);

    bool match = true;
    std::size_t reachable = 0;
    for (double d : dist) reachable += std::isfinite(d);
    if (reachable != run.trace.events.size()) match = false;
    for (const auto& [node, time] : run.trace.events)
      if (time != dist[node]) match = false;
    exact += match;
  }

  const int d = 8;
  const double lambda = 1.0;
  const Graph star = make_star(d);
  const long long samples = 100000;
  double gap_sum = 0.0;
  simulate_for_each(star, CascadeParams{lambda, 1.0}, SourcePolicy::fixed(0), samples,
                    310003,
                    [&](long long, const Trace& t) {
                      gap_sum += t.events[1].time - t.events[0].time;
                    });
  const double mean = gap_sum / samples;
  const double expect = 1.0 / (d * lambda);
  const double rel = std::abs(mean - expect) / expect;

  Outcome out;
  out.ok = exact == cases && rel <= 0.02;
  out.detail = std::to_string(exact) + "/" + std::to_string(cases) +
               " oracle-exact; star first-gap mean " + fmt(mean, 5) + " vs " +
               fmt(expect, 5) + " (rel err " + fmt(rel, 5) + ", limit 0.02)";
  return out;
}

// ---------------------------------------------------------------- criterion 2
// First-edge reconstruction of the cycle n=16 from ceil(3 n Delta ln n)
// traces: perfect in at least 95 of 100 seeds, precision 1 in all of them.
Outcome criterion_first_edge() {
  const int n = 16;
  const int delta = 2;
  const long long ell =
      static_cast<long long>(std::ceil(3.0 * n * delta * std::log(n)));  // 267
  const Graph g = make_cycle(n);
  int perfect = 0, precision_one = 0;
  for (int seed = 0; seed < 100; ++seed) {
    const TraceSet ts = simulate_many(g, {1.0, 1.0}, SourcePolicy::uniform(), ell,
                                      derive_stream_seed(320001, seed));
    const EvalReport r = evaluate(first_edge(ts), g);
    perfect += r.f1 == 1.0;
    precision_one += r.precision == 1.0;
  }
  Outcome out;
  out.ok = perfect >= 95 && precision_one == 100;
  out.detail = "ell=" + std::to_string(ell) + ": perfect " + std::to_string(perfect) +
               "/100 (need >=95), precision=1 in " + std::to_string(precision_one) +
               "/100 (need 100)";
  return out;
}

// ---------------------------------------------------------------- criterion 3
// Degree estimation. (a) star of degree 10, 2000 traces sourced at the hub:
// relative error at most 10% in at least 95 of 100 seeds. (b) cycle n=256
// with 10n uniformly-sourced traces: KS distance between true and estimated
// degree CCDFs at most 0.05.
Outcome criterion_degree() {
  const int d = 10;
  const Graph star = make_star(d);
  int close = 0;
  for (int seed = 0; seed < 100; ++seed) {
    const TraceSet ts = simulate_many(star, {1.0, 1.0}, SourcePolicy::fixed(0), 2000,
                                      derive_stream_seed(330001, seed));
    const double est = estimate_degree(ts, 0);
    close += std::abs(est - d) / d <= 0.1;
  }

  const int n = 256;
  const Graph cycle = make_cycle(n);
  const TraceSet ts =
      simulate_many(cycle, {1.0, 1.0}, SourcePolicy::uniform(), 10LL * n, 330002);
  const DistributionEstimate dist = estimate_distribution(ts, &cycle);
  double ks = 0.0;
  for (const CcdfRow& row : dist.table)
    ks = std::max(ks, std::abs(row.ccdf_true - row.ccdf_estimated));

  Outcome out;
  out.ok = close >= 95 && ks <= 0.05;
  out.detail = "star rel-err<=0.1 in " + std::to_string(close) +
               "/100 (need >=95); cycle ccdf ks " + fmt(ks) + " (limit 0.05)";
  return out;
}

// ---------------------------------------------------------------- criterion 4
// Tree reconstruction: uniform random trees n=128 from 64 traces, perfect in
// at least 95 of 100 seeds, and strictly fewer failures at 64 traces than at
// 16 (paired trace prefixes).
Outcome criterion_tree() {
  const int n = 128;
  int fail64 = 0, fail16 = 0;
  for (int seed = 0; seed < 100; ++seed) {
    const Graph g = generate_uniform_random_tree(n, derive_stream_seed(340001, seed));
    const TraceSet ts = simulate_many(g, {1.0, 1.0}, SourcePolicy::uniform(), 64,
                                      derive_stream_seed(340002, seed));
    fail64 += reconstruct_tree(ts).edges != g.edges();
    TraceSet head = ts;
    head.traces.resize(16);
    fail16 += reconstruct_tree(head).edges != g.edges();
  }
  Outcome out;
  out.ok = (100 - fail64) >= 95 && fail64 < fail16;
  out.detail = "perfect " + std::to_string(100 - fail64) +
               "/100 at ell=64 (need >=95); failures 64 vs 16 traces: " +
               std::to_string(fail64) + " < " + std::to_string(fail16);
  return out;
}

// ---------------------------------------------------------------- criterion 5
// Bounded-degree reconstruction on 3-regular graphs n=16 at the calibrated
// trace count: perfect in at least 90 of 100 seeds. Score-gap check on a
// fixed 3-regular n=8 instance at 1e4 traces: the true neighborhood beats
// every other candidate set by a clear margin.
Outcome criterion_bounded_degree() {
  const long long ell_star = 5000;  // calibrated once; see calibrate_main.cpp
  // Calibration found every alternative set scores -inf at 1e4 traces (each
  // fails to explain at least one trace), so the measured gap is infinite;
  // any positive margin documents the separation without being tight.
  const double gap_margin = 0.01;
  int perfect = 0;
  for (int seed = 0; seed < 100; ++seed) {
    RngStream gr(derive_stream_seed(350001, seed));
    const Graph g = test_support::random_regular_graph(16, 3, gr);
    const TraceSet ts = simulate_many(g, {1.0, 1.0}, SourcePolicy::uniform(), ell_star,
                                      derive_stream_seed(350002, seed));
    ScoreConfig cfg;
    cfg.delta_max = 3;
    cfg.delta_cap = 3;
    perfect += reconstruct_bdd(ts, cfg).edges == g.edges();
  }

  RngStream gr(350003);
  const Graph g8 = test_support::random_regular_graph(8, 3, gr);
  const TraceSet ts8 =
      simulate_many(g8, {1.0, 1.0}, SourcePolicy::uniform(), 10000, 350004);
  ScoreConfig cfg8;
  cfg8.delta_max = 3;
  cfg8.delta_cap = 3;
  double min_gap = std::numeric_limits<double>::infinity();
  for (int u = 0; u < g8.n(); ++u) {
    std::vector<int> truth;
    for (const auto& [v, e] : g8.adjacent(u)) truth.push_back(v);
    std::sort(truth.begin(), truth.end());
    const double true_score = score_set(ts8, u, truth, cfg8);
    // Every other candidate set of size at most 3.
    std::vector<int> others;
    for (int v = 0; v < g8.n(); ++v)
      if (v != u) others.push_back(v);
    for (unsigned mask = 0; mask < (1u << others.size()); ++mask) {
      std::vector<int> s;
      for (std::size_t b = 0; b < others.size(); ++b)
        if (mask & (1u << b)) s.push_back(others[b]);
      if (s.size() > 3 || s == truth) continue;
      min_gap = std::min(min_gap, true_score - score_set(ts8, u, s, cfg8));
    }
  }

  Outcome out;
  out.ok = perfect >= 90 && min_gap > gap_margin;
  out.detail = "perfect " + std::to_string(perfect) + "/100 at ell=" +
               std::to_string(ell_star) + " (need >=90); min score gap " +
               fmt(min_gap) + " (margin " + fmt(gap_margin) + ")";
  return out;
}

// ---------------------------------------------------------------- criterion 6
// Position-pair table: normalization to 1e-9, the impossible cell exactly at
// discrepancy -1, Monte-Carlo agreement at n=10 over 1e6 traces within 4
// sigma per cell, and near-chance guessing at n=32 from 10 traces.
Outcome criterion_lower_bound() {
  double worst_norm = 0.0;
  for (int n : {5, 10, 50}) {
    const PositionTable t = exact_pab(n);
    double sum = 0.0;
    for (double v : t.p) sum += v;
    worst_norm = std::max(worst_norm, std::abs(sum - 1.0));
  }
  const bool d12_exact = exact_pab(10).discrepancy(1, 2) == -1.0;

  const int n = 10;
  const long traces = 1000000;
  const PositionTable t = exact_pab(n);
  const std::vector<long> counts = observed_pair_counts(n, traces, 360001);
  double worst_z = 0.0;
  bool impossible_clean = true;
  for (int a = 1; a < n; ++a)
    for (int b = a + 1; b <= n; ++b) {
      const double p = t.at(a, b);
      const long c = counts[t.index(a, b)];
      if (p == 0.0) {
        impossible_clean = impossible_clean && c == 0;
        continue;
      }
      worst_z = std::max(worst_z,
                         std::abs(c - traces * p) / std::sqrt(traces * p * (1.0 - p)));
    }

  GuessConfig cfg;
  cfg.n = 32;
  cfg.traces_per_trial = 10;
  cfg.trials = 2000;
  const GuessResult guess = guess_experiment(cfg, 360002);

  Outcome out;
  out.ok = worst_norm <= 1e-9 && d12_exact && impossible_clean && worst_z < 4.0 &&
           guess.success_rate <= 0.6;
  out.detail = "norm err " + fmt(worst_norm, 12) + " (limit 1e-9); d(1,2)-exact " +
               (d12_exact ? "yes" : "no") + "; mc worst z " + fmt(worst_z, 2) +
               " (limit 4); guess rate " + fmt(guess.success_rate) + " (limit 0.6)";
  return out;
}

// ---------------------------------------------------------------- criterion 7
// Experiment replica on a power-law tree with 1024 nodes: first-edge reaches
// F1 >= 0.99 somewhere in [3000, 10000] traces; the tree algorithm is exact
// by 200 traces.
Outcome criterion_experiment() {
  const Graph g = generate_power_law_tree(1024, 3.0, 370001);
  const TraceSet full =
      simulate_many(g, {1.0, 1.0}, SourcePolicy::uniform(), 10000, 370002);

  double best_f1 = 0.0;
  long long best_ell = 0;
  for (long long ell : {3000LL, 5000LL, 10000LL}) {
    TraceSet head = full;
    head.traces.resize(ell);
    const double f1 = evaluate(first_edge(head), g).f1;
    if (f1 > best_f1) {
      best_f1 = f1;
      best_ell = ell;
    }
  }

  TraceSet head = full;
  head.traces.resize(200);
  const double tree_f1 = evaluate(reconstruct_tree(head), g).f1;

  Outcome out;
  out.ok = best_f1 >= 0.99 && tree_f1 == 1.0;
  out.detail = "first-edge best f1 " + fmt(best_f1) + " at ell=" +
               std::to_string(best_ell) + " (need >=0.99 in [3000,10000]); tree f1 " +
               fmt(tree_f1) + " at ell=200 (need 1)";
  return out;
}

// ---------------------------------------------------------------- criterion 8
// Persistence: save/load round-trip identity on 1e4 fuzzed trace sets.
Outcome criterion_persistence() {
  std::mt19937_64 rd(380001);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int identical = 0;
  const int sets = 10000;
  for (int i = 0; i < sets; ++i) {
    TraceSet ts;
    ts.n = 2 + static_cast<int>(rd() % 10);
    ts.params.lambda = std::exp(6.0 * unit(rd) - 3.0);
    ts.params.p = rd() % 2 ? 1.0 : 0.3 + 0.7 * unit(rd);
    if (rd() % 3 == 0) ts.graph_id = "fuzz-" + std::to_string(rd() % 1000);
    const int count = static_cast<int>(rd() % 6);
    for (int k = 0; k < count; ++k) {
      std::vector<int> nodes(ts.n);
      for (int v = 0; v < ts.n; ++v) nodes[v] = v;
      std::shuffle(nodes.begin(), nodes.end(), rd);
      const int len = 1 + static_cast<int>(rd() % ts.n);
      Trace t;
      double time = 0.0;
      for (int e = 0; e < len; ++e) {
        t.events.push_back({nodes[e], time});
        time += 0.01 + unit(rd);
      }
      ts.traces.push_back(std::move(t));
    }
    const std::string text = save_to_string(ts);
    const TraceSet back = load_from_string(text);
    identical += back == ts && save_to_string(back) == text;
  }
  Outcome out;
  out.ok = identical == sets;
  out.detail = std::to_string(identical) + "/" + std::to_string(sets) +
               " round-trips identical";
  return out;
}

// -----------------------------------------------------------------------------

struct Criterion {
  const char* name;
  Outcome (*run)();
  double budget_seconds;
};

const Criterion kCriteria[] = {
    {"simulator oracle", criterion_simulator, 60},
    {"first-edge cycle", criterion_first_edge, 60},
    {"degree estimation", criterion_degree, 120},
    {"tree reconstruction", criterion_tree, 180},
    {"bounded-degree reconstruction", criterion_bounded_degree, 600},
    {"indistinguishability lab", criterion_lower_bound, 300},
    {"experiment replica", criterion_experiment, 600},
    {"trace persistence", criterion_persistence, 120},
};

bool run_one(int index) {
  const Criterion& c = kCriteria[index - 1];
  const auto start = std::chrono::steady_clock::now();
  Outcome out;
  try {
    out = c.run();
  } catch (const std::exception& e) {
    out.ok = false;
    out.detail = std::string("exception: ") + e.what();
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool in_budget = secs < c.budget_seconds;
  const bool pass = out.ok && in_budget;
  std::printf("ACCEPTANCE %d %s: %s — %s [%.1fs, budget %.0fs]\n", index,
              pass ? "PASS" : "FAIL", c.name, out.detail.c_str(), secs,
              c.budget_seconds);
  std::fflush(stdout);
  return pass;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 2) {
    std::fprintf(stderr, "usage: %s [criterion 1-8]\n", argv[0]);
    return 2;
  }
  if (argc == 2) {
    const int k = std::atoi(argv[1]);
    if (k < 1 || k > 8) {
      std::fprintf(stderr, "usage: %s [criterion 1-8]\n", argv[0]);
      return 2;
    }
    return run_one(k) ? 0 : 1;
  }
  int failures = 0;
  for (int k = 1; k <= 8; ++k) failures += !run_one(k);
  return failures == 0 ? 0 : 1;
}
