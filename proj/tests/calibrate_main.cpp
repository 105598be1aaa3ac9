// One-time calibration runs backing the constants pinned in acceptance.cpp.
// Not registered with ctest; run by hand when revisiting experiment scales.
// Every section reuses the exact seeds of the acceptance criterion it backs,
// so the numbers printed here are the numbers the gate will see.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <limits>
#include <vector>

#include "test_support.hpp"
#include "traceinfer/traceinfer.hpp"

using namespace traceinfer;

namespace {

double section_seconds() {
  using clock = std::chrono::steady_clock;
  static clock::time_point last = clock::now();
  const clock::time_point now = clock::now();
  const double dt = std::chrono::duration<double>(now - last).count();
  last = now;
  return dt;
}

// Trace-count sweep for bounded-degree reconstruction on 3-regular n=16
// graphs; backs the ell pinned in acceptance criterion 5.
void calibrate_bdd() {
  std::printf("== bounded-degree trace-count sweep (n=16, 3-regular) ==\n");
  const std::vector<long long> ells{2000, 3000, 5000, 8000};
  std::vector<int> perfect(ells.size(), 0);
  for (int seed = 0; seed < 100; ++seed) {
    RngStream gr(derive_stream_seed(350001, seed));
    const Graph g = test_support::random_regular_graph(16, 3, gr);
    const TraceSet full = simulate_many(g, {1.0, 1.0}, SourcePolicy::uniform(),
                                        ells.back(), derive_stream_seed(350002, seed));
    for (std::size_t i = 0; i < ells.size(); ++i) {
      TraceSet head = full;
      head.traces.resize(ells[i]);
      ScoreConfig cfg;
      cfg.delta_max = 3;
      cfg.delta_cap = 3;
      perfect[i] += reconstruct_bdd(head, cfg).edges == g.edges();
    }
  }
  for (std::size_t i = 0; i < ells.size(); ++i)
    std::printf("  ell=%-6lld perfect=%d/100\n", ells[i], perfect[i]);
  std::printf("  [%.1fs]\n", section_seconds());
}

// Minimum score gap between the true neighborhood and every other candidate
// set on the frozen n=8 instance; backs the margin in criterion 5.
void calibrate_gap() {
  std::printf("== score gap, frozen 3-regular n=8 instance, ell=10000 ==\n");
  RngStream gr(350003);
  const Graph g8 = test_support::random_regular_graph(8, 3, gr);
  const TraceSet ts8 =
      simulate_many(g8, {1.0, 1.0}, SourcePolicy::uniform(), 10000, 350004);
  ScoreConfig cfg;
  cfg.delta_max = 3;
  cfg.delta_cap = 3;
  double min_gap = std::numeric_limits<double>::infinity();
  int arg_u = -1;
  std::vector<int> arg_s;
  long finite_alts = 0;
  long total_alts = 0;
  for (int u = 0; u < g8.n(); ++u) {
    std::vector<int> truth;
    for (const auto& [v, e] : g8.adjacent(u)) truth.push_back(v);
    std::sort(truth.begin(), truth.end());
    const double true_score = score_set(ts8, u, truth, cfg);
    std::vector<int> others;
    for (int v = 0; v < g8.n(); ++v)
      if (v != u) others.push_back(v);
    for (unsigned mask = 0; mask < (1u << others.size()); ++mask) {
      std::vector<int> s;
      for (std::size_t b = 0; b < others.size(); ++b)
        if (mask & (1u << b)) s.push_back(others[b]);
      if (s.size() > 3 || s == truth) continue;
      ++total_alts;
      const double alt_score = score_set(ts8, u, s, cfg);
      if (std::isfinite(alt_score)) ++finite_alts;
      const double gap = true_score - alt_score;
      if (gap < min_gap) {
        min_gap = gap;
        arg_u = u;
        arg_s = s;
      }
    }
  }
  // At this trace budget every alternative set typically hits a trace it
  // cannot explain (no member precedes u) and scores -infinity, making the
  // gap infinite; the finite-alternative count below records that.
  std::printf("  alternatives with finite score: %ld/%ld\n", finite_alts, total_alts);
  if (arg_u >= 0)
    std::printf("  min gap %.6f at u=%d, |S|=%zu\n", min_gap, arg_u, arg_s.size());
  else
    std::printf("  min gap +inf (every alternative scores -inf)\n");
  std::printf("  [%.1fs]\n", section_seconds());
}

// Degree-CCDF KS on the cycle at the pinned trace budget, plus the analytic
// prediction for the rounded estimate of a degree-2 node from ~10 sourced
// traces; backs the criterion 3 analysis.
void calibrate_degree() {
  std::printf("== degree ccdf, cycle n=256, 10n uniform traces ==\n");
  const int n = 256;
  const Graph cycle = make_cycle(n);
  const TraceSet ts =
      simulate_many(cycle, {1.0, 1.0}, SourcePolicy::uniform(), 10LL * n, 330002);
  const DistributionEstimate dist = estimate_distribution(ts, &cycle);
  double ks = 0.0;
  long ks_degree = 0;
  for (const CcdfRow& row : dist.table)
    if (std::abs(row.ccdf_true - row.ccdf_estimated) > ks) {
      ks = std::abs(row.ccdf_true - row.ccdf_estimated);
      ks_degree = row.degree;
    }
  std::printf("  measured ks %.4f at degree %ld (nodes estimated: %ld)\n", ks,
              ks_degree, dist.nodes_estimated);
  // A node sourced in k traces estimates 2 with probability
  // P(k/2.5 < G < k/1.5), G ~ Gamma(k, 2); at the mean k = 10 the rounded
  // estimate escapes to >= 3 with probability P(Gamma(10,1) <= 8).
  const double up = test_support::poisson_tail(10, 8.0);
  const double down = 1.0 - test_support::poisson_tail(10, 40.0 / 3.0);
  std::printf("  analytic, k=10 sourced traces: P(round>=3)=%.4f P(round<=1)=%.4f\n",
              up, down);
  std::printf("  [%.1fs]\n", section_seconds());
}

// Failure counts for tree reconstruction at the paired trace budgets of
// criterion 4.
void calibrate_tree() {
  std::printf("== tree failures, n=128, ell 64 vs 16 ==\n");
  int fail64 = 0, fail16 = 0;
  for (int seed = 0; seed < 100; ++seed) {
    const Graph g = generate_uniform_random_tree(128, derive_stream_seed(340001, seed));
    const TraceSet ts = simulate_many(g, {1.0, 1.0}, SourcePolicy::uniform(), 64,
                                      derive_stream_seed(340002, seed));
    fail64 += reconstruct_tree(ts).edges != g.edges();
    TraceSet head = ts;
    head.traces.resize(16);
    fail16 += reconstruct_tree(head).edges != g.edges();
  }
  std::printf("  failures: ell=64 -> %d/100, ell=16 -> %d/100\n", fail64, fail16);
  std::printf("  [%.1fs]\n", section_seconds());
}

// F1 of first-edge along the trace axis on the frozen power-law tree of
// criterion 7, and of the tree algorithm at small budgets.
void calibrate_experiment() {
  std::printf("== experiment replica, power-law tree n=1024 ==\n");
  const Graph g = generate_power_law_tree(1024, 3.0, 370001);
  std::printf("  graph: edges=%zu max_degree=%d\n", g.edges().size(), g.max_degree());
  const TraceSet full =
      simulate_many(g, {1.0, 1.0}, SourcePolicy::uniform(), 10000, 370002);
  for (long long ell : {2000LL, 3000LL, 5000LL, 8000LL, 10000LL}) {
    TraceSet head = full;
    head.traces.resize(ell);
    std::printf("  first-edge ell=%-6lld f1=%.4f\n", ell,
                evaluate(first_edge(head), g).f1);
  }
  for (long long ell : {100LL, 200LL}) {
    TraceSet head = full;
    head.traces.resize(ell);
    std::printf("  tree       ell=%-6lld f1=%.4f\n", ell,
                evaluate(reconstruct_tree(head), g).f1);
  }
  std::printf("  [%.1fs]\n", section_seconds());
}

// Worst ratio |d(a,b)| / (log n / n + 1/b); backs the constant 2.0 frozen in
// the unit suite's envelope test.
void calibrate_envelope() {
  std::printf("== discrepancy envelope ratio ==\n");
  double worst = 0.0;
  int wn = 0, wa = 0, wb = 0;
  for (int n : {8, 12, 16, 24, 32, 48, 64, 96, 128, 192, 256, 384, 512}) {
    const PositionTable t = exact_pab(n);
    for (int a = 1; a < n; ++a)
      for (int b = a + 1; b <= n; ++b) {
        if (a == 1 && b == 2) continue;
        const double env = std::log(static_cast<double>(n)) / n + 1.0 / b;
        const double r = std::abs(t.discrepancy(a, b)) / env;
        if (r > worst) {
          worst = r;
          wn = n;
          wa = a;
          wb = b;
        }
      }
  }
  std::printf("  max ratio %.4f at n=%d cell (%d,%d)\n", worst, wn, wa, wb);
  std::printf("  [%.1fs]\n", section_seconds());
}

// Guess-rate at the acceptance configuration and seed of criterion 6.
void calibrate_guess() {
  std::printf("== guess rate, n=32, ell=10, 2000 trials ==\n");
  GuessConfig cfg;
  cfg.n = 32;
  cfg.traces_per_trial = 10;
  cfg.trials = 2000;
  const GuessResult r = guess_experiment(cfg, 360002);
  std::printf("  success %.4f +- %.4f (%ld/%ld)\n", r.success_rate, r.std_error,
              r.correct, r.trials);
  std::printf("  [%.1fs]\n", section_seconds());
}

}  // namespace

int main(int argc, char** argv) {
  section_seconds();  // prime the stopwatch before the first section runs
  const bool all = argc < 2;
  auto want = [&](const char* name) {
    if (all) return true;
    for (int i = 1; i < argc; ++i)
      if (std::strcmp(argv[i], name) == 0) return true;
    return false;
  };
  if (want("bdd")) calibrate_bdd();
  if (want("gap")) calibrate_gap();
  if (want("degree")) calibrate_degree();
  if (want("tree")) calibrate_tree();
  if (want("experiment")) calibrate_experiment();
  if (want("envelope")) calibrate_envelope();
  if (want("guess")) calibrate_guess();
  return 0;
}
