#pragma once
// Indistinguishability lab: clique vs clique-minus-one-edge.
//
// On the complete graph (p = 1, uniform source) the infection order is a
// uniform random permutation, so the two endpoints of any fixed pair land
// on each 1-indexed position pair (a, b), a < b, with probability
// 1 / C(n, 2). Removing the edge {0, 1} perturbs these probabilities only
// slightly: exact_pab evaluates them in closed form as products over the
// Markov chain of cut sizes, conditioned on where the first special node
// enters. Position pair (1, 2) is impossible without the edge (the second
// node can only be infected through a third), so its probability is 0 and
// its discrepancy d(a, b) = p_ab * C(n, 2) - 1 is exactly -1.
//
// guess_experiment plays the induced hypothesis test: nature flips a fair
// coin between the two graphs, the guesser sees l traces and answers by
// maximum a-posteriori likelihood over the observed position pairs of
// nodes 0 and 1 (optionally adding the waiting-time likelihood of the
// inter-infection gaps, which carries no extra signal). All likelihood
// arithmetic is in log space.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "traceinfer/cascade.hpp"
#include "traceinfer/generators.hpp"
#include "traceinfer/rng.hpp"
#include "traceinfer/trace.hpp"

namespace traceinfer {

// Flat upper-triangle index for a 1-indexed position pair (a, b), a < b.
inline std::size_t pair_index(int n, int a, int b) {
  return static_cast<std::size_t>(a - 1) * (2 * n - a) / 2 + (b - a - 1);
}

// Exact position-pair probabilities for the edge-deleted clique.
struct PositionTable {
  int n = 0;
  std::vector<double> p;  // flat upper triangle over 1-indexed (a, b), a < b

  std::size_t index(int a, int b) const { return pair_index(n, a, b); }
  double at(int a, int b) const { return p[index(a, b)]; }
  // p_ab * C(n, 2) - 1; zero for all (a, b) on the intact clique.
  double discrepancy(int a, int b) const {
    return at(a, b) * (static_cast<double>(n) * (n - 1) / 2.0) - 1.0;
  }
};

inline PositionTable exact_pab(int n) {
  if (n < 3) throw std::invalid_argument("position table requires n >= 3");
  PositionTable t;
  t.n = n;
  t.p.assign(static_cast<std::size_t>(n) * (n - 1) / 2, 0.0);

  // Log prefix sums of the transition factors, by number infected k:
  //   none of {0,1} infected, next avoids both:  f0(k) = (n-k-2)/(n-k)
  //   exactly one infected, next avoids the other: f1(k) = k(n-k-1)/(k(n-k)-1)
  const double dn = n;
  std::vector<double> F0(n, 0.0), F1(n, 0.0);
  for (int k = 1; k < n - 2; ++k)
    F0[k] = F0[k - 1] + std::log((dn - k - 2) / (dn - k));
  F1[1] = 0.0;
  for (int k = 2; k <= n - 2; ++k)
    F1[k] = F1[k - 1] + std::log(k * (dn - k - 1) / (k * (dn - k) - 1));

  // Second special node enters at position b, from b-1 infected.
  auto log_hit_second = [&](int b) {
    return std::log((b - 2) / ((b - 1.0) * (dn - b + 1) - 1.0));
  };

  for (int b = 3; b <= n; ++b)
    t.p[t.index(1, b)] = (2.0 / dn) * std::exp(F1[b - 2] + log_hit_second(b));
  for (int a = 2; a < n; ++a) {
    // First special enters at position a, from a-1 infected non-specials.
    const double log_first = F0[a - 2] + std::log(2.0 / (dn - a + 1));
    for (int b = a + 1; b <= n; ++b)
      t.p[t.index(a, b)] = ((dn - 2.0) / dn) *
                           std::exp(log_first + (F1[b - 2] - F1[a - 1]) + log_hit_second(b));
  }
  // (1, 2) stays exactly 0: without the edge, the second infection cannot
  // be the partner of the source.
  return t;
}

// Simulated counts of each position pair of nodes 0 and 1 over `traces`
// cascades on the edge-deleted clique (uniform sources, p = 1), indexed
// like PositionTable. Streams traces, so memory stays O(n).
inline std::vector<long> observed_pair_counts(int n, long traces,
                                              std::uint64_t seed,
                                              int threads = 0) {
  const Graph g = make_clique_minus_edge(n);
  std::vector<long> counts(static_cast<std::size_t>(n) * (n - 1) / 2, 0);
  simulate_for_each(
      g, CascadeParams{1.0, 1.0}, SourcePolicy::uniform(), traces, seed,
      [&](long long, const Trace& t) {
        int a = 0, b = 0;
        for (std::size_t pos = 0; pos < t.events.size(); ++pos) {
          if (t.events[pos].node <= 1) {
            if (a == 0)
              a = static_cast<int>(pos) + 1;
            else
              b = static_cast<int>(pos) + 1;
          }
        }
        ++counts[pair_index(n, a, b)];
      },
      threads);
  return counts;
}

struct GuessConfig {
  int n = 16;
  int traces_per_trial = 10;
  int trials = 1000;
  bool use_waiting_times = false;  // add the inter-infection gap likelihood
  double lambda = 1.0;
};

struct GuessResult {
  long trials = 0;
  long correct = 0;
  double success_rate = 0.0;
  double std_error = 0.0;
};

// Success rate of the MAP guesser over independent trials. Trial t uses
// streams derived from (master_seed, t): stream 0 for the graph coin and
// tie breaks, stream 1 as the trace simulation master.
inline GuessResult guess_experiment(const GuessConfig& cfg, std::uint64_t master_seed) {
  if (cfg.trials < 1) throw std::invalid_argument("need at least one trial");
  if (cfg.traces_per_trial < 0) throw std::invalid_argument("negative trace count");
  const PositionTable table = exact_pab(cfg.n);
  const Graph g0 = make_clique(cfg.n);
  const Graph g1 = make_clique_minus_edge(cfg.n);
  const double log_uniform = -std::log(static_cast<double>(cfg.n) * (cfg.n - 1) / 2.0);
  const CascadeParams params{cfg.lambda, 1.0};

  GuessResult out;
  out.trials = cfg.trials;
  for (int trial = 0; trial < cfg.trials; ++trial) {
    const std::uint64_t trial_seed = derive_stream_seed(master_seed, trial);
    RngStream decide(trial_seed, 0);
    const bool is_deleted = decide.bernoulli(0.5);
    const Graph& g = is_deleted ? g1 : g0;
    const TraceSet ts = simulate_many(g, params, SourcePolicy::uniform(),
                                      cfg.traces_per_trial,
                                      derive_stream_seed(trial_seed, 1), 1);
    double llr = 0.0;  // log L(traces | clique) - log L(traces | deleted)
    bool impossible_under_deleted = false;
    for (const Trace& t : ts.traces) {
      int a = 0, b = 0;  // 1-indexed positions of nodes 0 and 1
      for (std::size_t pos = 0; pos < t.events.size(); ++pos) {
        if (t.events[pos].node == 0 || t.events[pos].node == 1) {
          if (a == 0)
            a = static_cast<int>(pos) + 1;
          else
            b = static_cast<int>(pos) + 1;
        }
      }
      const double q1 = table.at(a, b);
      if (q1 == 0.0) {
        impossible_under_deleted = true;  // pair (1, 2) observed
        break;
      }
      llr += log_uniform - std::log(q1);
      if (cfg.use_waiting_times) {
        for (std::size_t k = 1; k < t.events.size(); ++k) {
          const bool one_special =
              (a <= static_cast<int>(k)) != (b <= static_cast<int>(k));
          if (!one_special) continue;  // rates agree, the gap cancels
          const double cut = static_cast<double>(k) * (cfg.n - static_cast<double>(k));
          const double w = t.events[k].time - t.events[k - 1].time;
          llr += std::log(cut / (cut - 1.0)) - cfg.lambda * w;
        }
      }
    }
    bool guess_deleted;
    if (impossible_under_deleted)
      guess_deleted = false;
    else if (llr > 0.0)
      guess_deleted = false;
    else if (llr < 0.0)
      guess_deleted = true;
    else
      guess_deleted = decide.bernoulli(0.5);
    if (guess_deleted == is_deleted) ++out.correct;
  }
  out.success_rate = static_cast<double>(out.correct) / out.trials;
  out.std_error = std::sqrt(out.success_rate * (1.0 - out.success_rate) / out.trials);
  return out;
}

}  // namespace traceinfer
