#pragma once
// Deterministic random number streams.
//
// Every randomized operation in the library takes an explicit 64-bit seed.
// Independent streams are derived from (master seed, stream index) by
// SplitMix64 mixing, so the i-th stream of a run depends only on the master
// seed and i, never on thread scheduling. std::mt19937_64 is fully specified
// by the standard, and all variate transforms below are hand-written, so
// results are bit-identical across platforms and compilers.

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>

namespace traceinfer {

// One SplitMix64 step: bijective avalanche mix of the state x.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Seed of the index-th child stream under a master seed. Equivalent to the
// index-th output of a SplitMix64 sequence started at splitmix64(master).
inline std::uint64_t derive_stream_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64(splitmix64(master) + 0x9e3779b97f4a7c15ull * index);
}

class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : engine_(seed) {}
  RngStream(std::uint64_t master, std::uint64_t index)
      : engine_(derive_stream_seed(master, index)) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on (0, 1]: (x >> 11) + 1 spans 1..2^53, scaled by 2^-53.
  // The open lower end keeps log() finite in exponential().
  double uniform_unit() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  // Inverse CDF applied to one 64-bit uniform draw, as a single division by
  // rate. Halving the rate therefore exactly doubles the sample.
  double exponential(double rate) { return -std::log(uniform_unit()) / rate; }

  // True with probability p; p = 1 always fires, p = 0 never does.
  bool bernoulli(double p) { return uniform_unit() <= p; }

  // Uniform on {0, ..., n-1}, unbiased via rejection from the top of the
  // 64-bit range. Requires n >= 1.
  std::uint64_t uniform_below(std::uint64_t n) {
    const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
    const std::uint64_t rem = (max % n + 1) % n;  // 2^64 mod n
    const std::uint64_t limit = max - rem;        // accept x <= limit
    std::uint64_t x = next_u64();
    while (x > limit) x = next_u64();
    return x % n;
  }

  // Uniform on {lo, ..., hi} inclusive. Requires lo <= hi.
  long long uniform_int(long long lo, long long hi) {
    return lo + static_cast<long long>(
                    uniform_below(static_cast<std::uint64_t>(hi - lo) + 1));
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace traceinfer
