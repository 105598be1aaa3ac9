#include <catch2/catch_amalgamated.hpp>

#include <fstream>
#include <sstream>
#include <string>

#include "test_support.hpp"
#include "traceinfer/cascade.hpp"
#include "traceinfer/generators.hpp"
#include "traceinfer/trace_io.hpp"

using namespace traceinfer;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  REQUIRE(is);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

const std::string kDataDir = TESTS_DATA_DIR;

// Structured fuzz: a random valid trace set (not necessarily realizable by
// any graph; the format does not care).
TraceSet random_trace_set(std::uint64_t seed) {
  RngStream rng(seed, 500);
  TraceSet ts;
  ts.n = 1 + static_cast<int>(rng.uniform_below(30));
  ts.params.lambda = std::exp(rng.uniform_unit() * 6.0 - 3.0);
  ts.params.p = rng.bernoulli(0.5) ? 1.0 : rng.uniform_unit();
  if (rng.bernoulli(0.3)) ts.graph_id = "g" + std::to_string(rng.uniform_below(1000));
  const int count = static_cast<int>(rng.uniform_below(20));
  for (int i = 0; i < count; ++i) {
    Trace t;
    std::vector<int> nodes(ts.n);
    for (int v = 0; v < ts.n; ++v) nodes[v] = v;
    for (std::size_t k = nodes.size(); k > 1; --k)
      std::swap(nodes[k - 1], nodes[rng.uniform_below(k)]);
    const int len = 1 + static_cast<int>(rng.uniform_below(ts.n));
    double time = 0.0;
    for (int k = 0; k < len; ++k) {
      t.events.push_back({nodes[k], time});
      time += rng.exponential(ts.params.lambda);
    }
    ts.traces.push_back(std::move(t));
  }
  return ts;
}

}  // namespace

TEST_CASE("golden trace files load to the expected values", "[trace_io]") {
  const TraceSet ts = load(std::filesystem::path(kDataDir) / "golden_star.traces");
  CHECK(ts.params.lambda == 1.5);
  CHECK(ts.params.p == 0.75);
  CHECK(ts.n == 4);
  CHECK(ts.graph_id == "star-4");
  REQUIRE(ts.traces.size() == 2);
  REQUIRE(ts.traces[0].events.size() == 3);
  CHECK(ts.traces[0].events[1].node == 1);
  CHECK(ts.traces[0].events[1].time == 0.5);
  CHECK(ts.traces[0].events[2].time == 1.25);
  REQUIRE(ts.traces[1].events.size() == 1);
  CHECK(ts.traces[1].source() == 1);

  const TraceSet minimal = load(std::filesystem::path(kDataDir) / "golden_minimal.traces");
  CHECK(minimal.graph_id.empty());
  CHECK(minimal.traces[0].events[1].time == 0.125);
}

TEST_CASE("saving a loaded golden file reproduces its bytes", "[trace_io]") {
  for (const char* name : {"golden_star.traces", "golden_minimal.traces"}) {
    const std::string path = (std::filesystem::path(kDataDir) / name).string();
    const TraceSet ts = load(std::filesystem::path(path));
    CHECK(save_to_string(ts) == read_file(path));
  }
}

TEST_CASE("save then load is the identity on simulated sets", "[trace_io]") {
  const Graph g = generate_gnp(25, 0.2, 3);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    TraceSet ts = simulate_many(g, {0.37, 0.8}, SourcePolicy::uniform(), 50, seed);
    ts.graph_id = "gnp-25";
    const TraceSet back = load_from_string(save_to_string(ts));
    REQUIRE(back == ts);
  }
}

TEST_CASE("save then load is the identity on fuzzed sets", "[trace_io]") {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const TraceSet ts = random_trace_set(seed);
    const TraceSet back = load_from_string(save_to_string(ts));
    REQUIRE(back == ts);
  }
}

TEST_CASE("loader rejects malformed files with line numbers", "[trace_io]") {
  auto line_of = [](const std::string& text) {
    try {
      load_from_string(text);
    } catch (const ParseError& e) {
      return e.line();
    }
    return -1L;
  };
  CHECK(line_of("tracefile 1\nlambda 1\np 1\nn 2\ntraces 0\n") == 1);
  CHECK(line_of("traceset 1\nlambda nope\np 1\nn 2\ntraces 0\n") == 2);
  CHECK(line_of("traceset 1\nlambda -2\np 1\nn 2\ntraces 0\n") == 2);
  CHECK(line_of("traceset 1\nlambda 1\np 1.5\nn 2\ntraces 0\n") == 3);
  CHECK(line_of("traceset 1\nlambda 1\np 0\nn 2\ntraces 0\n") == 3);
  CHECK(line_of("traceset 1\nlambda 1\np 1\nn 0\ntraces 0\n") == 4);
  CHECK(line_of("traceset 1\nlambda 1\np 1\nn 2\ngraph a b\ntraces 0\n") == 5);
  CHECK(line_of("traceset 1\nlambda 1\np 1\nn 2\ntraces -1\n") == 5);
  CHECK(line_of("traceset 1\nlambda 1\np 1\nn 2\ntraces 1\n") == 6);       // missing trace
  CHECK(line_of("traceset 1\nlambda 1\np 1\nn 2\ntraces 1\n5 0\n") == 6);  // node range
  CHECK(line_of("traceset 1\nlambda 1\np 1\nn 2\ntraces 1\n0 0.5\n") == 6);  // nonzero start
  CHECK(line_of("traceset 1\nlambda 1\np 1\nn 2\ntraces 1\n0 0 1\n") == 6);  // missing time
  CHECK(line_of("traceset 1\nlambda 1\np 1\nn 3\ntraces 1\n0 0 1 2 2 1\n") == 6);
  CHECK(line_of("traceset 1\nlambda 1\np 1\nn 2\ntraces 1\n0 0 0 1\n") == 6);  // repeat
  CHECK(line_of("traceset 1\nlambda 1\np 1\nn 2\ntraces 1\n0 0 1 inf\n") == 6);
  CHECK(line_of("traceset 1\nlambda 1\np 1\nn 2\ntraces 1\n0 0\njunk\n") == 7);
}

TEST_CASE("saving rejects invalid in-memory sets", "[trace_io]") {
  TraceSet ts;
  ts.n = 2;
  ts.params.lambda = 1.0;
  ts.params.p = 1.0;
  ts.graph_id = "has space";
  CHECK_THROWS_AS(save_to_string(ts), std::invalid_argument);
  ts.graph_id.clear();
  ts.traces.push_back(Trace{{{0, 0.0}, {1, -1.0}}});
  CHECK_THROWS_AS(save_to_string(ts), std::invalid_argument);
}
