// Command-line front end for the trace-inference toolkit.
//
// Subcommands: gen (graph generation), simulate (cascade traces), infer
// (edge reconstruction), degree (degree estimation), eval (edge-set
// scoring), sweep (batched cached experiments), lb-verify (clique
// indistinguishability checks).
//
// Exit codes: 0 success, 1 usage error, 2 invalid input, 3 runtime failure.

#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "traceinfer/traceinfer.hpp"

namespace {

using namespace traceinfer;

std::uint64_t fresh_seed() {
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

void with_output(const std::string& out, const std::function<void(std::ostream&)>& fn) {
  if (out == "-") {
    fn(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream os(out, std::ios::trunc);
  if (!os) throw std::runtime_error("cannot open output file: " + out);
  fn(os);
  os.flush();
  if (!os) throw std::runtime_error("failed writing output file: " + out);
}

std::optional<GraphFamily> family_from_string(const std::string& name) {
  if (name == "ba" || name == "barabasi-albert" || name == "barabasi_albert")
    return GraphFamily::barabasi_albert;
  if (name == "gnp") return GraphFamily::gnp;
  if (name == "plt" || name == "power-law-tree" || name == "power_law_tree")
    return GraphFamily::power_law_tree;
  if (name == "tree" || name == "uniform-tree" || name == "uniform_random_tree")
    return GraphFamily::uniform_random_tree;
  if (name == "clique") return GraphFamily::clique;
  if (name == "clique-minus-edge" || name == "clique_minus_edge")
    return GraphFamily::clique_minus_edge;
  if (name == "path") return GraphFamily::path;
  if (name == "custom" || name == "custom_edge_list") return GraphFamily::custom_edge_list;
  return std::nullopt;
}

bool family_is_randomized(GraphFamily f) {
  switch (f) {
    case GraphFamily::barabasi_albert:
    case GraphFamily::gnp:
    case GraphFamily::power_law_tree:
    case GraphFamily::uniform_random_tree:
      return true;
    default:
      return false;
  }
}

// ---------------------------------------------------------------- gen ----

struct GenArgs {
  std::string family;
  int n = 0;
  int m = 2;
  double prob = 0.1;
  double exponent = 3.0;
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::string out = "-";
};

int run_gen(const GenArgs& a) {
  Graph g;
  bool randomized = false;
  std::uint64_t seed = a.seed_given ? a.seed : fresh_seed();
  if (a.family == "cycle") {
    g = make_cycle(a.n);
  } else if (a.family == "star") {
    if (a.n < 2) throw std::invalid_argument("star needs n >= 2");
    g = make_star(a.n - 1);
  } else {
    const auto fam = family_from_string(a.family);
    if (!fam) throw std::invalid_argument("unknown graph family: " + a.family);
    GraphSpec spec;
    spec.family = *fam;
    spec.n = a.n;
    spec.m = a.m;
    spec.edge_prob = a.prob;
    spec.exponent = a.exponent;
    randomized = family_is_randomized(*fam);
    g = generate(spec, seed);
  }
  if (randomized) std::cerr << "seed: " << seed << "\n";
  std::cerr << "graph: n=" << g.n() << " edges=" << g.edge_count() << "\n";
  with_output(a.out, [&](std::ostream& os) { write_edge_list(g, os); });
  return 0;
}

// ----------------------------------------------------------- simulate ----

struct SimArgs {
  std::string graph;
  long long traces = 0;
  double lambda = 1.0;
  double p = 1.0;
  int source = -1;
  int threads = 0;
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::string graph_id;
  std::string out = "-";
};

int run_simulate(const SimArgs& a) {
  const Graph g = read_edge_list(std::filesystem::path(a.graph));
  const std::uint64_t seed = a.seed_given ? a.seed : fresh_seed();
  const SourcePolicy src =
      a.source >= 0 ? SourcePolicy::fixed(a.source) : SourcePolicy::uniform();
  TraceSet ts = simulate_many(g, CascadeParams{a.lambda, a.p}, src, a.traces,
                              seed, a.threads);
  ts.graph_id = a.graph_id;
  std::cerr << "seed: " << seed << "\n";
  with_output(a.out, [&](std::ostream& os) { save(ts, os); });
  return 0;
}

// -------------------------------------------------------------- infer ----

struct InferArgs {
  std::string algo;
  std::string in;
  std::string out = "-";
  std::string confidence_out;
  std::string degrees;  // file with one estimate per line; empty: estimate
  double threshold = 0.5;
  double budget = 0.0;
  int delta_max = 4;
  int threads = 0;
  bool eager = false;
  std::uint64_t seed = 0;
  bool seed_given = false;
};

std::vector<double> load_degree_file(const std::string& path, int n) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open degree file: " + path);
  std::vector<double> d;
  double v = 0.0;
  while (is >> v) d.push_back(v);
  if (!is.eof())
    throw std::invalid_argument("degree file has non-numeric content: " + path);
  if (static_cast<int>(d.size()) != n)
    throw std::invalid_argument("degree file must hold exactly one value per node");
  return d;
}

int run_infer(const InferArgs& a) {
  const TraceSet ts = load(std::filesystem::path(a.in));
  InferenceResult result;
  if (a.algo == "first-edge") {
    result = first_edge(ts);
  } else if (a.algo == "first-edge+") {
    FirstEdgePlusConfig cfg;
    cfg.insert_threshold = a.threshold;
    cfg.edge_budget = a.budget;
    if (!a.degrees.empty()) {
      cfg.degree_estimate = load_degree_file(a.degrees, ts.n);
    } else {
      DegreeAccumulator acc(ts.n);
      for (const Trace& t : ts.traces) acc.feed(t);
      cfg.degree_estimate.assign(ts.n, 1.0);
      for (int v = 0; v < ts.n; ++v)
        if (auto d = acc.estimate(v, ts.params.lambda)) cfg.degree_estimate[v] = *d;
    }
    const std::uint64_t seed = a.seed_given ? a.seed : fresh_seed();
    std::cerr << "seed: " << seed << "\n";
    result = first_edge_plus(ts, cfg, seed);
  } else if (a.algo == "tree") {
    TreeConfig cfg;
    cfg.eager = a.eager;
    result = reconstruct_tree(ts, cfg);
  } else if (a.algo == "bdd") {
    ScoreConfig cfg;
    cfg.delta_max = a.delta_max;
    cfg.delta_cap = a.delta_max;
    result = reconstruct_bdd(ts, cfg, a.threads);
  } else {
    throw std::invalid_argument("unknown algorithm: " + a.algo);
  }
  std::cerr << "algorithm: " << result.algorithm << "\n"
            << "params: " << result.params << "\n"
            << "edges: " << result.edges.size() << "\n"
            << "wall-seconds: " << double_to_string(result.wall_seconds) << "\n";
  const Graph pred(ts.n, result.edges);
  with_output(a.out, [&](std::ostream& os) { write_edge_list(pred, os); });
  if (!a.confidence_out.empty()) {
    with_output(a.confidence_out, [&](std::ostream& os) {
      for (std::size_t i = 0; i < result.edges.size(); ++i) {
        const double c = i < result.confidence.size() ? result.confidence[i] : 1.0;
        os << result.edges[i].first << ' ' << result.edges[i].second << ' '
           << double_to_string(c) << '\n';
      }
    });
  }
  return 0;
}

// ------------------------------------------------------------- degree ----

struct DegreeArgs {
  std::string in;
  std::string truth;
  int node = -1;
  std::string out = "-";
};

int run_degree(const DegreeArgs& a) {
  const TraceSet ts = load(std::filesystem::path(a.in));
  if (a.node >= 0) {
    const double est = estimate_degree(ts, a.node);
    DegreeAccumulator acc(ts.n);
    for (const Trace& t : ts.traces) acc.feed(t);
    with_output(a.out, [&](std::ostream& os) {
      os << "node " << a.node << ": estimate=" << double_to_string(est)
         << " rounded=" << round_degree(est)
         << " traces=" << acc.traces_for(a.node) << '\n';
    });
    return 0;
  }
  if (!a.truth.empty()) {
    const Graph g = read_edge_list(std::filesystem::path(a.truth));
    const DistributionEstimate est = estimate_distribution(ts, &g);
    with_output(a.out, [&](std::ostream& os) { write_ccdf_csv(est, os); });
    return 0;
  }
  const DistributionEstimate est = estimate_distribution(ts);
  with_output(a.out, [&](std::ostream& os) {
    os << "node,estimate,rounded\n";
    for (int v = 0; v < ts.n; ++v) {
      if (!est.estimate[v]) continue;
      os << v << ',' << double_to_string(*est.estimate[v]) << ','
         << round_degree(*est.estimate[v]) << '\n';
    }
  });
  return 0;
}

// --------------------------------------------------------------- eval ----

struct EvalArgs {
  std::string pred;
  std::string truth;
  bool csv = false;
  std::string out = "-";
};

int run_eval(const EvalArgs& a) {
  const Graph pred = read_edge_list(std::filesystem::path(a.pred));
  const Graph truth = read_edge_list(std::filesystem::path(a.truth));
  if (pred.n() != truth.n())
    throw std::invalid_argument("prediction and truth disagree on node count");
  const EvalReport r = evaluate(pred.edges(), truth);
  with_output(a.out, [&](std::ostream& os) {
    if (a.csv) {
      os << "tp,fp,fn,precision,recall,f1\n"
         << r.true_positives << ',' << r.false_positives << ','
         << r.false_negatives << ',' << double_to_string(r.precision) << ','
         << double_to_string(r.recall) << ',' << double_to_string(r.f1) << '\n';
    } else {
      os << "tp=" << r.true_positives << " fp=" << r.false_positives
         << " fn=" << r.false_negatives
         << " precision=" << double_to_string(r.precision)
         << " recall=" << double_to_string(r.recall)
         << " f1=" << double_to_string(r.f1) << '\n';
    }
  });
  return 0;
}

// -------------------------------------------------------------- sweep ----

struct SweepArgs {
  std::string grid;
  std::string out = "-";
  std::string cache_dir;
  int threads = 0;
  int delta_max = 4;
  double threshold = 0.5;
};

std::vector<SweepCell> parse_grid(const nlohmann::json& j) {
  if (!j.is_object()) throw std::invalid_argument("grid must be a JSON object");
  for (const char* key : {"graphs", "algos", "ells"})
    if (!j.contains(key))
      throw std::invalid_argument(std::string("grid is missing \"") + key + "\"");

  std::vector<GraphSpec> graphs;
  for (const auto& gj : j.at("graphs")) {
    GraphSpec spec;
    const std::string fam = gj.at("family").get<std::string>();
    const auto parsed = family_from_string(fam);
    if (!parsed) throw std::invalid_argument("unknown graph family: " + fam);
    spec.family = *parsed;
    spec.n = gj.at("n").get<int>();
    spec.m = gj.value("m", 2);
    spec.edge_prob = gj.value("prob", 0.0);
    spec.exponent = gj.value("exponent", 3.0);
    if (gj.contains("edges"))
      for (const auto& e : gj.at("edges"))
        spec.edges.push_back(normalize_edge(e.at(0).get<int>(), e.at(1).get<int>()));
    graphs.push_back(std::move(spec));
  }
  const auto graph_seeds = j.value("graph_seeds", std::vector<std::uint64_t>{1});
  const auto run_seeds = j.value("run_seeds", std::vector<std::uint64_t>{1});
  const auto lambdas = j.value("lambdas", std::vector<double>{1.0});
  const auto ps = j.value("ps", std::vector<double>{1.0});
  const auto algos = j.at("algos").get<std::vector<std::string>>();
  const auto ells = j.at("ells").get<std::vector<int>>();

  std::vector<SweepCell> cells;
  for (const GraphSpec& gs : graphs)
    for (std::uint64_t gseed : graph_seeds)
      for (double lambda : lambdas)
        for (double p : ps)
          for (const std::string& algo : algos)
            for (int ell : ells)
              for (std::uint64_t rseed : run_seeds) {
                SweepCell c;
                c.graph = gs;
                c.graph_seed = gseed;
                c.lambda = lambda;
                c.p = p;
                c.algo = algo;
                c.ell = ell;
                c.run_seed = rseed;
                cells.push_back(std::move(c));
              }
  return cells;
}

int run_sweep_cmd(const SweepArgs& a) {
  std::ifstream is(a.grid);
  if (!is) throw std::runtime_error("cannot open grid file: " + a.grid);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(is);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("grid JSON: ") + e.what());
  }
  std::vector<SweepCell> cells;
  try {
    cells = parse_grid(j);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("grid JSON: ") + e.what());
  }
  SweepOptions opts;
  opts.threads = a.threads;
  opts.cache_dir = a.cache_dir;
  opts.delta_max = a.delta_max;
  opts.insert_threshold = a.threshold;
  const std::vector<std::string> rows = run_sweep(cells, opts);
  std::cerr << "cells: " << rows.size() << "\n";
  with_output(a.out, [&](std::ostream& os) { write_sweep_csv(os, rows); });
  return 0;
}

// ---------------------------------------------------------- lb-verify ----

struct LbArgs {
  int n = 16;
  int trials = 1000;
  int traces = 10;
  long long mc_traces = 0;
  int threads = 0;
  bool waiting_times = false;
  std::uint64_t seed = 0;
  bool seed_given = false;
};

int run_lb_verify(const LbArgs& a) {
  const PositionTable table = exact_pab(a.n);
  double total = 0.0;
  for (double v : table.p) total += v;
  std::cout << "table-n: " << a.n << "\n"
            << "normalization-residual: " << double_to_string(std::abs(total - 1.0))
            << "\n"
            << "discrepancy-1-2: " << double_to_string(table.discrepancy(1, 2))
            << "\n";

  const std::uint64_t seed = a.seed_given ? a.seed : fresh_seed();
  std::cout << "seed: " << seed << "\n";

  if (a.mc_traces > 0) {
    const std::vector<long> counts =
        observed_pair_counts(a.n, a.mc_traces, derive_stream_seed(seed, 1), a.threads);
    double max_z = 0.0;
    long impossible = 0;
    for (int x = 1; x < a.n; ++x)
      for (int y = x + 1; y <= a.n; ++y) {
        const double p = table.at(x, y);
        const long c = counts[table.index(x, y)];
        if (p == 0.0) {
          impossible += c;
          continue;
        }
        const double z = (c - a.mc_traces * p) /
                         std::sqrt(a.mc_traces * p * (1.0 - p));
        max_z = std::max(max_z, std::abs(z));
      }
    std::cout << "monte-carlo: traces=" << a.mc_traces
              << " impossible-pair-count=" << impossible
              << " max-abs-z=" << double_to_string(max_z) << "\n";
  }

  GuessConfig cfg;
  cfg.n = a.n;
  cfg.trials = a.trials;
  cfg.traces_per_trial = a.traces;
  cfg.use_waiting_times = a.waiting_times;
  const GuessResult r = guess_experiment(cfg, derive_stream_seed(seed, 2));
  std::cout << "guess-success: " << double_to_string(r.success_rate)
            << " (stderr " << double_to_string(r.std_error) << ", " << r.trials
            << " trials, " << cfg.traces_per_trial << " traces each)\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cascade simulation and network inference from infection-time traces"};
  app.require_subcommand(1);

  GenArgs gen_args;
  auto* gen = app.add_subcommand("gen", "Generate a graph and write its edge list");
  gen->add_option("--family", gen_args.family,
                  "ba | gnp | power-law-tree | uniform-tree | clique | "
                  "clique-minus-edge | path | cycle | star")
      ->required();
  gen->add_option("--n", gen_args.n, "Number of nodes")->required();
  gen->add_option("--m", gen_args.m, "Edges per arriving node (ba)");
  gen->add_option("--prob", gen_args.prob, "Edge probability (gnp)");
  gen->add_option("--exponent", gen_args.exponent, "Degree exponent (power-law-tree)");
  auto* gen_seed = gen->add_option("--seed", gen_args.seed, "Generator seed");
  gen->add_option("--out", gen_args.out, "Output file or - for stdout");

  SimArgs sim_args;
  auto* sim = app.add_subcommand("simulate", "Simulate cascades over a graph");
  sim->add_option("--graph", sim_args.graph, "Edge-list file")->required();
  sim->add_option("--traces", sim_args.traces, "Number of traces")->required();
  sim->add_option("--lambda", sim_args.lambda, "Transmission rate");
  sim->add_option("--p", sim_args.p, "Transmission probability");
  sim->add_option("--source", sim_args.source, "Fixed source node (default: uniform)");
  sim->add_option("--threads", sim_args.threads, "Worker threads (0 = auto)");
  auto* sim_seed = sim->add_option("--seed", sim_args.seed, "Simulation seed");
  sim->add_option("--graph-id", sim_args.graph_id, "Graph label stored in the file");
  sim->add_option("--out", sim_args.out, "Output file or - for stdout");

  InferArgs inf_args;
  auto* inf = app.add_subcommand("infer", "Reconstruct edges from a trace file");
  inf->add_option("--algo", inf_args.algo, "first-edge | first-edge+ | tree | bdd")
      ->required();
  inf->add_option("--in", inf_args.in, "Trace file")->required();
  inf->add_option("--out", inf_args.out, "Edge-list output or - for stdout");
  inf->add_option("--confidence-out", inf_args.confidence_out,
                  "Optional per-edge confidence output (first-edge+)");
  inf->add_option("--degrees", inf_args.degrees,
                  "Degree-estimate file, one value per node (first-edge+); "
                  "default estimates from the input traces");
  inf->add_option("--threshold", inf_args.threshold,
                  "Insertion probability threshold (first-edge+)");
  inf->add_option("--budget", inf_args.budget,
                  "Edge budget override (first-edge+; 0 derives from degrees)");
  inf->add_option("--delta-max", inf_args.delta_max, "Neighborhood size bound (bdd)");
  inf->add_option("--threads", inf_args.threads, "Worker threads (bdd; 0 = auto)");
  inf->add_flag("--eager", inf_args.eager,
                "Check all pairs up front instead of on demand (tree)");
  auto* inf_seed = inf->add_option("--seed", inf_args.seed, "Thinning seed (first-edge+)");

  DegreeArgs deg_args;
  auto* deg = app.add_subcommand("degree", "Estimate degrees from a trace file");
  deg->add_option("--in", deg_args.in, "Trace file")->required();
  deg->add_option("--node", deg_args.node, "Single node to estimate (default: all)");
  deg->add_option("--truth", deg_args.truth,
                  "True graph edge list; switches output to a CCDF overlay CSV");
  deg->add_option("--out", deg_args.out, "Output file or - for stdout");

  EvalArgs eval_args;
  auto* ev = app.add_subcommand("eval", "Score a predicted edge list against truth");
  ev->add_option("--pred", eval_args.pred, "Predicted edge list")->required();
  ev->add_option("--truth", eval_args.truth, "True edge list")->required();
  ev->add_flag("--csv", eval_args.csv, "Emit CSV instead of a text line");
  ev->add_option("--out", eval_args.out, "Output file or - for stdout");

  SweepArgs sweep_args;
  auto* sw = app.add_subcommand("sweep", "Run a cached experiment grid, emit CSV");
  sw->add_option("--grid", sweep_args.grid, "Grid description (JSON)")->required();
  sw->add_option("--out", sweep_args.out, "CSV output or - for stdout");
  sw->add_option("--cache-dir", sweep_args.cache_dir,
                 "Row cache directory (default: $TRACEINFER_CACHE_DIR)");
  sw->add_option("--threads", sweep_args.threads, "Worker threads (0 = auto)");
  sw->add_option("--delta-max", sweep_args.delta_max, "Neighborhood size bound (bdd)");
  sw->add_option("--threshold", sweep_args.threshold,
                 "Insertion probability threshold (first-edge+)");

  LbArgs lb_args;
  auto* lb = app.add_subcommand("lb-verify",
                                "Check the clique-vs-deleted-edge position table "
                                "and run the guessing experiment");
  lb->add_option("--n", lb_args.n, "Clique size");
  lb->add_option("--trials", lb_args.trials, "Guessing trials");
  lb->add_option("--traces", lb_args.traces, "Traces per trial");
  lb->add_option("--mc-traces", lb_args.mc_traces,
                 "Monte-Carlo traces for table agreement (0 = skip)");
  lb->add_option("--threads", lb_args.threads, "Worker threads (0 = auto)");
  lb->add_flag("--waiting-times", lb_args.waiting_times,
               "Add the waiting-time likelihood to the guesser");
  auto* lb_seed = lb->add_option("--seed", lb_args.seed, "Experiment seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  gen_args.seed_given = gen_seed->count() > 0;
  sim_args.seed_given = sim_seed->count() > 0;
  inf_args.seed_given = inf_seed->count() > 0;
  lb_args.seed_given = lb_seed->count() > 0;

  try {
    if (gen->parsed()) return run_gen(gen_args);
    if (sim->parsed()) return run_simulate(sim_args);
    if (inf->parsed()) return run_infer(inf_args);
    if (deg->parsed()) return run_degree(deg_args);
    if (ev->parsed()) return run_eval(eval_args);
    if (sw->parsed()) return run_sweep_cmd(sweep_args);
    if (lb->parsed()) return run_lb_verify(lb_args);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 1;
}
