#include "cachenet/cli.hpp"

#include <filesystem>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "cachenet/harness.hpp"
#include "cachenet/io.hpp"

namespace cachenet {

namespace {

namespace fs = std::filesystem;

std::string file_stem(const std::string& path) { return fs::path(path).stem().string(); }

void add_scenario_options(CLI::App* cmd, ScenarioSpec& spec, std::string& topology) {
  cmd->add_option("--topology", topology,
                  "er | tree | hypercube | grid | smallworld | backbone | counterexample")
      ->required();
  cmd->add_option("--kappa", spec.kappa, "capacity looseness coefficient");
  cmd->add_option("--catalog", spec.catalog, "catalog size");
  cmd->add_option("--requests", spec.requests, "number of requests");
  cmd->add_option("--query-nodes", spec.query_nodes, "number of query nodes");
  cmd->add_option("--max-paths", spec.max_paths, "path set size cap per request");
  cmd->add_option("--stretch", spec.stretch, "path cost cap as a multiple of the shortest");
  cmd->add_option("--zipf", spec.zipf_exponent, "Zipf exponent for request popularity");
  cmd->add_option("--nodes", spec.nodes, "node count (er)");
  cmd->add_option("--er-prob", spec.er_edge_prob, "edge probability (er)");
  cmd->add_option("--tree-branching", spec.tree_branching, "branching factor (tree)");
  cmd->add_option("--tree-depth", spec.tree_depth, "depth (tree)");
  cmd->add_option("--hypercube-dim", spec.hypercube_dim, "dimension (hypercube)");
  cmd->add_option("--grid-rows", spec.grid_rows, "rows (grid, smallworld)");
  cmd->add_option("--grid-cols", spec.grid_cols, "columns (grid, smallworld)");
  cmd->add_option("--sw-extra", spec.sw_extra_links, "long-range contacts per node (smallworld)");
  cmd->add_option("--backbone-file", spec.backbone_file, "topology file (backbone)");
  cmd->add_option("--cache-min", spec.cache_min, "cache capacity range lower end");
  cmd->add_option("--cache-max", spec.cache_max, "cache capacity range upper end");
  cmd->add_option("--weight-min", spec.weight_min, "edge weight range lower end");
  cmd->add_option("--weight-max", spec.weight_max, "edge weight range upper end");
}

void add_solver_options(CLI::App* cmd, PDConfig& pd, BaselineConfig& baseline,
                        bool& no_momentum, bool& run_to_max) {
  cmd->add_option("--iterations", pd.max_iterations, "primal-dual iteration cap");
  cmd->add_option("--fw-iterations", pd.fw.iterations, "Frank-Wolfe steps per primal solve");
  cmd->add_option("--dual-scale", pd.dual_step_scale,
                  "dual step scale c (0 = calibrate automatically)");
  cmd->add_flag("--no-momentum", no_momentum, "disable the primal momentum blend");
  cmd->add_flag("--run-to-max", run_to_max, "ignore convergence and run all iterations");
  cmd->add_option("--alternating-rounds", baseline.alternating_max_rounds,
                  "alternation cap for the alternating baseline");
}

std::vector<std::string> known_algorithms() {
  return {"primaldual", "random1", "random2", "greedy1", "greedy2", "alternating"};
}

int do_generate(const ScenarioSpec& spec, const std::string& out) {
  const auto [instance, demand] = generate_scenario(spec);
  const std::string path = out.empty() ? instance_label(spec) + ".txt" : out;
  save_instance(instance, demand, path);
  std::cerr << "wrote " << path << ": " << instance.node_count() << " nodes, "
            << instance.edge_count() << " edges, " << demand.request_count() << " requests, "
            << demand.total_paths() << " paths\n";
  return 0;
}

int do_solve(const std::string& instance_path, const std::string& algorithm, const PDConfig& pd,
             const BaselineConfig& baseline, const std::string& out, bool timings) {
  const InstanceBundle bundle = load_instance(instance_path);
  const RunReport report =
      dispatch_solver(algorithm, bundle.instance, bundle.demand, pd, baseline);

  const std::string dir = out.empty() ? "." : out;
  fs::create_directories(dir);
  const std::string base = dir + "/" + file_stem(instance_path) + "_" + algorithm;
  save_report(report, base + ".trace.json");
  save_strategy(report.final_y, base + ".strategy.json");
  const MetricsRecord rec = to_metrics(report, file_stem(instance_path), 0.0, 0.0);
  emit_results({rec}, base + ".metrics.tsv", timings);

  std::cerr << algorithm << ": gain " << format_double(report.final_gain) << ", InF "
            << format_double(report.final_inf) << ", MaxInF "
            << format_double(report.final_max_inf) << ", iterations " << report.iterations
            << (report.converged ? ", converged" : "") << ", " << report.wall_seconds << "s\n";
  for (const std::string& e : report.events) std::cerr << "  event: " << e << '\n';
  return 0;
}

int do_evaluate(const std::string& instance_path, const std::string& strategy_path,
                const std::string& out) {
  const InstanceBundle bundle = load_instance(instance_path);
  const StrategyPair y = load_strategy(strategy_path);
  const ObjectiveContext ctx(bundle.instance, bundle.demand);
  const double gain = cache_gain(ctx, y);
  const InfMetrics inf = compute_inf(ctx, y);
  const FeasibilityReport feas = validate_strategy(bundle.instance, bundle.demand, y, FeasibleSet::D);

  std::ostringstream os;
  os << "gain " << format_double(gain) << '\n'
     << "inf " << format_double(inf.avg) << '\n'
     << "max_inf " << format_double(inf.max) << '\n'
     << "in_feasible_set " << (feas.pass() ? "yes" : "no") << '\n';
  if (!out.empty()) {
    std::ofstream f(out);
    f << os.str();
  }
  std::cout << os.str();
  return 0;
}

int do_sweep(ScenarioSpec base_spec, const std::vector<std::uint64_t>& seeds,
             const std::vector<double>& kappas, const std::vector<std::string>& algorithms,
             const PDConfig& pd, const BaselineConfig& baseline, int threads,
             const std::string& out, bool timings) {
  ExperimentGrid grid;
  for (std::uint64_t seed : seeds)
    for (double kappa : kappas) {
      ScenarioSpec spec = base_spec;
      spec.seed = seed;
      spec.kappa = kappa;
      grid.scenarios.push_back(spec);
    }
  grid.algorithms = algorithms;
  grid.pd = pd;
  grid.baseline = baseline;
  grid.threads = threads;
  grid.write_instances = true;

  const std::string dir = out.empty() ? "sweep" : out;
  fs::create_directories(dir);
  const std::vector<MetricsRecord> records = run_experiment(grid, dir);
  emit_results(records, dir + "/results.tsv", timings);
  std::cerr << "wrote " << records.size() << " records to " << dir << "/results.tsv\n";
  return 0;
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
  CLI::App app{"cache network joint caching/routing solver and experiment harness"};
  app.require_subcommand(1);
  app.fallthrough();

  std::uint64_t seed = 0;
  int threads = 1;
  std::string out;
  app.add_option("--seed", seed, "RNG seed");
  app.add_option("--threads", threads, "worker thread count")->envname("CACHENET_THREADS");
  app.add_option("--out", out, "output file or directory");

  ScenarioSpec spec;
  std::string topology;
  PDConfig pd;
  BaselineConfig baseline;
  bool no_momentum = false, run_to_max = false, timings = false;
  std::string instance_path, strategy_path, algorithm = "primaldual";
  std::vector<std::string> algorithms = known_algorithms();
  std::vector<double> kappas{1.0};
  std::vector<std::uint64_t> seeds;

  CLI::App* generate = app.add_subcommand("generate", "generate a scenario instance file");
  add_scenario_options(generate, spec, topology);

  CLI::App* solve = app.add_subcommand("solve", "run one algorithm on an instance file");
  solve->add_option("--instance", instance_path, "instance file")->required();
  solve->add_option("--algorithm", algorithm, "solver to run")
      ->check(CLI::IsMember(known_algorithms()));
  add_solver_options(solve, pd, baseline, no_momentum, run_to_max);
  solve->add_flag("--timings", timings, "include wall-clock timings in tables");

  CLI::App* evaluate = app.add_subcommand("evaluate", "recompute metrics for a saved strategy");
  evaluate->add_option("--instance", instance_path, "instance file")->required();
  evaluate->add_option("--strategy", strategy_path, "strategy file")->required();

  CLI::App* sweep = app.add_subcommand("sweep", "run an algorithm grid over seeds and kappas");
  add_scenario_options(sweep, spec, topology);
  sweep->add_option("--seeds", seeds, "seed list")->delimiter(',');
  sweep->add_option("--kappas", kappas, "looseness list")->delimiter(',');
  sweep->add_option("--algorithms", algorithms, "algorithm list")
      ->delimiter(',')
      ->check(CLI::IsMember(known_algorithms()));
  add_solver_options(sweep, pd, baseline, no_momentum, run_to_max);
  sweep->add_flag("--timings", timings, "include wall-clock timings in tables");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  pd.momentum = !no_momentum;
  pd.stop_on_convergence = !run_to_max;
  pd.threads = threads;
  pd.fw.threads = threads;
  baseline.fw.threads = threads;
  spec.seed = seed;
  if (seeds.empty()) seeds.push_back(seed);

  try {
    if (!topology.empty()) {
      const auto kind = parse_topology(topology);
      if (!kind) {
        std::cerr << "unknown topology: " << topology << '\n';
        return 1;
      }
      spec.topology = *kind;
    }
    if (generate->parsed()) return do_generate(spec, out);
    if (solve->parsed())
      return do_solve(instance_path, algorithm, pd, baseline, out, timings);
    if (evaluate->parsed()) return do_evaluate(instance_path, strategy_path, out);
    if (sweep->parsed())
      return do_sweep(spec, seeds, kappas, algorithms, pd, baseline, threads, out, timings);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace cachenet
