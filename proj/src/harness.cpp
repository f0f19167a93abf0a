#include "cachenet/harness.hpp"

#include <atomic>
#include <algorithm>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "cachenet/io.hpp"

namespace cachenet {

namespace {

using nlohmann::json;

std::string trim_zeros(double v) { return format_double(v); }

}  // namespace

std::string instance_label(const ScenarioSpec& spec) {
  std::ostringstream os;
  os << topology_name(spec.topology) << "_s" << spec.seed << "_k" << trim_zeros(spec.kappa);
  return os.str();
}

RunReport dispatch_solver(const std::string& algorithm, const NetworkInstance& instance,
                          const DemandModel& demand, const PDConfig& pd,
                          const BaselineConfig& baseline) {
  if (algorithm == "primaldual") return run_primal_dual(instance, demand, pd);
  if (algorithm == "random1") return run_baseline(BaselineKind::Random1, instance, demand, baseline);
  if (algorithm == "random2") return run_baseline(BaselineKind::Random2, instance, demand, baseline);
  if (algorithm == "greedy1") return run_baseline(BaselineKind::Greedy1, instance, demand, baseline);
  if (algorithm == "greedy2") return run_baseline(BaselineKind::Greedy2, instance, demand, baseline);
  if (algorithm == "alternating")
    return run_baseline(BaselineKind::Alternating, instance, demand, baseline);
  throw std::invalid_argument("unknown algorithm: " + algorithm);
}

MetricsRecord to_metrics(const RunReport& report, const std::string& instance_id, double kappa,
                         double pd_gain) {
  MetricsRecord rec;
  rec.algorithm = report.algorithm;
  rec.instance_id = instance_id;
  rec.kappa = kappa;
  rec.gain = report.final_gain;
  if (!report.feasible) {
    rec.normalized_gain = 0.0;
  } else if (report.algorithm == "primaldual") {
    rec.normalized_gain = 1.0;
  } else {
    rec.normalized_gain = pd_gain > 0.0 ? report.final_gain / pd_gain : 0.0;
  }
  rec.inf = report.final_inf;
  rec.max_inf = report.final_max_inf;
  rec.iterations = report.iterations;
  rec.wall_seconds = report.wall_seconds;
  rec.status = report.feasible ? "feasible" : "infeasible";
  return rec;
}

std::vector<MetricsRecord> run_experiment(const ExperimentGrid& grid,
                                          const std::string& out_dir) {
  std::vector<std::string> algorithms = grid.algorithms;
  if (std::find(algorithms.begin(), algorithms.end(), "primaldual") == algorithms.end())
    algorithms.insert(algorithms.begin(), "primaldual");

  struct Cell {
    int scenario;
    std::string algorithm;
  };
  std::vector<Cell> cells;
  for (int s = 0; s < static_cast<int>(grid.scenarios.size()); ++s)
    for (const std::string& alg : algorithms) cells.push_back({s, alg});

  struct InstanceData {
    std::string id;
    NetworkInstance instance;
    DemandModel demand;
  };
  std::vector<InstanceData> instances;
  instances.reserve(grid.scenarios.size());
  for (const ScenarioSpec& spec : grid.scenarios) {
    auto [inst, demand] = generate_scenario(spec);
    instances.push_back({instance_label(spec), std::move(inst), std::move(demand)});
    if (grid.write_instances)
      save_instance(instances.back().instance, instances.back().demand,
                    out_dir + "/instance_" + instances.back().id + ".txt");
  }

  std::vector<MetricsRecord> records(cells.size());
  std::vector<RunReport> reports(cells.size());
  std::atomic<std::size_t> next{0};
  std::mutex log_mutex;

  const auto worker = [&] {
    while (true) {
      const std::size_t c = next.fetch_add(1);
      if (c >= cells.size()) return;
      const Cell& cell = cells[c];
      const InstanceData& data = instances[cell.scenario];
      const ScenarioSpec& spec = grid.scenarios[cell.scenario];
      try {
        reports[c] =
            dispatch_solver(cell.algorithm, data.instance, data.demand, grid.pd, grid.baseline);
        records[c] = to_metrics(reports[c], data.id, spec.kappa, 0.0);
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(log_mutex);
        std::cerr << "cell " << data.id << "/" << cell.algorithm << " failed: " << e.what()
                  << '\n';
        records[c].algorithm = cell.algorithm;
        records[c].instance_id = data.id;
        records[c].kappa = spec.kappa;
        records[c].status = "error";
      }
    }
  };
  const int workers = std::max(1, std::min<int>(grid.threads, static_cast<int>(cells.size())));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  // Normalize by the primal-dual gain of the same instance.
  for (std::size_t c = 0; c < cells.size(); ++c) {
    if (records[c].status == "error") continue;
    double pd_gain = 0.0;
    for (std::size_t j = 0; j < cells.size(); ++j)
      if (cells[j].scenario == cells[c].scenario && cells[j].algorithm == "primaldual")
        pd_gain = records[j].gain;
    records[c] = to_metrics(reports[c], records[c].instance_id, records[c].kappa, pd_gain);
  }

  if (grid.write_traces) {
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (records[c].status == "error") continue;
      const std::string base = out_dir + "/" + records[c].instance_id + "_" + records[c].algorithm;
      save_report(reports[c], base + ".trace.json");
      save_strategy(reports[c].final_y, base + ".strategy.json");
    }
  }

  std::sort(records.begin(), records.end(), [](const MetricsRecord& a, const MetricsRecord& b) {
    return a.instance_id < b.instance_id ||
           (a.instance_id == b.instance_id && a.algorithm < b.algorithm);
  });
  return records;
}

void emit_results(const std::vector<MetricsRecord>& records, const std::string& path,
                  bool include_timings) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write results table: " + path);
  out << "algorithm\tinstance\tkappa\tgain\tnormalized_gain\tinf\tmax_inf\titerations\t"
         "wall_seconds\tstatus\n";
  for (const MetricsRecord& r : records) {
    out << r.algorithm << '\t' << r.instance_id << '\t' << format_double(r.kappa) << '\t'
        << format_double(r.gain) << '\t' << format_double(r.normalized_gain) << '\t'
        << format_double(r.inf) << '\t' << format_double(r.max_inf) << '\t' << r.iterations
        << '\t' << format_double(include_timings ? r.wall_seconds : 0.0) << '\t' << r.status
        << '\n';
  }
}

std::vector<MetricsRecord> parse_results(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open results table: " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("results table is empty: " + path);
  std::vector<MetricsRecord> records;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    MetricsRecord r;
    std::string kappa, gain, norm, inf, max_inf, iters, wall;
    if (!std::getline(ss, r.algorithm, '\t') || !std::getline(ss, r.instance_id, '\t') ||
        !std::getline(ss, kappa, '\t') || !std::getline(ss, gain, '\t') ||
        !std::getline(ss, norm, '\t') || !std::getline(ss, inf, '\t') ||
        !std::getline(ss, max_inf, '\t') || !std::getline(ss, iters, '\t') ||
        !std::getline(ss, wall, '\t') || !std::getline(ss, r.status))
      throw std::runtime_error("malformed results row: " + line);
    r.kappa = std::stod(kappa);
    r.gain = std::stod(gain);
    r.normalized_gain = std::stod(norm);
    r.inf = std::stod(inf);
    r.max_inf = std::stod(max_inf);
    r.iterations = std::stol(iters);
    r.wall_seconds = std::stod(wall);
    records.push_back(std::move(r));
  }
  return records;
}

void save_report(const RunReport& report, const std::string& path) {
  json doc;
  doc["algorithm"] = report.algorithm;
  doc["converged"] = report.converged;
  doc["feasible"] = report.feasible;
  doc["iterations"] = report.iterations;
  doc["events"] = report.events;
  doc["final"] = {{"gain", report.final_gain},
                  {"inf", report.final_inf},
                  {"max_inf", report.final_max_inf}};
  auto& trace = doc["trace"] = json::array();
  for (const IterationRecord& rec : report.records)
    trace.push_back({rec.t, rec.gain, rec.lagrangian_value, rec.inf, rec.max_inf, rec.dual_norm});
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write report: " + path);
  out << doc.dump(2) << '\n';
}

}  // namespace cachenet
