#pragma once

#include <string>
#include <vector>

#include "cachenet/baselines.hpp"
#include "cachenet/scenario.hpp"

namespace cachenet {

struct MetricsRecord {
  std::string algorithm;
  std::string instance_id;
  double kappa = 1.0;
  double gain = 0.0;
  double normalized_gain = 0.0;  // gain / primal-dual gain on the same instance
  double inf = 0.0;
  double max_inf = 0.0;
  long iterations = 0;
  double wall_seconds = 0.0;
  std::string status;  // "feasible" or "infeasible"
};

struct ExperimentGrid {
  std::vector<ScenarioSpec> scenarios;
  std::vector<std::string> algorithms;  // primal-dual is always run (it normalizes)
  PDConfig pd;
  BaselineConfig baseline;
  int threads = 1;         // parallel grid cells
  bool write_traces = true;
  bool write_instances = false;
};

std::string instance_label(const ScenarioSpec& spec);

// Runs `algorithm` ("primaldual" or a baseline name) on one instance.
RunReport dispatch_solver(const std::string& algorithm, const NetworkInstance& instance,
                          const DemandModel& demand, const PDConfig& pd,
                          const BaselineConfig& baseline);

// Runs every (scenario x algorithm) cell, normalizes gains by the
// primal-dual gain of the same instance, writes per-run trace and strategy
// files under out_dir, and returns records sorted by (instance, algorithm).
// Cell failures are isolated into "error" status records.
std::vector<MetricsRecord> run_experiment(const ExperimentGrid& grid,
                                          const std::string& out_dir);

// Tab-separated table with a fixed column order. Timings are volatile, so
// they are zeroed unless explicitly requested; runs are otherwise
// bit-reproducible.
void emit_results(const std::vector<MetricsRecord>& records, const std::string& path,
                  bool include_timings = false);

std::vector<MetricsRecord> parse_results(const std::string& path);

// Per-run JSON document: convergence trace plus final metrics. Excludes
// wall time so identical runs serialize identically.
void save_report(const RunReport& report, const std::string& path);

MetricsRecord to_metrics(const RunReport& report, const std::string& instance_id, double kappa,
                         double pd_gain);

}  // namespace cachenet
