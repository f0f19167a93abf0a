#pragma once

#include <string>
#include <vector>

#include "cachenet/frank_wolfe.hpp"
#include "cachenet/metrics.hpp"

namespace cachenet {

struct PDConfig {
  int max_iterations = 1000;
  double dual_step_scale = 0.0;  // c in beta_t = c/sqrt(t); 0 = calibrate on y(1)
  double inf_threshold = 1e-3;   // converged when InF <= this ...
  double gain_delta_threshold = 1e-3;  // ... and the gain moved less than this
  FWConfig fw;
  bool momentum = true;              // alpha_t = 2/(t+2); off = 1
  bool stop_on_convergence = true;   // false: always run max_iterations
  bool validate_iterates = false;    // check every y(t) against the exact set
  int threads = 1;
};

struct IterationRecord {
  int t = 0;
  double gain = 0.0;
  double lagrangian_value = 0.0;
  double inf = 0.0;
  double max_inf = 0.0;
  double dual_norm = 0.0;
};

// Outcome of a solver run; shared by the primal-dual algorithm and the
// baselines. `feasible` is false only when a routing LP had no feasible
// point, in which case inf metrics carry the sentinel.
struct RunReport {
  std::string algorithm;
  std::vector<IterationRecord> records;
  StrategyPair final_y;
  DualVector final_psi;
  bool converged = false;
  bool feasible = true;
  bool iterates_in_feasible_set = true;  // meaningful when validation was on
  int iterations = 0;
  double wall_seconds = 0.0;
  double final_gain = 0.0;
  double final_inf = 0.0;
  double final_max_inf = 0.0;
  std::vector<std::string> events;
};

// One primal update: Frank-Wolfe for the current multipliers, blended into
// the previous iterate with weight alpha_t = 2/(t+2) (or 1 with momentum
// off). The result stays exactly feasible.
StrategyPair primal_step(const ObjectiveContext& ctx, const StrategyPair& y_t,
                         const DualVector& psi_t, int t, const PDConfig& config);

// Projected dual ascent on the overflows, step c/sqrt(max(t,1)).
DualVector dual_step(const ObjectiveContext& ctx, const StrategyPair& y_next,
                     const DualVector& psi_t, int t, const PDConfig& config);

RunReport run_primal_dual(const NetworkInstance& instance, const DemandModel& demand,
                          const PDConfig& config = {});

// Variant reusing an existing context (the instance/demand must outlive it).
RunReport run_primal_dual(const ObjectiveContext& ctx, const PDConfig& config);

}  // namespace cachenet
