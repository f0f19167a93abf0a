#pragma once

#include <string>

#include "cachenet/lp.hpp"
#include "cachenet/primal_dual.hpp"

namespace cachenet {

enum class BaselineKind { Random1, Random2, Greedy1, Greedy2, Alternating };

std::string baseline_name(BaselineKind kind);

struct LpRoutingStatus {
  enum Value { Optimal, Infeasible };
};

// Routing produced by the optimal-routing LP for a fixed caching vector.
struct LPSolution {
  Vec rho_tilde;
  double objective = 0.0;  // cache gain at (xi_fixed, rho_tilde)
  enum class Status { Optimal, Infeasible } status = Status::Infeasible;
};

// Capacity-oblivious fractional placement: at each node the items with a
// request path through the node share the cache budget equally,
// xi_{v,i} = min{c_v / #items, 1}.
Vec uniform_caching(const NetworkInstance& instance, const DemandModel& demand);

// Classic greedy placement for a frozen routing: repeatedly set to 1 the
// caching coordinate with the largest gain increase until caches fill or
// no increase is positive. Lazy marginal re-evaluation keeps this exact.
Vec greedy_caching(const ObjectiveContext& ctx, const Vec& rho_tilde_fixed);

// Exact gain-maximizing routing for a frozen caching vector, subject to the
// per-request selection equalities and all link capacities. Infeasibility
// is a status, not an error.
LPSolution optimal_routing(const ObjectiveContext& ctx, const Vec& xi_fixed);

struct BaselineConfig {
  FWConfig fw;                        // alternating's caching solver
  int alternating_max_rounds = 25;
  double gain_delta_threshold = 1e-3; // alternating convergence
};

RunReport run_baseline(BaselineKind kind, const NetworkInstance& instance,
                       const DemandModel& demand, const BaselineConfig& config = {});

// Alternating maximization: Frank-Wolfe caching for the current routing,
// then optimal routing for the new caching, until the gain settles.
RunReport alternating(const NetworkInstance& instance, const DemandModel& demand,
                      const BaselineConfig& config = {});

}  // namespace cachenet
