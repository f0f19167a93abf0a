#pragma once

#include <vector>

#include "cachenet/objective.hpp"

namespace cachenet {

struct FWConfig {
  int iterations = 100;       // K; constant step 1/K, sum of steps = 1
  int max_iterations = 10000; // hard cap on K
  bool record_objective = false;
  int threads = 1;
};

struct FWResult {
  StrategyPair y;
  std::vector<double> objective_trace;  // L(y_k, psi) per iteration when recorded
  int iterations = 0;
};

// Which primal blocks the linear oracle may raise.
enum class LmoScope { Joint, CachingOnly };

// Exact linear maximization over the down-closed relaxation: per node, the
// c_v largest positive caching entries are set to 1; per request, the
// |P|-1 largest positive routing entries. Ties go to the lower coordinate.
// Returns a 0/1 vertex.
StrategyPair lmo(const ObjectiveContext& ctx, const GradientVector& g,
                 LmoScope scope = LmoScope::Joint);

// Raises rho_tilde coordinates (largest gradient first, ties to the lower
// path index) until every request satisfies the routing equality, moving a
// relaxed point into the exact feasible set. The objective cannot decrease.
StrategyPair bind_routing(const ObjectiveContext& ctx, const StrategyPair& y,
                          const DualVector& psi);

// Frank-Wolfe variant maximizing L(., psi) from y = 0 with constant step
// 1/K over the relaxed set, followed by bind_routing so the output is
// exactly feasible.
FWResult frank_wolfe_variant(const ObjectiveContext& ctx, const DualVector& psi,
                             const FWConfig& config);

// Caching-only variant used by the alternating baseline: routing is frozen
// at `rho_tilde_fixed`, multipliers at zero, and only the caching block is
// optimized (from xi = 0).
FWResult frank_wolfe_caching(const ObjectiveContext& ctx, const Vec& rho_tilde_fixed,
                             const FWConfig& config);

// Offset that keeps the shifted Lagrangian nonnegative:
// sum_e psi_e (sum_r lambda_r - capacity_e).
double lagrangian_positivity_offset(const ObjectiveContext& ctx, const DualVector& psi);

// Smoothness constant of the shifted Lagrangian used in the approximation
// bound: 2 L(1, psi) (|V||C| + P_TOT)^2.
double lagrangian_smoothness_bound(const ObjectiveContext& ctx, const DualVector& psi);

}  // namespace cachenet
