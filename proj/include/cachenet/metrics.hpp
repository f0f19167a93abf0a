#pragma once

#include <utility>

#include "cachenet/objective.hpp"

namespace cachenet {

// Sentinel reported when a solution is severely infeasible (e.g. a routing
// LP with no feasible point, or positive flow on a zero-capacity edge).
inline constexpr double kInfSentinel = 1e6;

// Flows below this are treated as zero when selecting active edges, so
// that convex-combination rounding noise cannot activate an edge.
inline constexpr double kActiveFlowTol = 1e-12;

struct InfMetrics {
  double avg = 0.0;  // InF: mean positive overflow / capacity over active edges
  double max = 0.0;  // MaxInF
};

// Infeasibility over the active-edge set E' = {e : flow_e(y) > 0}. Empty
// E' yields (0, 0); an active zero-capacity edge yields the sentinel.
InfMetrics compute_inf(const ObjectiveContext& ctx, const StrategyPair& y);

}  // namespace cachenet
