#include "cachenet/metrics.hpp"

#include <algorithm>

namespace cachenet {

InfMetrics compute_inf(const ObjectiveContext& ctx, const StrategyPair& y) {
  const Vec flows = edge_flows(ctx, y);
  const auto& edges = ctx.instance().edges();

  InfMetrics m;
  double sum = 0.0;
  int active = 0;
  for (int e = 0; e < static_cast<int>(edges.size()); ++e) {
    if (flows[e] <= kActiveFlowTol) continue;
    ++active;
    double score;
    if (edges[e].capacity <= 0.0) {
      score = kInfSentinel;
    } else {
      score = std::max(flows[e] - edges[e].capacity, 0.0) / edges[e].capacity;
    }
    sum += score;
    m.max = std::max(m.max, score);
  }
  if (active > 0) m.avg = sum / active;
  m.avg = std::min(m.avg, kInfSentinel);
  m.max = std::min(m.max, kInfSentinel);
  return m;
}

}  // namespace cachenet
