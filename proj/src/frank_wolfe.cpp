#include "cachenet/frank_wolfe.hpp"

#include <algorithm>
#include <stdexcept>

namespace cachenet {

namespace {

// Indices of the `budget` largest strictly positive values in
// g[offset .. offset+count), value-descending with index ascending on ties.
void select_top_positive(const Vec& g, int offset, int count, int budget,
                         std::vector<int>& scratch, std::vector<int>& picked) {
  scratch.clear();
  for (int j = 0; j < count; ++j)
    if (g[offset + j] > 0.0) scratch.push_back(j);
  if (static_cast<int>(scratch.size()) > budget) {
    std::partial_sort(scratch.begin(), scratch.begin() + budget, scratch.end(),
                      [&](int a, int b) {
                        const double ga = g[offset + a], gb = g[offset + b];
                        return ga > gb || (ga == gb && a < b);
                      });
    scratch.resize(budget);
  }
  picked = scratch;
}

}  // namespace

StrategyPair lmo(const ObjectiveContext& ctx, const GradientVector& g, LmoScope scope) {
  if (g.size() != ctx.dim()) throw std::invalid_argument("lmo: gradient dimension mismatch");
  if (!g.allFinite()) throw std::invalid_argument("lmo: gradient not finite");

  const NetworkInstance& inst = ctx.instance();
  const DemandModel& demand = ctx.demand();
  StrategyPair v = StrategyPair::zeros(inst, demand);

  std::vector<int> scratch, picked;
  for (int node = 0; node < inst.node_count(); ++node) {
    const int budget = std::min(inst.cache_capacity(node), inst.catalog_size());
    if (budget == 0) continue;
    const int offset = inst.xi_coord(node, 0);
    select_top_positive(g, offset, inst.catalog_size(), budget, scratch, picked);
    for (int j : picked) v.xi[offset + j] = 1.0;
  }
  if (scope == LmoScope::Joint) {
    for (int r = 0; r < demand.request_count(); ++r) {
      const int np = static_cast<int>(demand.paths(r).size());
      if (np <= 1) continue;  // a single path must stay selected
      const int offset = ctx.xi_dim() + demand.path_offset(r);
      select_top_positive(g, offset, np, np - 1, scratch, picked);
      for (int j : picked) v.rho_tilde[demand.path_offset(r) + j] = 1.0;
    }
  }
  return v;
}

StrategyPair bind_routing(const ObjectiveContext& ctx, const StrategyPair& y,
                          const DualVector& psi) {
  const DemandModel& demand = ctx.demand();
  StrategyPair out = y;
  const GradientVector g = gradient(ctx, y, psi);

  std::vector<int> order;
  for (int r = 0; r < demand.request_count(); ++r) {
    const int np = static_cast<int>(demand.paths(r).size());
    const int offset = demand.path_offset(r);
    double deficit =
        static_cast<double>(np - 1) - out.rho_tilde.segment(offset, np).sum();
    if (deficit <= 0.0) continue;
    order.resize(np);
    for (int j = 0; j < np; ++j) order[j] = j;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      const double ga = g[ctx.xi_dim() + offset + a], gb = g[ctx.xi_dim() + offset + b];
      return ga > gb || (ga == gb && a < b);
    });
    for (int j : order) {
      const double room = 1.0 - out.rho_tilde[offset + j];
      const double step = std::min(room, deficit);
      if (step <= 0.0) continue;
      out.rho_tilde[offset + j] += step;
      deficit -= step;
      if (deficit <= 0.0) break;
    }
  }
  return out;
}

namespace {

FWResult fw_loop(const ObjectiveContext& ctx, const DualVector& psi, const FWConfig& config,
                 LmoScope scope, const Vec* rho_tilde_fixed) {
  if (config.iterations < 1) throw std::invalid_argument("fw: iteration count must be >= 1");
  const int steps = std::min(config.iterations, config.max_iterations);

  FWResult res;
  res.y = StrategyPair::zeros(ctx.instance(), ctx.demand());
  if (rho_tilde_fixed != nullptr) res.y.rho_tilde = *rho_tilde_fixed;

  const double gamma = 1.0 / static_cast<double>(steps);
  double tau = 0.0;
  for (int k = 0; k < steps && tau < 1.0; ++k) {
    const GradientVector g = gradient(ctx, res.y, psi, config.threads);
    const StrategyPair v = lmo(ctx, g, scope);
    const double step = k + 1 == steps ? 1.0 - tau : std::min(gamma, 1.0 - tau);
    res.y.xi += step * v.xi;
    if (scope == LmoScope::Joint) res.y.rho_tilde += step * v.rho_tilde;
    tau += step;
    ++res.iterations;
    if (config.record_objective) res.objective_trace.push_back(lagrangian(ctx, res.y, psi));
  }
  // Mass sums to one exactly, but guard the box against accumulation noise.
  res.y.xi = res.y.xi.cwiseMax(0.0).cwiseMin(1.0);
  res.y.rho_tilde = res.y.rho_tilde.cwiseMax(0.0).cwiseMin(1.0);
  return res;
}

}  // namespace

FWResult frank_wolfe_variant(const ObjectiveContext& ctx, const DualVector& psi,
                             const FWConfig& config) {
  FWResult res = fw_loop(ctx, psi, config, LmoScope::Joint, nullptr);
  res.y = bind_routing(ctx, res.y, psi);
  if (config.record_objective) res.objective_trace.push_back(lagrangian(ctx, res.y, psi));
  return res;
}

FWResult frank_wolfe_caching(const ObjectiveContext& ctx, const Vec& rho_tilde_fixed,
                             const FWConfig& config) {
  const DualVector psi = DualVector::zeros(ctx.instance());
  return fw_loop(ctx, psi, config, LmoScope::CachingOnly, &rho_tilde_fixed);
}

double lagrangian_positivity_offset(const ObjectiveContext& ctx, const DualVector& psi) {
  const double total = ctx.demand().total_lambda();
  double c = 0.0;
  const auto& edges = ctx.instance().edges();
  for (int e = 0; e < static_cast<int>(edges.size()); ++e)
    c += psi.psi[e] * (total - edges[e].capacity);
  return c;
}

double lagrangian_smoothness_bound(const ObjectiveContext& ctx, const DualVector& psi) {
  const StrategyPair ones = StrategyPair::ones(ctx.instance(), ctx.demand());
  const double d = static_cast<double>(ctx.dim());
  return 2.0 * lagrangian(ctx, ones, psi) * d * d;
}

}  // namespace cachenet
