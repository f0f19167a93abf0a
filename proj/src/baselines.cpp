#include "cachenet/baselines.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <queue>
#include <set>
#include <stdexcept>
#include <unordered_map>

namespace cachenet {

std::string baseline_name(BaselineKind kind) {
  switch (kind) {
    case BaselineKind::Random1: return "random1";
    case BaselineKind::Random2: return "random2";
    case BaselineKind::Greedy1: return "greedy1";
    case BaselineKind::Greedy2: return "greedy2";
    case BaselineKind::Alternating: return "alternating";
  }
  return "unknown";
}

Vec uniform_caching(const NetworkInstance& instance, const DemandModel& demand) {
  std::vector<std::set<ItemId>> items_through(instance.node_count());
  for (int r = 0; r < demand.request_count(); ++r)
    for (const Path& p : demand.paths(r))
      for (NodeId v : p) items_through[v].insert(demand.request(r).item);

  Vec xi = Vec::Zero(instance.xi_dim());
  for (int v = 0; v < instance.node_count(); ++v) {
    if (items_through[v].empty() || instance.cache_capacity(v) == 0) continue;
    const double share = std::min(
        static_cast<double>(instance.cache_capacity(v)) / items_through[v].size(), 1.0);
    for (ItemId i : items_through[v]) xi[instance.xi_coord(v, i)] = share;
    const double sum = xi.segment(instance.xi_coord(v, 0), instance.catalog_size()).sum();
    if (sum > instance.cache_capacity(v))
      xi.segment(instance.xi_coord(v, 0), instance.catalog_size()) *=
          instance.cache_capacity(v) / sum;
  }
  return xi;
}

namespace {

// Gain increase from pinning one caching coordinate to 1, with routing
// frozen. Walks only the paths that touch the coordinate.
double caching_marginal(const ObjectiveContext& ctx, const Vec& xi, const Vec& rho_tilde,
                        const std::vector<std::pair<int, int>>& occurrences) {
  double total = 0.0;
  for (const auto& [path_idx, j] : occurrences) {
    const auto& t = ctx.paths()[path_idx];
    const double mass = t.lambda * (1.0 - rho_tilde[t.rho_coord]);
    if (mass == 0.0) continue;
    double upstream = 1.0;
    for (int k = 0; k < j; ++k) upstream *= 1.0 - xi[t.xi_coords[k]];
    if (upstream == 0.0) continue;
    const int m = static_cast<int>(t.weights.size());
    double togo = 0.0;
    for (int k = m - 1; k >= j; --k)
      togo = t.weights[k] + (k + 1 < m ? (1.0 - xi[t.xi_coords[k + 1]]) * togo : 0.0);
    total += mass * upstream * togo;
  }
  return total;
}

struct HeapEntry {
  double gain;
  int coord;
  long stamp;
  bool operator<(const HeapEntry& o) const {
    return gain < o.gain || (gain == o.gain && coord > o.coord);
  }
};

}  // namespace

Vec greedy_caching(const ObjectiveContext& ctx, const Vec& rho_tilde_fixed) {
  if (rho_tilde_fixed.size() != ctx.rho_dim())
    throw std::invalid_argument("greedy_caching: routing dimension mismatch");
  const NetworkInstance& inst = ctx.instance();

  std::unordered_map<int, std::vector<std::pair<int, int>>> occurrences;
  for (int t = 0; t < static_cast<int>(ctx.paths().size()); ++t) {
    const auto& coords = ctx.paths()[t].xi_coords;
    for (int j = 0; j < static_cast<int>(coords.size()); ++j)
      occurrences[coords[j]].emplace_back(t, j);
  }

  Vec xi = Vec::Zero(inst.xi_dim());
  std::vector<int> residual = inst.cache_capacities();

  std::priority_queue<HeapEntry> heap;
  for (const auto& [coord, occ] : occurrences) {
    if (residual[coord / inst.catalog_size()] == 0) continue;
    heap.push({caching_marginal(ctx, xi, rho_tilde_fixed, occ), coord, 0});
  }

  long placements = 0;
  while (!heap.empty()) {
    const HeapEntry top = heap.top();
    heap.pop();
    if (top.gain <= 0.0) break;
    const int node = top.coord / inst.catalog_size();
    if (residual[node] == 0 || xi[top.coord] == 1.0) continue;
    if (top.stamp != placements) {
      // Stale marginal; submodularity makes the refreshed value exact.
      heap.push({caching_marginal(ctx, xi, rho_tilde_fixed, occurrences[top.coord]),
                 top.coord, placements});
      continue;
    }
    xi[top.coord] = 1.0;
    --residual[node];
    ++placements;
  }
  return xi;
}

LPSolution optimal_routing(const ObjectiveContext& ctx, const Vec& xi_fixed) {
  if (xi_fixed.size() != ctx.xi_dim())
    throw std::invalid_argument("optimal_routing: caching dimension mismatch");
  const NetworkInstance& inst = ctx.instance();
  const DemandModel& demand = ctx.demand();
  const int n = ctx.rho_dim();  // one selection variable per path

  // Expected cost of each path under the frozen caching, and the residual
  // demand each path would place on each response edge if selected.
  Vec cost = Vec::Zero(n);
  std::vector<std::unordered_map<int, double>> edge_load(n);
  for (int t = 0; t < n; ++t) {
    const auto& table = ctx.paths()[t];
    double miss = 1.0, c = 0.0;
    for (std::size_t k = 0; k < table.weights.size(); ++k) {
      miss *= 1.0 - xi_fixed[table.xi_coords[k]];
      c += table.weights[k] * miss;
      if (miss > 0.0) edge_load[t][table.resp_edges[k]] = table.lambda * miss;
    }
    cost[t] = table.lambda * c;
  }

  std::vector<int> active_edges;
  {
    std::vector<char> seen(inst.edge_count(), 0);
    for (int t = 0; t < n; ++t)
      for (const auto& [e, load] : edge_load[t])
        if (!seen[e] && load > 0.0) seen[e] = 1;
    for (int e = 0; e < inst.edge_count(); ++e)
      if (seen[e]) active_edges.push_back(e);
  }

  LinearProgram lp;
  lp.cost = cost;
  lp.eq_lhs = Mat::Zero(demand.request_count(), n);
  lp.eq_rhs = Vec::Ones(demand.request_count());
  for (int r = 0; r < demand.request_count(); ++r)
    for (int p = 0; p < static_cast<int>(demand.paths(r).size()); ++p)
      lp.eq_lhs(r, demand.rho_coord(r, p)) = 1.0;

  lp.ineq_lhs = Mat::Zero(active_edges.size(), n);
  lp.ineq_rhs = Vec::Zero(active_edges.size());
  for (std::size_t row = 0; row < active_edges.size(); ++row) {
    const int e = active_edges[row];
    lp.ineq_rhs[row] = inst.edges()[e].capacity;
    for (int t = 0; t < n; ++t) {
      const auto it = edge_load[t].find(e);
      if (it != edge_load[t].end()) lp.ineq_lhs(row, t) = it->second;
    }
  }

  const LpResult res = solve_lp(lp);
  LPSolution sol;
  if (res.status != LpStatus::Optimal) {
    sol.status = LPSolution::Status::Infeasible;
    return sol;
  }
  sol.status = LPSolution::Status::Optimal;
  sol.rho_tilde = (Vec::Ones(n) - res.x).cwiseMax(0.0).cwiseMin(1.0);
  sol.objective = cache_gain(ctx, {xi_fixed, sol.rho_tilde});
  return sol;
}

namespace {

RunReport finish_feasible(const ObjectiveContext& ctx, RunReport report, Vec xi, Vec rho_tilde,
                          std::chrono::steady_clock::time_point t_start) {
  report.final_y = {std::move(xi), std::move(rho_tilde)};
  report.final_psi = DualVector::zeros(ctx.instance());
  report.feasible = true;
  report.final_gain = cache_gain(ctx, report.final_y);
  const InfMetrics inf = compute_inf(ctx, report.final_y);
  report.final_inf = inf.avg;
  report.final_max_inf = inf.max;
  if (report.records.empty())
    report.records.push_back({0, report.final_gain, report.final_gain, report.final_inf,
                              report.final_max_inf, 0.0});
  report.iterations = static_cast<int>(report.records.size());
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return report;
}

RunReport finish_infeasible(const ObjectiveContext& ctx, RunReport report, Vec xi,
                            std::chrono::steady_clock::time_point t_start) {
  report.final_y = {std::move(xi), Vec::Zero(ctx.rho_dim())};
  report.final_psi = DualVector::zeros(ctx.instance());
  report.feasible = false;
  report.final_gain = 0.0;
  report.final_inf = kInfSentinel;
  report.final_max_inf = kInfSentinel;
  report.events.push_back("routing LP infeasible");
  report.records.push_back({static_cast<int>(report.records.size()), 0.0, 0.0, kInfSentinel,
                            kInfSentinel, 0.0});
  report.iterations = static_cast<int>(report.records.size());
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return report;
}

}  // namespace

RunReport run_baseline(BaselineKind kind, const NetworkInstance& instance,
                       const DemandModel& demand, const BaselineConfig& config) {
  if (kind == BaselineKind::Alternating) return alternating(instance, demand, config);

  const auto t_start = std::chrono::steady_clock::now();
  const ObjectiveContext ctx(instance, demand);
  RunReport report;
  report.algorithm = baseline_name(kind);

  const Vec rho_zero = Vec::Zero(ctx.rho_dim());
  switch (kind) {
    case BaselineKind::Random1: {
      const Vec xi = uniform_caching(instance, demand);
      const LPSolution lp = optimal_routing(ctx, xi);
      if (lp.status != LPSolution::Status::Optimal)
        return finish_infeasible(ctx, std::move(report), xi, t_start);
      return finish_feasible(ctx, std::move(report), xi, lp.rho_tilde, t_start);
    }
    case BaselineKind::Greedy1: {
      const Vec xi = greedy_caching(ctx, rho_zero);
      const LPSolution lp = optimal_routing(ctx, xi);
      if (lp.status != LPSolution::Status::Optimal)
        return finish_infeasible(ctx, std::move(report), xi, t_start);
      return finish_feasible(ctx, std::move(report), xi, lp.rho_tilde, t_start);
    }
    case BaselineKind::Random2:
    case BaselineKind::Greedy2: {
      const Vec xi_empty = Vec::Zero(instance.xi_dim());
      const LPSolution lp = optimal_routing(ctx, xi_empty);
      if (lp.status != LPSolution::Status::Optimal)
        return finish_infeasible(ctx, std::move(report), xi_empty, t_start);
      const Vec xi = kind == BaselineKind::Random2 ? uniform_caching(instance, demand)
                                                   : greedy_caching(ctx, lp.rho_tilde);
      return finish_feasible(ctx, std::move(report), xi, lp.rho_tilde, t_start);
    }
    case BaselineKind::Alternating: break;  // handled above
  }
  throw std::logic_error("run_baseline: unreachable");
}

RunReport alternating(const NetworkInstance& instance, const DemandModel& demand,
                      const BaselineConfig& config) {
  const auto t_start = std::chrono::steady_clock::now();
  const ObjectiveContext ctx(instance, demand);
  RunReport report;
  report.algorithm = baseline_name(BaselineKind::Alternating);

  Vec rho_tilde = Vec::Zero(ctx.rho_dim());
  Vec xi = Vec::Zero(ctx.xi_dim());
  double prev_gain = 0.0;
  for (int round = 0; round < config.alternating_max_rounds; ++round) {
    xi = frank_wolfe_caching(ctx, rho_tilde, config.fw).y.xi;
    const LPSolution lp = optimal_routing(ctx, xi);
    if (lp.status != LPSolution::Status::Optimal)
      return finish_infeasible(ctx, std::move(report), xi, t_start);
    rho_tilde = lp.rho_tilde;

    const double gain = lp.objective;
    const InfMetrics inf = compute_inf(ctx, {xi, rho_tilde});
    report.records.push_back({round, gain, gain, inf.avg, inf.max, 0.0});
    if (round > 0 && std::abs(gain - prev_gain) < config.gain_delta_threshold) {
      report.converged = true;
      break;
    }
    prev_gain = gain;
  }
  return finish_feasible(ctx, std::move(report), xi, rho_tilde, t_start);
}

}  // namespace cachenet
