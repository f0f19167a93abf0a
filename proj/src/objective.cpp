#include "cachenet/objective.hpp"

#include <stdexcept>
#include <thread>

namespace cachenet {

ObjectiveContext::ObjectiveContext(const NetworkInstance& instance, const DemandModel& demand)
    : instance_(&instance), demand_(&demand) {
  paths_.reserve(demand.total_paths());
  for (int r = 0; r < demand.request_count(); ++r) {
    const Request& req = demand.request(r);
    for (int p = 0; p < static_cast<int>(demand.paths(r).size()); ++p) {
      const Path& path = demand.paths(r)[p];
      PathTable t;
      t.request = r;
      t.lambda = req.lambda;
      t.rho_coord = demand.rho_coord(r, p);
      const int hops = static_cast<int>(path.size()) - 1;
      t.xi_coords.resize(hops);
      t.resp_edges.resize(hops);
      t.weights.resize(hops);
      double path_cost = 0.0;
      for (int k = 0; k < hops; ++k) {
        t.xi_coords[k] = instance.xi_coord(path[k], req.item);
        const int e = instance.edge_index(path[k + 1], path[k]);
        if (e < 0) throw std::invalid_argument("objective: response edge missing");
        t.resp_edges[k] = e;
        t.weights[k] = instance.edges()[e].weight;
        path_cost += t.weights[k];
      }
      // Same summation association as expected_cost at y = 0, so the gain
      // there is exactly zero.
      c0_ += req.lambda * path_cost;
      paths_.push_back(std::move(t));
    }
  }
}

double expected_cost(const ObjectiveContext& ctx, const StrategyPair& y) {
  if (y.xi.size() != ctx.xi_dim() || y.rho_tilde.size() != ctx.rho_dim())
    throw std::invalid_argument("expected_cost: dimension mismatch");
  double total = 0.0;
  for (const auto& t : ctx.paths()) {
    const double rho = 1.0 - y.rho_tilde[t.rho_coord];
    if (rho == 0.0) continue;
    double miss = 1.0, cost = 0.0;
    for (std::size_t k = 0; k < t.weights.size(); ++k) {
      miss *= 1.0 - y.xi[t.xi_coords[k]];
      cost += t.weights[k] * miss;
    }
    total += t.lambda * rho * cost;
  }
  return total;
}

double cache_gain(const ObjectiveContext& ctx, const StrategyPair& y) {
  return ctx.c0() - expected_cost(ctx, y);
}

Vec edge_flows(const ObjectiveContext& ctx, const StrategyPair& y) {
  if (y.xi.size() != ctx.xi_dim() || y.rho_tilde.size() != ctx.rho_dim())
    throw std::invalid_argument("edge_flows: dimension mismatch");
  Vec flows = Vec::Zero(ctx.instance().edge_count());
  for (const auto& t : ctx.paths()) {
    const double mass = t.lambda * (1.0 - y.rho_tilde[t.rho_coord]);
    if (mass == 0.0) continue;
    double miss = 1.0;
    for (std::size_t k = 0; k < t.resp_edges.size(); ++k) {
      miss *= 1.0 - y.xi[t.xi_coords[k]];
      flows[t.resp_edges[k]] += mass * miss;
    }
  }
  return flows;
}

double edge_flow(const ObjectiveContext& ctx, const StrategyPair& y, NodeId u, NodeId v) {
  const int e = ctx.instance().edge_index(u, v);
  if (e < 0) throw std::invalid_argument("edge_flow: unknown edge");
  return edge_flows(ctx, y)[e];
}

Vec overflows(const ObjectiveContext& ctx, const StrategyPair& y) {
  Vec g = edge_flows(ctx, y);
  const auto& edges = ctx.instance().edges();
  for (int e = 0; e < static_cast<int>(edges.size()); ++e) g[e] -= edges[e].capacity;
  return g;
}

double overflow(const ObjectiveContext& ctx, const StrategyPair& y, NodeId u, NodeId v) {
  const int e = ctx.instance().edge_index(u, v);
  if (e < 0) throw std::invalid_argument("overflow: unknown edge");
  return edge_flow(ctx, y, u, v) - ctx.instance().edges()[e].capacity;
}

double lagrangian(const ObjectiveContext& ctx, const StrategyPair& y, const DualVector& psi) {
  if (psi.psi.size() != ctx.instance().edge_count())
    throw std::invalid_argument("lagrangian: dual dimension mismatch");
  if ((psi.psi.array() < 0.0).any())
    throw std::invalid_argument("lagrangian: negative multiplier");
  return cache_gain(ctx, y) - psi.psi.dot(overflows(ctx, y));
}

namespace {

// Accumulates gradient contributions of path tables [begin, end) into out.
void gradient_range(const ObjectiveContext& ctx, const StrategyPair& y, const Vec& psi,
                    std::size_t begin, std::size_t end, Vec& out) {
  const int xi_dim = ctx.xi_dim();
  std::vector<double> pre, togo;
  for (std::size_t idx = begin; idx < end; ++idx) {
    const auto& t = ctx.paths()[idx];
    const std::size_t m = t.weights.size();
    pre.resize(m);
    togo.resize(m);
    // pre[k]: probability the request survives past p_k given it uses p.
    double miss = 1.0;
    for (std::size_t k = 0; k < m; ++k) {
      miss *= 1.0 - y.xi[t.xi_coords[k]];
      pre[k] = miss;
    }
    // togo[k]: multiplier-adjusted cost accrued from hop k onward when p_k
    // does not hold the item, discounted by downstream caches only.
    double acc = 0.0;
    for (std::size_t k = m; k-- > 0;) {
      const double w = t.weights[k] + psi[t.resp_edges[k]];
      acc = w + (k + 1 < m ? (1.0 - y.xi[t.xi_coords[k + 1]]) * acc : 0.0);
      togo[k] = acc;
    }
    const double mass = t.lambda * (1.0 - y.rho_tilde[t.rho_coord]);
    for (std::size_t k = 0; k < m; ++k) {
      const double upstream = k == 0 ? 1.0 : pre[k - 1];
      out[t.xi_coords[k]] += mass * upstream * togo[k];
    }
    // Raising rho_tilde removes the path's remaining multiplier-adjusted cost.
    out[xi_dim + t.rho_coord] += t.lambda * (m > 0 ? (1.0 - y.xi[t.xi_coords[0]]) * togo[0] : 0.0);
  }
}

}  // namespace

GradientVector gradient(const ObjectiveContext& ctx, const StrategyPair& y,
                        const DualVector& psi, int threads) {
  if (y.xi.size() != ctx.xi_dim() || y.rho_tilde.size() != ctx.rho_dim())
    throw std::invalid_argument("gradient: dimension mismatch");
  if (psi.psi.size() != ctx.instance().edge_count())
    throw std::invalid_argument("gradient: dual dimension mismatch");
  if ((psi.psi.array() < 0.0).any())
    throw std::invalid_argument("gradient: negative multiplier");

  const std::size_t n = ctx.paths().size();
  if (threads <= 1 || n < 64) {
    Vec out = Vec::Zero(ctx.dim());
    gradient_range(ctx, y, psi.psi, 0, n, out);
    return out;
  }

  const std::size_t workers = std::min<std::size_t>(threads, n);
  std::vector<Vec> partial(workers, Vec::Zero(ctx.dim()));
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = n * w / workers;
    const std::size_t end = n * (w + 1) / workers;
    pool.emplace_back([&, w, begin, end] {
      gradient_range(ctx, y, psi.psi, begin, end, partial[w]);
    });
  }
  for (auto& th : pool) th.join();
  Vec out = Vec::Zero(ctx.dim());
  for (const Vec& part : partial) out += part;  // fixed block order
  return out;
}

}  // namespace cachenet
