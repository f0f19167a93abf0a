// Test-only reference computations, kept independent of the library's
// evaluation paths: expectations by exhaustive enumeration or sampling,
// gradients by two-point pinned evaluation, optima by grid or vertex
// enumeration.
#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "cachenet/objective.hpp"
#include "cachenet/rng.hpp"

namespace cachenet::oracles {

// Cost of one realized integer state: every selected path pays each hop
// until the first node holding the item.
inline double integer_state_cost(const ObjectiveContext& ctx, const StrategyPair& state) {
  double total = 0.0;
  for (const auto& t : ctx.paths()) {
    if (state.rho_tilde[t.rho_coord] == 1.0) continue;  // path not selected
    for (std::size_t k = 0; k < t.weights.size(); ++k) {
      bool held = false;
      for (std::size_t j = 0; j <= k; ++j)
        if (state.xi[t.xi_coords[j]] == 1.0) {
          held = true;
          break;
        }
      if (held) break;
      total += t.lambda * t.weights[k];
    }
  }
  return total;
}

// Traffic on one edge in a realized integer state.
inline double integer_state_flow(const ObjectiveContext& ctx, const StrategyPair& state,
                                 int edge) {
  double total = 0.0;
  for (const auto& t : ctx.paths()) {
    if (state.rho_tilde[t.rho_coord] == 1.0) continue;
    for (std::size_t k = 0; k < t.weights.size(); ++k) {
      bool held = false;
      for (std::size_t j = 0; j <= k; ++j)
        if (state.xi[t.xi_coords[j]] == 1.0) {
          held = true;
          break;
        }
      if (held) break;
      if (t.resp_edges[k] == edge) total += t.lambda;
    }
  }
  return total;
}

// Exact expectation of `f` over independent Bernoulli coordinates, by
// enumerating every assignment of the fractional coordinates of y.
inline double enumerate_expectation(
    const ObjectiveContext& ctx, const StrategyPair& y,
    const std::function<double(const StrategyPair&)>& f) {
  std::vector<std::pair<bool, int>> free_coords;  // (is_xi, index)
  for (Eigen::Index i = 0; i < y.xi.size(); ++i)
    if (y.xi[i] > 0.0 && y.xi[i] < 1.0) free_coords.emplace_back(true, static_cast<int>(i));
  for (Eigen::Index i = 0; i < y.rho_tilde.size(); ++i)
    if (y.rho_tilde[i] > 0.0 && y.rho_tilde[i] < 1.0)
      free_coords.emplace_back(false, static_cast<int>(i));
  if (free_coords.size() > 22)
    throw std::runtime_error("enumerate_expectation: too many fractional coordinates");

  StrategyPair state = y;
  double total = 0.0;
  const std::size_t combos = std::size_t{1} << free_coords.size();
  for (std::size_t mask = 0; mask < combos; ++mask) {
    double prob = 1.0;
    for (std::size_t b = 0; b < free_coords.size(); ++b) {
      const auto [is_xi, idx] = free_coords[b];
      const double marginal = is_xi ? y.xi[idx] : y.rho_tilde[idx];
      const bool on = (mask >> b) & 1;
      prob *= on ? marginal : 1.0 - marginal;
      (is_xi ? state.xi[idx] : state.rho_tilde[idx]) = on ? 1.0 : 0.0;
    }
    total += prob * f(state);
  }
  return total;
}

struct SampleStats {
  double mean = 0.0;
  double stderr_ = 0.0;
};

// Monte-Carlo estimate of the expected cost by sampling integer caching and
// routing states from the marginals.
inline SampleStats sample_expected_cost(const ObjectiveContext& ctx, const StrategyPair& y,
                                        long samples, std::uint64_t seed) {
  Rng rng(seed);
  StrategyPair state = y;
  double sum = 0.0, sum_sq = 0.0;
  for (long s = 0; s < samples; ++s) {
    for (Eigen::Index i = 0; i < y.xi.size(); ++i)
      state.xi[i] = rng.uniform01() < y.xi[i] ? 1.0 : 0.0;
    for (Eigen::Index i = 0; i < y.rho_tilde.size(); ++i)
      state.rho_tilde[i] = rng.uniform01() < y.rho_tilde[i] ? 1.0 : 0.0;
    const double c = integer_state_cost(ctx, state);
    sum += c;
    sum_sq += c * c;
  }
  SampleStats st;
  st.mean = sum / samples;
  const double var = std::max(sum_sq / samples - st.mean * st.mean, 0.0);
  st.stderr_ = std::sqrt(var / samples);
  return st;
}

// Two-point gradient from the multilinear definition: coordinate i equals
// the function at y_i = 1 minus the function at y_i = 0.
inline Vec pinned_gradient(const ObjectiveContext& ctx, const StrategyPair& y,
                           const std::function<double(const StrategyPair&)>& f) {
  Vec g(ctx.dim());
  StrategyPair probe = y;
  for (int i = 0; i < ctx.xi_dim(); ++i) {
    const double keep = probe.xi[i];
    probe.xi[i] = 1.0;
    const double hi = f(probe);
    probe.xi[i] = 0.0;
    g[i] = hi - f(probe);
    probe.xi[i] = keep;
  }
  for (int i = 0; i < ctx.rho_dim(); ++i) {
    const double keep = probe.rho_tilde[i];
    probe.rho_tilde[i] = 1.0;
    const double hi = f(probe);
    probe.rho_tilde[i] = 0.0;
    g[ctx.xi_dim() + i] = hi - f(probe);
    probe.rho_tilde[i] = keep;
  }
  return g;
}

inline Vec pinned_lagrangian_gradient(const ObjectiveContext& ctx, const StrategyPair& y,
                                      const DualVector& psi) {
  return pinned_gradient(ctx, y,
                         [&](const StrategyPair& p) { return lagrangian(ctx, p, psi); });
}

// Every integral caching state respecting the per-node budgets, as flat
// xi vectors. Intended for instances with at most ~12 usable slots.
inline std::vector<Vec> enumerate_cachings(const NetworkInstance& inst) {
  std::vector<Vec> states{Vec::Zero(inst.xi_dim())};
  for (int v = 0; v < inst.node_count(); ++v) {
    const int cap = inst.cache_capacity(v);
    if (cap == 0) continue;
    std::vector<Vec> grown;
    for (int mask = 0; mask < (1 << inst.catalog_size()); ++mask) {
      if (__builtin_popcount(static_cast<unsigned>(mask)) > cap) continue;
      for (const Vec& base : states) {
        Vec next = base;
        for (int i = 0; i < inst.catalog_size(); ++i)
          if ((mask >> i) & 1) next[inst.xi_coord(v, i)] = 1.0;
        grown.push_back(std::move(next));
      }
    }
    states = std::move(grown);
  }
  return states;
}

// Exhaustive integral optimum of the cache gain for a frozen routing.
inline double best_integral_caching_gain(const ObjectiveContext& ctx, const Vec& rho_tilde) {
  double best = -std::numeric_limits<double>::infinity();
  for (const Vec& xi : enumerate_cachings(ctx.instance()))
    best = std::max(best, cache_gain(ctx, {xi, rho_tilde}));
  return best;
}

// Every 0/1 vertex of the relaxed joint feasible set.
inline std::vector<StrategyPair> enumerate_relaxed_vertices(const ObjectiveContext& ctx) {
  const DemandModel& demand = ctx.demand();
  std::vector<Vec> routings{Vec::Zero(ctx.rho_dim())};
  for (int r = 0; r < demand.request_count(); ++r) {
    const int np = static_cast<int>(demand.paths(r).size());
    std::vector<Vec> grown;
    for (int mask = 0; mask < (1 << np); ++mask) {
      if (__builtin_popcount(static_cast<unsigned>(mask)) > np - 1) continue;
      for (const Vec& base : routings) {
        Vec next = base;
        for (int p = 0; p < np; ++p)
          if ((mask >> p) & 1) next[demand.rho_coord(r, p)] = 1.0;
        grown.push_back(std::move(next));
      }
    }
    routings = std::move(grown);
  }
  std::vector<StrategyPair> vertices;
  for (const Vec& xi : enumerate_cachings(ctx.instance()))
    for (const Vec& rho : routings) vertices.push_back({xi, rho});
  return vertices;
}

// Grid search for the Lagrangian maximum over the exact feasible set:
// caching over per-node budget simplices and routing over the equality
// simplices, both at resolution 1/steps. Intended for tiny instances.
inline StrategyPair grid_max_lagrangian(const ObjectiveContext& ctx, const DualVector& psi,
                                        int steps, double* best_value) {
  const NetworkInstance& inst = ctx.instance();
  const DemandModel& demand = ctx.demand();

  std::vector<int> cache_nodes;
  for (int v = 0; v < inst.node_count(); ++v)
    if (inst.cache_capacity(v) > 0) cache_nodes.push_back(v);

  StrategyPair point = StrategyPair::zeros(inst, demand);
  StrategyPair best = point;
  double best_val = -std::numeric_limits<double>::infinity();

  // Enumerate one node's caching row at the grid resolution, then recurse.
  const std::function<void(std::size_t)> walk_routing = [&](std::size_t r) {
    if (r == static_cast<std::size_t>(demand.request_count())) {
      const double val = lagrangian(ctx, point, psi);
      if (val > best_val) {
        best_val = val;
        best = point;
      }
      return;
    }
    const int np = static_cast<int>(demand.paths(static_cast<int>(r)).size());
    const int offset = demand.path_offset(static_cast<int>(r));
    // rho_tilde over the equality simplex: coordinates sum to np - 1.
    const std::function<void(int, int)> fill = [&](int p, int remaining) {
      if (p == np - 1) {
        if (remaining > steps) return;
        point.rho_tilde[offset + p] = static_cast<double>(remaining) / steps;
        walk_routing(r + 1);
        return;
      }
      for (int s = 0; s <= std::min(steps, remaining); ++s) {
        point.rho_tilde[offset + p] = static_cast<double>(s) / steps;
        fill(p + 1, remaining - s);
      }
    };
    fill(0, (np - 1) * steps);
  };

  const std::function<void(std::size_t)> walk_caching = [&](std::size_t n) {
    if (n == cache_nodes.size()) {
      walk_routing(0);
      return;
    }
    const int v = cache_nodes[n];
    const int budget = inst.cache_capacity(v) * steps;
    const std::function<void(int, int)> fill = [&](int i, int used) {
      if (i == inst.catalog_size()) {
        walk_caching(n + 1);
        return;
      }
      for (int s = 0; s <= std::min(steps, budget - used); ++s) {
        point.xi[inst.xi_coord(v, i)] = static_cast<double>(s) / steps;
        fill(i + 1, used + s);
      }
    };
    fill(0, 0);
  };

  walk_caching(0);
  if (best_value) *best_value = best_val;
  return best;
}

// Independent shortest-path distances (Bellman-Ford) in response costs,
// from `source` to every node.
inline std::vector<double> bellman_ford_response_cost(const NetworkInstance& inst,
                                                      NodeId source) {
  std::vector<double> dist(inst.node_count(), std::numeric_limits<double>::infinity());
  dist[source] = 0.0;
  for (int round = 0; round + 1 < inst.node_count(); ++round) {
    bool changed = false;
    for (const DirectedEdge& e : inst.edges()) {
      // Hop u -> v on a path costs the response edge (v, u).
      const int back = inst.edge_index(e.to, e.from);
      const double w = inst.edges()[back].weight;
      if (dist[e.from] + w < dist[e.to]) {
        dist[e.to] = dist[e.from] + w;
        changed = true;
      }
    }
    if (!changed) break;
  }
  return dist;
}

inline double path_response_cost(const NetworkInstance& inst, const Path& p) {
  double c = 0.0;
  for (std::size_t k = 0; k + 1 < p.size(); ++k)
    c += inst.edges()[inst.edge_index(p[k + 1], p[k])].weight;
  return c;
}

}  // namespace cachenet::oracles
