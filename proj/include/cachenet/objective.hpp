#pragma once

#include <vector>

#include "cachenet/network.hpp"
#include "cachenet/types.hpp"

namespace cachenet {

// Gradient of the joint objective, laid out as [xi block | rho_tilde block].
using GradientVector = Vec;

// Precomputed per-path tables for fast evaluation of costs, flows and
// gradients. Costs accrue on response edges: the k-th hop of a path
// p_0 .. p_{m} (0-based) loads edge (p_{k+1}, p_k) and is paid only when no
// node among p_0 .. p_k holds the item.
class ObjectiveContext {
 public:
  struct PathTable {
    int request = -1;
    double lambda = 0.0;
    int rho_coord = -1;
    std::vector<int> xi_coords;    // xi coordinate of (p_k, item), k = 0..m-1
    std::vector<int> resp_edges;   // index of edge (p_{k+1}, p_k), k = 0..m-1
    std::vector<double> weights;   // weight of those edges
  };

  ObjectiveContext(const NetworkInstance& instance, const DemandModel& demand);

  const NetworkInstance& instance() const { return *instance_; }
  const DemandModel& demand() const { return *demand_; }
  const std::vector<PathTable>& paths() const { return paths_; }
  const PathTable& path(int r, int p) const { return paths_[demand_->rho_coord(r, p)]; }

  // Cost of serving every request over every path from the designated
  // servers with all caches empty; the additive constant of the gain.
  double c0() const { return c0_; }

  int dim() const { return instance_->xi_dim() + demand_->total_paths(); }
  int xi_dim() const { return instance_->xi_dim(); }
  int rho_dim() const { return demand_->total_paths(); }

 private:
  const NetworkInstance* instance_;
  const DemandModel* demand_;
  std::vector<PathTable> paths_;
  double c0_ = 0.0;
};

// Expected transfer cost C(xi, 1 - rho_tilde). Nonnegative, at most c0.
double expected_cost(const ObjectiveContext& ctx, const StrategyPair& y);

// Expected cache gain F = c0 - C. Zero at y = 0, c0 at y = 1, monotone.
double cache_gain(const ObjectiveContext& ctx, const StrategyPair& y);

// Expected traffic over every directed edge, indexed like instance edges.
Vec edge_flows(const ObjectiveContext& ctx, const StrategyPair& y);

// Expected traffic over edge (u,v); unknown edge throws.
double edge_flow(const ObjectiveContext& ctx, const StrategyPair& y, NodeId u, NodeId v);

// Flow minus capacity, per edge. May be negative (slack).
Vec overflows(const ObjectiveContext& ctx, const StrategyPair& y);
double overflow(const ObjectiveContext& ctx, const StrategyPair& y, NodeId u, NodeId v);

// L(y, psi) = F(y) - sum_e psi_e * (flow_e(y) - capacity_e). Negative
// multipliers throw.
double lagrangian(const ObjectiveContext& ctx, const StrategyPair& y, const DualVector& psi);

// Exact gradient of L at y. L is multilinear, so coordinate i equals
// L(y | y_i = 1) - L(y | y_i = 0); computed analytically in one pass over
// all (request, path, hop) triples with prefix/suffix products.
// With psi >= 0 every coordinate is nonnegative. `threads` > 1 splits the
// path tables into contiguous blocks; partial sums are reduced in block
// order, so results are reproducible for a fixed thread count.
GradientVector gradient(const ObjectiveContext& ctx, const StrategyPair& y,
                        const DualVector& psi, int threads = 1);

// Views into a joint [xi | rho_tilde] vector.
inline Eigen::VectorBlock<Vec> xi_block(Vec& joint, const ObjectiveContext& ctx) {
  return joint.segment(0, ctx.xi_dim());
}
inline Eigen::VectorBlock<Vec> rho_block(Vec& joint, const ObjectiveContext& ctx) {
  return joint.segment(ctx.xi_dim(), ctx.rho_dim());
}
inline Eigen::VectorBlock<const Vec> xi_block(const Vec& joint, const ObjectiveContext& ctx) {
  return joint.segment(0, ctx.xi_dim());
}
inline Eigen::VectorBlock<const Vec> rho_block(const Vec& joint, const ObjectiveContext& ctx) {
  return joint.segment(ctx.xi_dim(), ctx.rho_dim());
}

}  // namespace cachenet
