#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "cachenet/types.hpp"

namespace cachenet {

// Static description of a cache network: a symmetric directed graph with
// per-edge weights and capacities, a content catalog, designated servers
// per item, and per-node cache capacities. Immutable after construction.
class NetworkInstance {
 public:
  NetworkInstance(int node_count, int catalog_size, std::vector<DirectedEdge> edges,
                  std::vector<int> cache_capacities,
                  std::vector<std::vector<NodeId>> designated_servers);

  int node_count() const { return node_count_; }
  int catalog_size() const { return catalog_size_; }
  const std::vector<DirectedEdge>& edges() const { return edges_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }

  // Index of directed edge (u,v), or -1.
  int edge_index(NodeId u, NodeId v) const;
  bool has_edge(NodeId u, NodeId v) const { return edge_index(u, v) >= 0; }

  int cache_capacity(NodeId v) const { return cache_capacities_[v]; }
  const std::vector<int>& cache_capacities() const { return cache_capacities_; }

  const std::vector<NodeId>& servers(ItemId i) const { return servers_[i]; }
  bool is_server(ItemId i, NodeId v) const;

  // Out-neighbors (neighbor, edge index), sorted by neighbor id.
  const std::vector<std::pair<NodeId, int>>& out_edges(NodeId v) const { return out_[v]; }

  // Flattened caching coordinate of (node, item): v * |C| + i.
  int xi_coord(NodeId v, ItemId i) const { return v * catalog_size_ + i; }
  int xi_dim() const { return node_count_ * catalog_size_; }

 private:
  int node_count_;
  int catalog_size_;
  std::vector<DirectedEdge> edges_;
  std::vector<int> cache_capacities_;
  std::vector<std::vector<NodeId>> servers_;
  std::vector<std::vector<std::pair<NodeId, int>>> out_;
  std::unordered_map<std::int64_t, int> edge_lookup_;
};

struct Request {
  ItemId item = -1;
  NodeId source = -1;
  double lambda = 0.0;
};

using Path = std::vector<NodeId>;

// Requests with arrival probabilities and, per request, an ordered set of
// well-routed candidate paths. Construction validates every path against
// the instance; violations throw with a description of the failed condition.
class DemandModel {
 public:
  DemandModel(const NetworkInstance& instance, std::vector<Request> requests,
              std::vector<std::vector<Path>> path_sets);

  int request_count() const { return static_cast<int>(requests_.size()); }
  const Request& request(int r) const { return requests_[r]; }
  const std::vector<Request>& requests() const { return requests_; }
  const std::vector<Path>& paths(int r) const { return path_sets_[r]; }
  const std::vector<std::vector<Path>>& path_sets() const { return path_sets_; }

  // Total number of paths; the dimension of the routing-complement block.
  int total_paths() const { return total_paths_; }
  // Flattened coordinate of path p of request r in the routing block.
  int rho_coord(int r, int p) const { return path_offsets_[r] + p; }
  int path_offset(int r) const { return path_offsets_[r]; }

  double total_lambda() const { return total_lambda_; }

 private:
  std::vector<Request> requests_;
  std::vector<std::vector<Path>> path_sets_;
  std::vector<int> path_offsets_;
  int total_paths_ = 0;
  double total_lambda_ = 0.0;
};

// Throws std::invalid_argument naming the violated well-routedness
// condition if `path` is not a valid candidate for request (item, source).
void check_well_routed(const NetworkInstance& instance, ItemId item, NodeId source,
                       const Path& path);

// Primal variable y = (xi, rho_tilde). xi holds caching marginals laid out
// row-major by (node, item); rho_tilde holds routing-complement marginals
// laid out by request order then path order.
struct StrategyPair {
  Vec xi;
  Vec rho_tilde;

  static StrategyPair zeros(const NetworkInstance& instance, const DemandModel& demand) {
    return {Vec::Zero(instance.xi_dim()), Vec::Zero(demand.total_paths())};
  }
  static StrategyPair ones(const NetworkInstance& instance, const DemandModel& demand) {
    return {Vec::Ones(instance.xi_dim()), Vec::Ones(demand.total_paths())};
  }
};

// One nonnegative multiplier per directed edge, indexed like
// NetworkInstance::edges().
struct DualVector {
  Vec psi;

  static DualVector zeros(const NetworkInstance& instance) {
    return {Vec::Zero(instance.edge_count())};
  }
};

enum class FeasibleSet {
  D,       // routing equalities: sum_p (1 - rho_tilde) = 1 per request
  DPrime,  // down-closed relaxation: sum_p (1 - rho_tilde) >= 1
};

struct ConstraintCheck {
  bool pass = true;
  double worst_violation = 0.0;
  long offending_index = -1;  // coordinate (box), node (capacity), request (routing)
};

struct FeasibilityReport {
  ConstraintCheck box_xi;
  ConstraintCheck box_rho;
  ConstraintCheck cache_capacity;
  ConstraintCheck routing;

  bool pass() const {
    return box_xi.pass && box_rho.pass && cache_capacity.pass && routing.pass;
  }
};

// Tolerance used for the routing equality and capacity sums.
inline constexpr double kFeasibilityTol = 1e-9;

// Checks y against the box, cache-capacity and routing constraints of the
// chosen set. Dimension mismatches throw; infeasibility is reported.
FeasibilityReport validate_strategy(const NetworkInstance& instance, const DemandModel& demand,
                                    const StrategyPair& y, FeasibleSet set_kind);

// Coordinatewise 1 - rho. Involution on [0,1]^n; out-of-range input throws.
Vec route_complement(const Vec& rho);

// 1-based position of v in path; throws if absent.
int path_position(const Path& path, NodeId v);

}  // namespace cachenet
