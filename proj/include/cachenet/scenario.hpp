#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cachenet/network.hpp"
#include "cachenet/rng.hpp"

namespace cachenet {

enum class TopologyKind {
  ErdosRenyi,
  BalancedTree,
  Hypercube,
  Grid2D,
  SmallWorld,
  BackboneFile,
  Counterexample,
};

std::optional<TopologyKind> parse_topology(const std::string& name);
std::string topology_name(TopologyKind kind);

struct ScenarioSpec {
  TopologyKind topology = TopologyKind::ErdosRenyi;
  std::uint64_t seed = 0;

  // Topology parameters.
  int nodes = 100;               // ER / small-world side count derives from this
  double er_edge_prob = 0.105;   // ER pair probability
  int tree_branching = 3;
  int tree_depth = 5;
  int hypercube_dim = 7;
  int grid_rows = 10;
  int grid_cols = 10;
  int sw_extra_links = 1;        // long-range contacts per node
  double sw_alpha = 2.0;         // distance exponent of the contact law
  std::string backbone_file;

  // Weights, caches, servers.
  int weight_min = 1;
  int weight_max = 100;
  int cache_min = 10;
  int cache_max = 20;
  int catalog = 1000;

  // Demand.
  int query_nodes = 10;
  int requests = 1000;
  double zipf_exponent = 1.2;

  // Paths.
  int max_paths = 5;
  double stretch = 4.0;

  // Capacities.
  double kappa = 1.0;

  bool regenerate_if_disconnected = true;
  int max_regenerate_attempts = 100;
};

// Graph of the requested family with u.a.r. weights, cache capacities and
// one u.a.r. designated server per item. Capacities start at zero; call
// set_link_capacities once demand exists.
NetworkInstance generate_topology(const ScenarioSpec& spec);

// |R| distinct (item, source) pairs over u.a.r. query nodes, never sourcing
// an item at its own server, with Zipf(zipf_exponent) probabilities
// assigned by rank over a random permutation (top rank gets lambda = 1).
std::vector<Request> generate_requests(const ScenarioSpec& spec,
                                       const NetworkInstance& instance, Rng& rng);

// Up to max_paths well-routed paths per request, cheapest first, each within
// `stretch` times the shortest response cost. Requests with no path are
// dropped (collected in `dropped` when given).
DemandModel generate_paths(const ScenarioSpec& spec, const NetworkInstance& instance,
                           const std::vector<Request>& requests,
                           std::vector<Request>* dropped = nullptr);

// Convenience: requests + paths under a fork of the scenario seed.
DemandModel generate_demand(const ScenarioSpec& spec, const NetworkInstance& instance);

// Capacities kappa times the edge flows of a reference strategy (random
// full caches, every routing complement at 1/|P|). Zero-flow edges get
// zero capacity. kappa outside [1, max |P|) is warned about, not rejected.
// The reference point is written to *reference when given; at kappa = 1 it
// is capacity-tight by construction.
NetworkInstance set_link_capacities(const NetworkInstance& instance, const DemandModel& demand,
                                    double kappa, std::uint64_t seed,
                                    StrategyPair* reference = nullptr);

// Full pipeline: topology, demand, capacities.
std::pair<NetworkInstance, DemandModel> generate_scenario(const ScenarioSpec& spec);

// Hand-built 6-node, 2-item instance on which every decoupled baseline
// fails while the joint primal-dual solver stays feasible; certified by
// tests and frozen as a repository fixture.
std::pair<NetworkInstance, DemandModel> build_counterexample();

struct TraceRecord {
  ItemId item = -1;
  NodeId node = -1;
  std::int64_t count = 0;
};

struct TraceOptions {
  int top_requests = 0;          // keep the N most frequent; 0 = all
  double capacity_scale = 1.0;   // multiply every link capacity
  int max_paths = 5;
  double stretch = 4.0;
};

// Parses `item node count` records (comma or whitespace separated; '#'
// comments). Malformed lines raise errors carrying the line number.
std::vector<TraceRecord> parse_trace(const std::string& path);

struct TraceLoad {
  NetworkInstance instance;
  DemandModel demand;
};

// Trace-driven demand: frequencies normalized by the most popular request,
// optional top-N filtering, capacity scaling, and path generation.
TraceLoad load_trace(const std::string& path, const NetworkInstance& instance,
                     const TraceOptions& options = {});

}  // namespace cachenet
