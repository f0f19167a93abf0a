#include "cachenet/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <map>
#include <queue>
#include <sstream>
#include <stdexcept>

#include "cachenet/io.hpp"
#include "cachenet/objective.hpp"

namespace cachenet {

std::optional<TopologyKind> parse_topology(const std::string& name) {
  if (name == "er" || name == "erdos-renyi") return TopologyKind::ErdosRenyi;
  if (name == "tree" || name == "balanced-tree") return TopologyKind::BalancedTree;
  if (name == "hypercube") return TopologyKind::Hypercube;
  if (name == "grid") return TopologyKind::Grid2D;
  if (name == "smallworld" || name == "small-world") return TopologyKind::SmallWorld;
  if (name == "backbone") return TopologyKind::BackboneFile;
  if (name == "counterexample") return TopologyKind::Counterexample;
  return std::nullopt;
}

std::string topology_name(TopologyKind kind) {
  switch (kind) {
    case TopologyKind::ErdosRenyi: return "er";
    case TopologyKind::BalancedTree: return "tree";
    case TopologyKind::Hypercube: return "hypercube";
    case TopologyKind::Grid2D: return "grid";
    case TopologyKind::SmallWorld: return "smallworld";
    case TopologyKind::BackboneFile: return "backbone";
    case TopologyKind::Counterexample: return "counterexample";
  }
  return "unknown";
}

namespace {

using PairList = std::vector<std::pair<int, int>>;  // undirected node pairs

bool connected(int n, const PairList& pairs) {
  std::vector<std::vector<int>> adj(n);
  for (const auto& [u, v] : pairs) {
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  std::vector<char> seen(n, 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int reached = 1;
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    for (int v : adj[u])
      if (!seen[v]) {
        seen[v] = 1;
        ++reached;
        stack.push_back(v);
      }
  }
  return reached == n;
}

PairList erdos_renyi_pairs(int n, double p, Rng& rng) {
  PairList pairs;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (rng.uniform01() < p) pairs.emplace_back(u, v);
  return pairs;
}

PairList balanced_tree_pairs(int branching, int depth, int& n_out) {
  long n = 1, layer = 1;
  for (int d = 0; d < depth; ++d) {
    layer *= branching;
    n += layer;
  }
  n_out = static_cast<int>(n);
  PairList pairs;
  for (int child = 1; child < n_out; ++child)
    pairs.emplace_back((child - 1) / branching, child);
  return pairs;
}

PairList hypercube_pairs(int dim, int& n_out) {
  n_out = 1 << dim;
  PairList pairs;
  for (int u = 0; u < n_out; ++u)
    for (int b = 0; b < dim; ++b) {
      const int v = u ^ (1 << b);
      if (u < v) pairs.emplace_back(u, v);
    }
  return pairs;
}

PairList grid_pairs(int rows, int cols) {
  PairList pairs;
  const auto id = [cols](int r, int c) { return r * cols + c; };
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      if (c + 1 < cols) pairs.emplace_back(id(r, c), id(r, c + 1));
      if (r + 1 < rows) pairs.emplace_back(id(r, c), id(r + 1, c));
    }
  return pairs;
}

// Kleinberg grid augmentation: lattice plus per-node long-range contacts
// sampled proportionally to (Manhattan distance)^-alpha.
PairList small_world_pairs(int rows, int cols, int extra, double alpha, Rng& rng) {
  PairList pairs = grid_pairs(rows, cols);
  const int n = rows * cols;
  std::vector<std::pair<int, int>> extras;
  for (int u = 0; u < n; ++u) {
    const int ur = u / cols, uc = u % cols;
    std::vector<double> cumulative(n, 0.0);
    double total = 0.0;
    for (int v = 0; v < n; ++v) {
      if (v != u) {
        const int d = std::abs(ur - v / cols) + std::abs(uc - v % cols);
        if (d > 1) total += std::pow(static_cast<double>(d), -alpha);
      }
      cumulative[v] = total;
    }
    for (int k = 0; k < extra; ++k) {
      const double draw = rng.uniform01() * total;
      const int v = static_cast<int>(
          std::lower_bound(cumulative.begin(), cumulative.end(), draw) - cumulative.begin());
      if (v < n) extras.emplace_back(std::min(u, v), std::max(u, v));
    }
  }
  std::sort(extras.begin(), extras.end());
  extras.erase(std::unique(extras.begin(), extras.end()), extras.end());
  for (const auto& e : extras) pairs.push_back(e);
  return pairs;
}

PairList backbone_pairs(const std::string& path, int& n_out) {
  if (path.empty())
    throw std::invalid_argument("backbone topology requires a topology file");
  const auto loaded = load_instance(path);
  n_out = loaded.instance.node_count();
  PairList pairs;
  for (const DirectedEdge& e : loaded.instance.edges())
    if (e.from < e.to) pairs.emplace_back(e.from, e.to);
  return pairs;
}

NetworkInstance assemble(const ScenarioSpec& spec, int n, const PairList& pairs, Rng& rng) {
  std::vector<DirectedEdge> edges;
  edges.reserve(2 * pairs.size());
  for (const auto& [u, v] : pairs) {
    const double wuv = static_cast<double>(rng.uniform_int(spec.weight_min, spec.weight_max));
    const double wvu = static_cast<double>(rng.uniform_int(spec.weight_min, spec.weight_max));
    edges.push_back({u, v, wuv, 0.0});
    edges.push_back({v, u, wvu, 0.0});
  }
  std::vector<int> caches(n);
  for (int v = 0; v < n; ++v)
    caches[v] = static_cast<int>(rng.uniform_int(spec.cache_min, spec.cache_max));
  std::vector<std::vector<NodeId>> servers(spec.catalog);
  for (int i = 0; i < spec.catalog; ++i)
    servers[i] = {static_cast<NodeId>(rng.uniform_int(0, n - 1))};
  return NetworkInstance(n, spec.catalog, std::move(edges), std::move(caches),
                         std::move(servers));
}

}  // namespace

NetworkInstance generate_topology(const ScenarioSpec& spec) {
  if (spec.topology == TopologyKind::Counterexample) return build_counterexample().first;

  Rng rng(spec.seed);
  const int attempts = spec.regenerate_if_disconnected ? spec.max_regenerate_attempts : 1;
  for (int attempt = 0; attempt < attempts; ++attempt) {
    int n = spec.nodes;
    PairList pairs;
    switch (spec.topology) {
      case TopologyKind::ErdosRenyi:
        pairs = erdos_renyi_pairs(spec.nodes, spec.er_edge_prob, rng);
        break;
      case TopologyKind::BalancedTree:
        pairs = balanced_tree_pairs(spec.tree_branching, spec.tree_depth, n);
        break;
      case TopologyKind::Hypercube:
        pairs = hypercube_pairs(spec.hypercube_dim, n);
        break;
      case TopologyKind::Grid2D:
        pairs = grid_pairs(spec.grid_rows, spec.grid_cols);
        n = spec.grid_rows * spec.grid_cols;
        break;
      case TopologyKind::SmallWorld:
        pairs = small_world_pairs(spec.grid_rows, spec.grid_cols, spec.sw_extra_links,
                                  spec.sw_alpha, rng);
        n = spec.grid_rows * spec.grid_cols;
        break;
      case TopologyKind::BackboneFile:
        pairs = backbone_pairs(spec.backbone_file, n);
        break;
      case TopologyKind::Counterexample:
        break;  // handled above
    }
    if (!connected(n, pairs)) continue;
    return assemble(spec, n, pairs, rng);
  }
  throw std::runtime_error("generate_topology: no connected graph within attempt budget");
}

std::vector<Request> generate_requests(const ScenarioSpec& spec,
                                       const NetworkInstance& instance, Rng& rng) {
  if (spec.query_nodes > instance.node_count())
    throw std::invalid_argument("generate_requests: more query nodes than nodes");
  const std::vector<long> query = rng.sample_distinct(spec.query_nodes, instance.node_count());

  std::vector<std::pair<ItemId, NodeId>> eligible;
  for (ItemId i = 0; i < instance.catalog_size(); ++i)
    for (long s : query)
      if (!instance.is_server(i, static_cast<NodeId>(s)))
        eligible.emplace_back(i, static_cast<NodeId>(s));
  if (spec.requests > static_cast<int>(eligible.size()))
    throw std::invalid_argument("generate_requests: request count exceeds eligible pairs");

  const std::vector<long> chosen =
      rng.sample_distinct(spec.requests, static_cast<long>(eligible.size()));

  // The random sampling order is the popularity rank; the top request has
  // probability 1 and rank r has r^-zipf_exponent.
  std::vector<Request> requests(spec.requests);
  for (int r = 0; r < spec.requests; ++r) {
    const auto& [item, source] = eligible[chosen[r]];
    requests[r] = {item, source,
                   std::pow(static_cast<double>(r + 1), -spec.zipf_exponent)};
  }
  return requests;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Shortest response-cost path from `source` to any designated server of
// `item` that never transits a server. Returns empty if unreachable.
Path shortest_well_routed(const NetworkInstance& inst, ItemId item, NodeId source,
                          double* cost_out) {
  std::vector<double> dist(inst.node_count(), kInf);
  std::vector<int> parent(inst.node_count(), -1);
  using QEntry = std::pair<double, int>;
  std::priority_queue<QEntry, std::vector<QEntry>, std::greater<>> queue;
  dist[source] = 0.0;
  queue.push({0.0, source});
  while (!queue.empty()) {
    const auto [d, u] = queue.top();
    queue.pop();
    if (d > dist[u]) continue;
    if (inst.is_server(item, u)) {
      Path path;
      for (int v = u; v != -1; v = parent[v]) path.push_back(v);
      std::reverse(path.begin(), path.end());
      if (cost_out) *cost_out = d;
      return path;
    }
    for (const auto& [v, e] : inst.out_edges(u)) {
      const int back = inst.edge_index(v, u);
      const double w = inst.edges()[back].weight;  // response travels v -> u
      if (d + w < dist[v]) {
        dist[v] = d + w;
        parent[v] = u;
        queue.push({dist[v], v});
      }
    }
  }
  return {};
}

// Admissible remaining-cost bound: multi-source response-cost distance to
// the server set, ignoring the no-transit rule.
std::vector<double> distance_to_servers(const NetworkInstance& inst, ItemId item) {
  std::vector<double> dist(inst.node_count(), kInf);
  using QEntry = std::pair<double, int>;
  std::priority_queue<QEntry, std::vector<QEntry>, std::greater<>> queue;
  for (NodeId s : inst.servers(item)) {
    dist[s] = 0.0;
    queue.push({0.0, s});
  }
  while (!queue.empty()) {
    const auto [d, u] = queue.top();
    queue.pop();
    if (d > dist[u]) continue;
    // Expanding u toward v means the path hop is v -> u, response edge (u,v).
    for (const auto& [v, e] : inst.out_edges(u)) {
      const double w = inst.edges()[e].weight;
      if (d + w < dist[v]) {
        dist[v] = d + w;
        queue.push({dist[v], v});
      }
    }
  }
  return dist;
}

void enumerate_paths(const NetworkInstance& inst, ItemId item, NodeId source, double limit,
                     const std::vector<double>& remaining, int cap, const Path& shortest,
                     std::vector<Path>& out) {
  std::vector<char> on_path(inst.node_count(), 0);
  Path current{source};
  on_path[source] = 1;
  long budget = 2'000'000;  // expansion cap; enumeration is best-effort past it

  const std::function<void(NodeId, double)> visit = [&](NodeId u, double cost) {
    if (static_cast<int>(out.size()) >= cap || budget <= 0) return;
    --budget;
    if (inst.is_server(item, u)) {
      if (current != shortest) out.push_back(current);
      return;
    }
    struct Next {
      double w;
      NodeId v;
      int back;
    };
    std::vector<Next> nexts;
    for (const auto& [v, e] : inst.out_edges(u)) {
      if (on_path[v]) continue;
      const int back = inst.edge_index(v, u);
      const double w = inst.edges()[back].weight;
      if (cost + w + (inst.is_server(item, v) ? 0.0 : remaining[v]) > limit) continue;
      nexts.push_back({w, v, back});
    }
    std::sort(nexts.begin(), nexts.end(), [](const Next& a, const Next& b) {
      return a.w < b.w || (a.w == b.w && a.v < b.v);
    });
    for (const Next& nx : nexts) {
      if (static_cast<int>(out.size()) >= cap || budget <= 0) return;
      current.push_back(nx.v);
      on_path[nx.v] = 1;
      visit(nx.v, cost + nx.w);
      on_path[nx.v] = 0;
      current.pop_back();
    }
  };
  visit(source, 0.0);
}

}  // namespace

DemandModel generate_paths(const ScenarioSpec& spec, const NetworkInstance& instance,
                           const std::vector<Request>& requests,
                           std::vector<Request>* dropped) {
  std::vector<Request> kept;
  std::vector<std::vector<Path>> path_sets;
  for (const Request& req : requests) {
    double shortest_cost = 0.0;
    const Path shortest = shortest_well_routed(instance, req.item, req.source, &shortest_cost);
    if (shortest.empty()) {
      if (dropped) dropped->push_back(req);
      continue;
    }
    std::vector<Path> paths{shortest};
    if (spec.max_paths > 1) {
      const std::vector<double> remaining = distance_to_servers(instance, req.item);
      std::vector<Path> extra;
      enumerate_paths(instance, req.item, req.source, spec.stretch * shortest_cost, remaining,
                      spec.max_paths - 1, shortest, extra);
      for (auto& p : extra) paths.push_back(std::move(p));
    }
    kept.push_back(req);
    path_sets.push_back(std::move(paths));
  }
  return DemandModel(instance, std::move(kept), std::move(path_sets));
}

DemandModel generate_demand(const ScenarioSpec& spec, const NetworkInstance& instance) {
  Rng rng(spec.seed ^ 0x9e3779b97f4a7c15ULL);
  const std::vector<Request> requests = generate_requests(spec, instance, rng);
  return generate_paths(spec, instance, requests);
}

NetworkInstance set_link_capacities(const NetworkInstance& instance, const DemandModel& demand,
                                    double kappa, std::uint64_t seed,
                                    StrategyPair* reference) {
  int max_paths = 1;
  for (int r = 0; r < demand.request_count(); ++r)
    max_paths = std::max(max_paths, static_cast<int>(demand.paths(r).size()));
  if (kappa < 1.0 || kappa >= static_cast<double>(max_paths))
    std::cerr << "warning: looseness " << kappa << " outside [1, " << max_paths
              << "); capacity constraints may be vacuous or unsatisfiable\n";

  Rng rng(seed);
  StrategyPair ref = StrategyPair::zeros(instance, demand);
  for (int v = 0; v < instance.node_count(); ++v) {
    const int picks = std::min(instance.cache_capacity(v), instance.catalog_size());
    for (long i : rng.sample_distinct(picks, instance.catalog_size()))
      ref.xi[instance.xi_coord(v, static_cast<ItemId>(i))] = 1.0;
  }
  for (int r = 0; r < demand.request_count(); ++r) {
    const int np = static_cast<int>(demand.paths(r).size());
    // A complement of 1/|P| would leave a single-path request unserved and
    // zero out its whole path, making the tight instance unsatisfiable in
    // the exact set; the choiceless case keeps its one path selected.
    const double complement = np == 1 ? 0.0 : 1.0 / np;
    for (int p = 0; p < np; ++p) ref.rho_tilde[demand.rho_coord(r, p)] = complement;
  }

  const ObjectiveContext ctx(instance, demand);
  const Vec flows = edge_flows(ctx, ref);
  if (reference) *reference = ref;

  std::vector<DirectedEdge> edges = instance.edges();
  for (int e = 0; e < static_cast<int>(edges.size()); ++e)
    edges[e].capacity = kappa * flows[e];
  return NetworkInstance(instance.node_count(), instance.catalog_size(), std::move(edges),
                         instance.cache_capacities(),
                         [&] {
                           std::vector<std::vector<NodeId>> servers(instance.catalog_size());
                           for (ItemId i = 0; i < instance.catalog_size(); ++i)
                             servers[i] = instance.servers(i);
                           return servers;
                         }());
}

std::pair<NetworkInstance, DemandModel> generate_scenario(const ScenarioSpec& spec) {
  if (spec.topology == TopologyKind::Counterexample) {
    auto [instance, demand] = build_counterexample();
    if (spec.kappa != 1.0) {
      std::vector<DirectedEdge> edges = instance.edges();
      for (auto& e : edges) e.capacity *= spec.kappa;
      std::vector<std::vector<NodeId>> servers(instance.catalog_size());
      for (ItemId i = 0; i < instance.catalog_size(); ++i) servers[i] = instance.servers(i);
      NetworkInstance scaled(instance.node_count(), instance.catalog_size(), std::move(edges),
                             instance.cache_capacities(), std::move(servers));
      DemandModel d2(scaled, demand.requests(), demand.path_sets());
      return {std::move(scaled), std::move(d2)};
    }
    return {std::move(instance), std::move(demand)};
  }

  const NetworkInstance bare = generate_topology(spec);
  const DemandModel demand_bare = generate_demand(spec, bare);
  NetworkInstance instance =
      set_link_capacities(bare, demand_bare, spec.kappa, spec.seed ^ 0xd1b54a32d192ed03ULL);
  DemandModel demand(instance, demand_bare.requests(), demand_bare.path_sets());
  return {std::move(instance), std::move(demand)};
}

std::pair<NetworkInstance, DemandModel> build_counterexample() {
  // Six nodes: 0 and 1 issue requests, 2 is the only cache, 3 serves item 0,
  // 4 serves item 1, 5 is a spare relay for item 1.
  //
  // Request (0,0) has the single path 0-2-3 whose tail edge (3,2) only
  // carries 0.3 of its demand of 1.0, so feasibility requires item 0 cached
  // at node 2 with weight >= 0.7. Every capacity-oblivious caching step
  // prefers item 1 at node 2 (0.6 * 50 > 1.0 * 4) or splits the cache, and
  // routing alone cannot recover; the joint solver caches item 0 at node 2
  // and routes request (1,1) over the spare relay.
  auto edge = [](int u, int v, double w, double mu) { return DirectedEdge{u, v, w, mu}; };
  std::vector<DirectedEdge> edges = {
      edge(0, 2, 2, 0.0),  edge(2, 0, 2, 1.1),
      edge(1, 2, 2, 0.0),  edge(2, 1, 2, 0.7),
      edge(2, 3, 4, 0.0),  edge(3, 2, 4, 0.3),
      edge(2, 4, 50, 0.0), edge(4, 2, 50, 0.25),
      edge(1, 5, 2, 0.0),  edge(5, 1, 2, 0.7),
      edge(5, 4, 50, 0.0), edge(4, 5, 50, 0.7),
  };
  NetworkInstance instance(6, 2, std::move(edges), {0, 0, 1, 0, 0, 0}, {{3}, {4}});
  std::vector<Request> requests = {{0, 0, 1.0}, {1, 1, 0.6}};
  std::vector<std::vector<Path>> paths = {
      {{0, 2, 3}},
      {{1, 2, 4}, {1, 5, 4}},
  };
  DemandModel demand(instance, std::move(requests), std::move(paths));
  return {std::move(instance), std::move(demand)};
}

std::vector<TraceRecord> parse_trace(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open trace file: " + path);
  std::vector<TraceRecord> records;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    for (char& c : line)
      if (c == ',') c = ' ';
    std::istringstream ss(line);
    std::string first;
    if (!(ss >> first) || first[0] == '#') continue;
    TraceRecord rec;
    std::int64_t item;
    std::istringstream head(first);
    if (!(head >> item) || !head.eof() || !(ss >> rec.node >> rec.count)) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": malformed trace record (expected: item node count)");
    }
    rec.item = static_cast<ItemId>(item);
    std::string rest;
    if (ss >> rest)
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": trailing data after trace record");
    if (rec.count <= 0)
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": count must be positive");
    records.push_back(rec);
  }
  return records;
}

TraceLoad load_trace(const std::string& path, const NetworkInstance& instance,
                     const TraceOptions& options) {
  std::vector<TraceRecord> records = parse_trace(path);
  for (const TraceRecord& r : records) {
    if (r.item < 0 || r.item >= instance.catalog_size())
      throw std::runtime_error("trace item out of catalog range");
    if (r.node < 0 || r.node >= instance.node_count())
      throw std::runtime_error("trace node out of range");
  }
  // Duplicate (item, node) records aggregate.
  std::map<std::pair<ItemId, NodeId>, std::int64_t> counts;
  for (const TraceRecord& r : records) counts[{r.item, r.node}] += r.count;
  std::vector<TraceRecord> merged;
  merged.reserve(counts.size());
  for (const auto& [key, count] : counts) merged.push_back({key.first, key.second, count});

  if (options.top_requests > 0 && static_cast<int>(merged.size()) > options.top_requests) {
    std::stable_sort(merged.begin(), merged.end(), [](const TraceRecord& a, const TraceRecord& b) {
      return a.count > b.count;
    });
    merged.resize(options.top_requests);
    std::sort(merged.begin(), merged.end(), [](const TraceRecord& a, const TraceRecord& b) {
      return a.item < b.item || (a.item == b.item && a.node < b.node);
    });
  }
  if (merged.empty()) throw std::runtime_error("trace contains no records");

  std::int64_t max_count = 0;
  for (const TraceRecord& r : merged) max_count = std::max(max_count, r.count);

  std::vector<Request> requests;
  for (const TraceRecord& r : merged)
    if (!instance.is_server(r.item, r.node))
      requests.push_back(
          {r.item, r.node, static_cast<double>(r.count) / static_cast<double>(max_count)});

  std::vector<DirectedEdge> edges = instance.edges();
  for (auto& e : edges) e.capacity *= options.capacity_scale;
  std::vector<std::vector<NodeId>> servers(instance.catalog_size());
  for (ItemId i = 0; i < instance.catalog_size(); ++i) servers[i] = instance.servers(i);
  NetworkInstance scaled(instance.node_count(), instance.catalog_size(), std::move(edges),
                         instance.cache_capacities(), std::move(servers));

  ScenarioSpec path_spec;
  path_spec.max_paths = options.max_paths;
  path_spec.stretch = options.stretch;
  DemandModel demand = generate_paths(path_spec, scaled, requests);
  return {std::move(scaled), std::move(demand)};
}

}  // namespace cachenet
