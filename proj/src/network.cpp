#include "cachenet/network.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

namespace cachenet {

namespace {

std::int64_t edge_key(int n, NodeId u, NodeId v) {
  return static_cast<std::int64_t>(u) * n + v;
}

[[noreturn]] void fail(const std::string& msg) { throw std::invalid_argument(msg); }

}  // namespace

NetworkInstance::NetworkInstance(int node_count, int catalog_size,
                                 std::vector<DirectedEdge> edges,
                                 std::vector<int> cache_capacities,
                                 std::vector<std::vector<NodeId>> designated_servers)
    : node_count_(node_count),
      catalog_size_(catalog_size),
      edges_(std::move(edges)),
      cache_capacities_(std::move(cache_capacities)),
      servers_(std::move(designated_servers)) {
  if (node_count_ <= 0) fail("instance: node count must be positive");
  if (catalog_size_ <= 0) fail("instance: catalog size must be positive");
  if (static_cast<int>(cache_capacities_.size()) != node_count_)
    fail("instance: cache capacity list size != node count");
  if (static_cast<int>(servers_.size()) != catalog_size_)
    fail("instance: designated server list size != catalog size");

  out_.resize(node_count_);
  for (int e = 0; e < static_cast<int>(edges_.size()); ++e) {
    const DirectedEdge& d = edges_[e];
    if (d.from < 0 || d.from >= node_count_ || d.to < 0 || d.to >= node_count_)
      fail("instance: edge endpoint out of range");
    if (d.from == d.to) fail("instance: self-loop edge");
    if (!(d.weight >= 0.0)) fail("instance: negative edge weight");
    if (!(d.capacity >= 0.0)) fail("instance: negative edge capacity");
    const auto key = edge_key(node_count_, d.from, d.to);
    if (!edge_lookup_.emplace(key, e).second) fail("instance: duplicate edge");
    out_[d.from].emplace_back(d.to, e);
  }
  for (const DirectedEdge& d : edges_) {
    if (!has_edge(d.to, d.from)) {
      std::ostringstream os;
      os << "instance: graph not symmetric, (" << d.to << "," << d.from << ") missing";
      fail(os.str());
    }
  }
  for (auto& adj : out_) std::sort(adj.begin(), adj.end());

  for (int v = 0; v < node_count_; ++v)
    if (cache_capacities_[v] < 0) fail("instance: negative cache capacity");
  for (int i = 0; i < catalog_size_; ++i) {
    if (servers_[i].empty()) fail("instance: item has no designated server");
    for (NodeId v : servers_[i])
      if (v < 0 || v >= node_count_) fail("instance: server node out of range");
    std::sort(servers_[i].begin(), servers_[i].end());
    servers_[i].erase(std::unique(servers_[i].begin(), servers_[i].end()), servers_[i].end());
  }
}

int NetworkInstance::edge_index(NodeId u, NodeId v) const {
  const auto it = edge_lookup_.find(edge_key(node_count_, u, v));
  return it == edge_lookup_.end() ? -1 : it->second;
}

bool NetworkInstance::is_server(ItemId i, NodeId v) const {
  const auto& s = servers_[i];
  return std::binary_search(s.begin(), s.end(), v);
}

void check_well_routed(const NetworkInstance& instance, ItemId item, NodeId source,
                       const Path& path) {
  std::ostringstream os;
  os << "path for request (" << item << "," << source << "): ";
  if (path.size() < 2) {
    os << "fewer than two nodes";
    fail(os.str());
  }
  for (NodeId v : path)
    if (v < 0 || v >= instance.node_count()) {
      os << "node out of range";
      fail(os.str());
    }
  if (path.front() != source) {
    os << "does not start at the source (condition a)";
    fail(os.str());
  }
  std::set<NodeId> seen(path.begin(), path.end());
  if (seen.size() != path.size()) {
    os << "not simple (condition b)";
    fail(os.str());
  }
  if (!instance.is_server(item, path.back())) {
    os << "does not end at a designated server (condition c)";
    fail(os.str());
  }
  for (std::size_t k = 0; k + 1 < path.size(); ++k)
    if (instance.is_server(item, path[k])) {
      os << "passes a designated server before its last node (condition d)";
      fail(os.str());
    }
  for (std::size_t k = 0; k + 1 < path.size(); ++k)
    if (!instance.has_edge(path[k], path[k + 1])) {
      os << "uses missing edge (" << path[k] << "," << path[k + 1] << ")";
      fail(os.str());
    }
}

DemandModel::DemandModel(const NetworkInstance& instance, std::vector<Request> requests,
                         std::vector<std::vector<Path>> path_sets)
    : requests_(std::move(requests)), path_sets_(std::move(path_sets)) {
  if (requests_.size() != path_sets_.size())
    fail("demand: request and path-set counts differ");

  std::set<std::pair<ItemId, NodeId>> keys;
  for (const Request& r : requests_) {
    if (r.item < 0 || r.item >= instance.catalog_size()) fail("demand: item out of range");
    if (r.source < 0 || r.source >= instance.node_count()) fail("demand: source out of range");
    if (!(r.lambda >= 0.0 && r.lambda <= 1.0)) fail("demand: lambda outside [0,1]");
    if (!keys.emplace(r.item, r.source).second)
      fail("demand: duplicate request (multisets are not modeled)");
    total_lambda_ += r.lambda;
  }

  path_offsets_.resize(requests_.size());
  for (std::size_t r = 0; r < requests_.size(); ++r) {
    if (path_sets_[r].empty()) fail("demand: request has an empty path set");
    path_offsets_[r] = total_paths_;
    for (const Path& p : path_sets_[r])
      check_well_routed(instance, requests_[r].item, requests_[r].source, p);
    total_paths_ += static_cast<int>(path_sets_[r].size());
  }
}

namespace {

void check_box(const Vec& v, ConstraintCheck& out) {
  out = ConstraintCheck{};
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double viol = std::max(0.0 - v[i], v[i] - 1.0);
    if (viol > out.worst_violation) {
      out.worst_violation = viol;
      out.offending_index = i;
    }
  }
  out.pass = out.worst_violation <= 0.0;
  out.worst_violation = std::max(out.worst_violation, 0.0);
}

}  // namespace

FeasibilityReport validate_strategy(const NetworkInstance& instance, const DemandModel& demand,
                                    const StrategyPair& y, FeasibleSet set_kind) {
  if (y.xi.size() != instance.xi_dim())
    fail("validate_strategy: xi dimension mismatch");
  if (y.rho_tilde.size() != demand.total_paths())
    fail("validate_strategy: rho_tilde dimension mismatch");

  FeasibilityReport rep;
  check_box(y.xi, rep.box_xi);
  check_box(y.rho_tilde, rep.box_rho);

  for (int v = 0; v < instance.node_count(); ++v) {
    const double sum =
        y.xi.segment(instance.xi_coord(v, 0), instance.catalog_size()).sum();
    const double viol = sum - static_cast<double>(instance.cache_capacity(v));
    if (viol > rep.cache_capacity.worst_violation) {
      rep.cache_capacity.worst_violation = viol;
      rep.cache_capacity.offending_index = v;
    }
  }
  rep.cache_capacity.pass = rep.cache_capacity.worst_violation <= kFeasibilityTol;
  rep.cache_capacity.worst_violation = std::max(rep.cache_capacity.worst_violation, 0.0);

  for (int r = 0; r < demand.request_count(); ++r) {
    const int np = static_cast<int>(demand.paths(r).size());
    const double active = static_cast<double>(np) -
                          y.rho_tilde.segment(demand.path_offset(r), np).sum();
    const double viol =
        set_kind == FeasibleSet::D ? std::abs(active - 1.0) : 1.0 - active;
    if (viol > rep.routing.worst_violation) {
      rep.routing.worst_violation = viol;
      rep.routing.offending_index = r;
    }
  }
  rep.routing.pass = rep.routing.worst_violation <= kFeasibilityTol;
  rep.routing.worst_violation = std::max(rep.routing.worst_violation, 0.0);
  return rep;
}

Vec route_complement(const Vec& rho) {
  for (Eigen::Index i = 0; i < rho.size(); ++i)
    if (!(rho[i] >= 0.0 && rho[i] <= 1.0))
      fail("route_complement: coordinate outside [0,1]");
  return Vec::Ones(rho.size()) - rho;
}

int path_position(const Path& path, NodeId v) {
  for (std::size_t k = 0; k < path.size(); ++k)
    if (path[k] == v) return static_cast<int>(k) + 1;
  fail("path_position: node not on path");
}

}  // namespace cachenet
