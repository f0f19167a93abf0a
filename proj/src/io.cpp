#include "cachenet/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace cachenet {

namespace {

using nlohmann::json;

bool has_suffix(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

[[noreturn]] void parse_fail(const std::string& path, long line, const std::string& msg) {
  throw std::runtime_error(path + ":" + std::to_string(line) + ": " + msg);
}

struct RawInstance {
  int nodes = -1;
  int catalog = -1;
  std::vector<DirectedEdge> edges;
  std::vector<std::pair<int, int>> caches;
  std::vector<std::pair<int, int>> servers;  // (item, node)
  std::vector<Request> requests;
  std::vector<std::pair<int, Path>> paths;   // (request index, nodes)

  InstanceBundle build() const {
    if (nodes <= 0) throw std::runtime_error("instance file: missing node count");
    if (catalog <= 0) throw std::runtime_error("instance file: missing catalog size");
    std::vector<int> cache_vec(nodes, 0);
    for (const auto& [v, c] : caches) {
      if (v < 0 || v >= nodes) throw std::runtime_error("instance file: cache node out of range");
      cache_vec[v] = c;
    }
    std::vector<std::vector<NodeId>> server_vec(catalog);
    for (const auto& [i, v] : servers) {
      if (i < 0 || i >= catalog) throw std::runtime_error("instance file: server item out of range");
      server_vec[i].push_back(v);
    }
    NetworkInstance instance(nodes, catalog, edges, cache_vec, server_vec);

    std::vector<std::vector<Path>> path_sets(requests.size());
    for (const auto& [r, p] : paths) {
      if (r < 0 || r >= static_cast<int>(requests.size()))
        throw std::runtime_error("instance file: path references unknown request");
      path_sets[r].push_back(p);
    }
    DemandModel demand(instance, requests, path_sets);
    return {std::move(instance), std::move(demand)};
  }
};

RawInstance parse_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open instance file: " + path);
  RawInstance raw;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ss(line);
    std::string tag;
    if (!(ss >> tag)) continue;

    const auto expect_done = [&] {
      std::string rest;
      if (ss >> rest) parse_fail(path, line_no, "trailing data after record");
    };
    if (tag == "nodes") {
      if (!(ss >> raw.nodes)) parse_fail(path, line_no, "bad node count");
      expect_done();
    } else if (tag == "catalog") {
      if (!(ss >> raw.catalog)) parse_fail(path, line_no, "bad catalog size");
      expect_done();
    } else if (tag == "edge") {
      DirectedEdge e;
      if (!(ss >> e.from >> e.to >> e.weight >> e.capacity))
        parse_fail(path, line_no, "bad edge record (expected: edge u v weight capacity)");
      expect_done();
      raw.edges.push_back(e);
    } else if (tag == "cache") {
      int v, c;
      if (!(ss >> v >> c)) parse_fail(path, line_no, "bad cache record");
      expect_done();
      raw.caches.emplace_back(v, c);
    } else if (tag == "server") {
      int i, v;
      if (!(ss >> i >> v)) parse_fail(path, line_no, "bad server record");
      expect_done();
      raw.servers.emplace_back(i, v);
    } else if (tag == "request") {
      Request r;
      if (!(ss >> r.item >> r.source >> r.lambda))
        parse_fail(path, line_no, "bad request record");
      expect_done();
      raw.requests.push_back(r);
    } else if (tag == "path") {
      int r;
      if (!(ss >> r)) parse_fail(path, line_no, "bad path record");
      Path p;
      int v;
      while (ss >> v) p.push_back(v);
      if (p.size() < 2) parse_fail(path, line_no, "path needs at least two nodes");
      raw.paths.emplace_back(r, std::move(p));
    } else {
      parse_fail(path, line_no, "unknown record tag '" + tag + "'");
    }
  }
  return raw;
}

RawInstance parse_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open instance file: " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
  RawInstance raw;
  raw.nodes = doc.at("nodes").get<int>();
  raw.catalog = doc.at("catalog").get<int>();
  for (const auto& e : doc.at("edges"))
    raw.edges.push_back({e.at(0).get<int>(), e.at(1).get<int>(), e.at(2).get<double>(),
                         e.at(3).get<double>()});
  for (const auto& c : doc.at("caches"))
    raw.caches.emplace_back(c.at(0).get<int>(), c.at(1).get<int>());
  for (const auto& s : doc.at("servers"))
    raw.servers.emplace_back(s.at(0).get<int>(), s.at(1).get<int>());
  for (const auto& r : doc.at("requests"))
    raw.requests.push_back(
        {r.at(0).get<int>(), r.at(1).get<int>(), r.at(2).get<double>()});
  for (const auto& p : doc.at("paths")) {
    Path nodes;
    for (const auto& v : p.at(1)) nodes.push_back(v.get<int>());
    raw.paths.emplace_back(p.at(0).get<int>(), std::move(nodes));
  }
  return raw;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void save_instance(const NetworkInstance& instance, const DemandModel& demand,
                   const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write instance file: " + path);

  if (has_suffix(path, ".json")) {
    json doc;
    doc["nodes"] = instance.node_count();
    doc["catalog"] = instance.catalog_size();
    auto& edges = doc["edges"] = json::array();
    for (const DirectedEdge& e : instance.edges())
      edges.push_back({e.from, e.to, e.weight, e.capacity});
    auto& caches = doc["caches"] = json::array();
    for (int v = 0; v < instance.node_count(); ++v)
      caches.push_back({v, instance.cache_capacity(v)});
    auto& servers = doc["servers"] = json::array();
    for (ItemId i = 0; i < instance.catalog_size(); ++i)
      for (NodeId v : instance.servers(i)) servers.push_back({i, v});
    auto& requests = doc["requests"] = json::array();
    for (const Request& r : demand.requests()) requests.push_back({r.item, r.source, r.lambda});
    auto& paths = doc["paths"] = json::array();
    for (int r = 0; r < demand.request_count(); ++r)
      for (const Path& p : demand.paths(r)) paths.push_back({r, p});
    out << doc.dump(2) << '\n';
    return;
  }

  out << "# cachenet instance\n";
  out << "nodes " << instance.node_count() << '\n';
  out << "catalog " << instance.catalog_size() << '\n';
  for (const DirectedEdge& e : instance.edges())
    out << "edge " << e.from << ' ' << e.to << ' ' << format_double(e.weight) << ' '
        << format_double(e.capacity) << '\n';
  for (int v = 0; v < instance.node_count(); ++v)
    if (instance.cache_capacity(v) != 0) out << "cache " << v << ' ' << instance.cache_capacity(v) << '\n';
  for (ItemId i = 0; i < instance.catalog_size(); ++i)
    for (NodeId v : instance.servers(i)) out << "server " << i << ' ' << v << '\n';
  for (const Request& r : demand.requests())
    out << "request " << r.item << ' ' << r.source << ' ' << format_double(r.lambda) << '\n';
  for (int r = 0; r < demand.request_count(); ++r)
    for (const Path& p : demand.paths(r)) {
      out << "path " << r;
      for (NodeId v : p) out << ' ' << v;
      out << '\n';
    }
}

InstanceBundle load_instance(const std::string& path) {
  const RawInstance raw = has_suffix(path, ".json") ? parse_json_file(path) : parse_text(path);
  return raw.build();
}

void save_strategy(const StrategyPair& y, const std::string& path) {
  json doc;
  doc["xi"] = std::vector<double>(y.xi.begin(), y.xi.end());
  doc["rho_tilde"] = std::vector<double>(y.rho_tilde.begin(), y.rho_tilde.end());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write strategy file: " + path);
  out << doc.dump(2) << '\n';
}

StrategyPair load_strategy(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open strategy file: " + path);
  json doc;
  in >> doc;
  const auto xi = doc.at("xi").get<std::vector<double>>();
  const auto rho = doc.at("rho_tilde").get<std::vector<double>>();
  StrategyPair y;
  y.xi = Eigen::Map<const Vec>(xi.data(), static_cast<Eigen::Index>(xi.size()));
  y.rho_tilde = Eigen::Map<const Vec>(rho.data(), static_cast<Eigen::Index>(rho.size()));
  return y;
}

}  // namespace cachenet
