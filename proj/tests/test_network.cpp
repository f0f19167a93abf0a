#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "cachenet/io.hpp"
#include "cachenet/network.hpp"
#include "test_support.hpp"

using namespace cachenet;

namespace {

// 4-node diamond: 0 -> {1,2} -> 3, items served at 3.
std::pair<NetworkInstance, DemandModel> diamond(int cache_mid = 1) {
  std::vector<DirectedEdge> edges;
  auto both = [&](int u, int v, double w) {
    edges.push_back({u, v, w, 1.0});
    edges.push_back({v, u, w, 1.0});
  };
  both(0, 1, 1);
  both(0, 2, 2);
  both(1, 3, 3);
  both(2, 3, 4);
  NetworkInstance inst(4, 2, std::move(edges), {0, cache_mid, cache_mid, 0}, {{3}, {3}});
  DemandModel demand(inst, {{0, 0, 0.8}}, {{{0, 1, 3}, {0, 2, 3}}});
  return {std::move(inst), std::move(demand)};
}

}  // namespace

TEST_CASE("instance construction enforces the model invariants") {
  std::vector<DirectedEdge> asym = {{0, 1, 1.0, 0.0}};
  CHECK_THROWS_WITH_AS(NetworkInstance(2, 1, asym, {0, 0}, {{1}}),
                       doctest::Contains("not symmetric"), std::invalid_argument);

  std::vector<DirectedEdge> negw = {{0, 1, -1.0, 0.0}, {1, 0, 1.0, 0.0}};
  CHECK_THROWS_AS(NetworkInstance(2, 1, negw, {0, 0}, {{1}}), std::invalid_argument);

  std::vector<DirectedEdge> ok = {{0, 1, 1.0, 0.0}, {1, 0, 1.0, 0.0}};
  CHECK_THROWS_AS(NetworkInstance(2, 1, ok, {0, 0}, {{}}), std::invalid_argument);
  CHECK_THROWS_AS(NetworkInstance(2, 1, ok, {-1, 0}, {{1}}), std::invalid_argument);
}

TEST_CASE("well-routedness conditions are each enforced") {
  auto [inst, demand] = diamond();
  const auto reject = [&inst = inst](const Path& p, const char* what) {
    CHECK_THROWS_WITH_AS(check_well_routed(inst, 0, 0, p), doctest::Contains(what),
                         std::invalid_argument);
  };
  CHECK_NOTHROW(check_well_routed(inst, 0, 0, {0, 1, 3}));
  reject({1, 3}, "condition a");           // wrong start
  reject({0, 1, 0, 2, 3}, "condition b");  // loop
  reject({0, 1}, "condition c");           // ends off-server
  reject({0, 3, 1, 3}, "condition b");     // revisits
  reject({0, 2, 1}, "condition c");        // (2,1) is an edge but 1 is no server

  // Condition d needs a second server on the way.
  std::vector<DirectedEdge> edges = {{0, 1, 1, 0}, {1, 0, 1, 0}, {1, 2, 1, 0}, {2, 1, 1, 0}};
  NetworkInstance two_servers(3, 1, std::move(edges), {0, 0, 0}, {{1, 2}});
  CHECK_THROWS_WITH_AS(check_well_routed(two_servers, 0, 0, {0, 1, 2}),
                       doctest::Contains("condition d"), std::invalid_argument);

  // Non-adjacent consecutive nodes.
  CHECK_THROWS_WITH_AS(check_well_routed(inst, 0, 0, {0, 3}), doctest::Contains("missing edge"),
                       std::invalid_argument);
}

TEST_CASE("duplicate requests are rejected") {
  auto [inst, demand] = diamond();
  CHECK_THROWS_WITH_AS(
      DemandModel(inst, {{0, 0, 0.5}, {0, 0, 0.25}}, {{{0, 1, 3}}, {{0, 2, 3}}}),
      doctest::Contains("duplicate request"), std::invalid_argument);
}

TEST_CASE("validate_strategy reports per constraint family") {
  auto [inst, demand] = testing::line_instance();
  StrategyPair y = StrategyPair::zeros(inst, demand);

  SUBCASE("zero vector satisfies the single-path routing equality") {
    const FeasibilityReport rep = validate_strategy(inst, demand, y, FeasibleSet::D);
    CHECK(rep.pass());
    CHECK(rep.routing.worst_violation == 0.0);
  }

  SUBCASE("cache capacity violation magnitude is reported") {
    auto [inst2, demand2] = diamond(1);
    StrategyPair y2 = StrategyPair::zeros(inst2, demand2);
    y2.xi[inst2.xi_coord(1, 0)] = 0.7;
    y2.xi[inst2.xi_coord(1, 1)] = 0.7;
    y2.rho_tilde[0] = 1.0;  // keep routing feasible
    const FeasibilityReport rep = validate_strategy(inst2, demand2, y2, FeasibleSet::D);
    CHECK_FALSE(rep.cache_capacity.pass);
    CHECK(rep.cache_capacity.worst_violation == doctest::Approx(0.4));
    CHECK(rep.cache_capacity.offending_index == 1);
    CHECK(rep.box_xi.pass);
  }

  SUBCASE("routing equality vs relaxation") {
    auto [inst2, demand2] = diamond(0);
    StrategyPair y2 = StrategyPair::zeros(inst2, demand2);
    y2.rho_tilde[0] = 0.3;
    y2.rho_tilde[1] = 0.3;  // sum of selections = 1.4
    const FeasibilityReport d = validate_strategy(inst2, demand2, y2, FeasibleSet::D);
    CHECK_FALSE(d.routing.pass);
    CHECK(d.routing.worst_violation == doctest::Approx(0.4));
    const FeasibilityReport dp = validate_strategy(inst2, demand2, y2, FeasibleSet::DPrime);
    CHECK(dp.routing.pass);
  }

  SUBCASE("dimension mismatch is a structural error, not infeasibility") {
    y.xi = Vec::Zero(1);
    CHECK_THROWS_AS(validate_strategy(inst, demand, y, FeasibleSet::D), std::invalid_argument);
  }
}

TEST_CASE("membership in D implies membership in the relaxation") {
  Rng rng(11);
  auto [inst, demand] = testing::random_instance(3, 7, 3, 5);
  const ObjectiveContext ctx(inst, demand);
  for (int trial = 0; trial < 50; ++trial) {
    const StrategyPair y = testing::random_point_in_D(ctx, rng);
    REQUIRE(validate_strategy(inst, demand, y, FeasibleSet::D).pass());
    CHECK(validate_strategy(inst, demand, y, FeasibleSet::DPrime).pass());
  }
}

TEST_CASE("route_complement") {
  CHECK(route_complement(Vec{{1.0, 0.0, 0.0}}) == Vec{{0.0, 1.0, 1.0}});
  CHECK(route_complement(Vec{{0.5, 0.5}}) == Vec{{0.5, 0.5}});
  // 1 - 0.2 rounds to 0.8 exactly, so this literal round-trips to within one
  // ulp rather than bitwise; see the dyadic-grid property below for the
  // exact involution.
  const Vec twice = route_complement(route_complement(Vec{{0.2, 0.9}}));
  CHECK((twice - Vec{{0.2, 0.9}}).cwiseAbs().maxCoeff() <= 1e-16);

  CHECK_THROWS_AS(route_complement(Vec{{1.2}}), std::invalid_argument);
  CHECK_THROWS_AS(route_complement(Vec{{-0.1}}), std::invalid_argument);

  // Exact involution on multiples of 2^-53, the grid every sampled point
  // lives on.
  Rng rng(5);
  Vec v = testing::random_box_vector(rng, 400);
  CHECK(route_complement(route_complement(v)) == v);
}

TEST_CASE("path_position is 1-based and rejects absent nodes") {
  const Path p{3, 7, 9};
  CHECK(path_position(p, 3) == 1);
  CHECK(path_position(p, 7) == 2);
  CHECK(path_position(p, 9) == 3);
  CHECK_THROWS_AS(path_position(p, 5), std::invalid_argument);
}

TEST_CASE("instance files round-trip through text and json") {
  auto [inst, demand] = testing::random_instance(21, 8, 3, 6);
  for (const char* name : {"roundtrip_test.txt", "roundtrip_test.json"}) {
    const std::string path = std::string("/tmp/") + name;
    save_instance(inst, demand, path);
    const InstanceBundle loaded = load_instance(path);

    CHECK(loaded.instance.node_count() == inst.node_count());
    CHECK(loaded.instance.catalog_size() == inst.catalog_size());
    REQUIRE(loaded.instance.edge_count() == inst.edge_count());
    for (int e = 0; e < inst.edge_count(); ++e) {
      CHECK(loaded.instance.edges()[e].from == inst.edges()[e].from);
      CHECK(loaded.instance.edges()[e].to == inst.edges()[e].to);
      CHECK(loaded.instance.edges()[e].weight == inst.edges()[e].weight);
      CHECK(loaded.instance.edges()[e].capacity == inst.edges()[e].capacity);
    }
    CHECK(loaded.instance.cache_capacities() == inst.cache_capacities());
    REQUIRE(loaded.demand.request_count() == demand.request_count());
    for (int r = 0; r < demand.request_count(); ++r) {
      CHECK(loaded.demand.request(r).item == demand.request(r).item);
      CHECK(loaded.demand.request(r).source == demand.request(r).source);
      CHECK(loaded.demand.request(r).lambda == demand.request(r).lambda);
      CHECK(loaded.demand.paths(r) == demand.paths(r));
    }
    std::remove(path.c_str());
  }
}

TEST_CASE("the parser rejects ill-routed paths and locates syntax errors") {
  const char* path = "/tmp/bad_instance_test.txt";
  {
    std::ofstream out(path);
    out << "nodes 3\ncatalog 1\n";
    out << "edge 0 1 1 1\nedge 1 0 1 1\nedge 1 2 1 1\nedge 2 1 1 1\n";
    out << "server 0 2\ncache 1 1\n";
    out << "request 0 0 0.5\n";
    out << "path 0 0 2\n";  // (0,2) is not an edge
  }
  CHECK_THROWS_WITH_AS(load_instance(path), doctest::Contains("missing edge"),
                       std::invalid_argument);
  {
    std::ofstream out(path);
    out << "nodes 2\ncatalog 1\nedge 0 1 1 1\nedge 1 0 1 1\nserver 0 1\ncache 0 1\n";
    out << "request 0 0 oops\n";
  }
  CHECK_THROWS_WITH_AS(load_instance(path), doctest::Contains(":7:"), std::runtime_error);
  std::remove(path);
}
