#pragma once

#include <Eigen/Core>
#include <cstdint>

namespace cachenet {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

using NodeId = int;
using ItemId = int;

// A directed edge (from, to) with transfer cost `weight` and expected
// per-slot traffic limit `capacity`. Graphs are symmetric: whenever
// (u,v) exists, (v,u) exists too, possibly with different weight/capacity.
struct DirectedEdge {
  NodeId from = -1;
  NodeId to = -1;
  double weight = 0.0;
  double capacity = 0.0;
};

}  // namespace cachenet
