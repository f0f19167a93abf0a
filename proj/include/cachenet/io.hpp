#pragma once

#include <string>

#include "cachenet/network.hpp"

namespace cachenet {

struct InstanceBundle {
  NetworkInstance instance;
  DemandModel demand;
};

// Instance + demand files come in two equivalent flavors, chosen by file
// extension: line-oriented text (default) and a single JSON document
// (".json"). The text schema, one record per line:
//
//   nodes <count>
//   catalog <count>
//   edge <u> <v> <weight> <capacity>     (one line per directed edge)
//   cache <v> <capacity>                 (nodes without a line hold 0)
//   server <item> <node>
//   request <item> <source> <lambda>
//   path <request_index> <v1> <v2> ... <vk>
//
// '#' starts a comment. `nodes` and `catalog` must precede everything else
// and `path` lines must follow their `request`. Loading re-validates every
// model invariant, including well-routedness of every path.
void save_instance(const NetworkInstance& instance, const DemandModel& demand,
                   const std::string& path);

InstanceBundle load_instance(const std::string& path);

// Strategy files are JSON: {"xi": [...], "rho_tilde": [...]}.
void save_strategy(const StrategyPair& y, const std::string& path);
StrategyPair load_strategy(const std::string& path);

// Shortest decimal form that parses back to exactly the same double.
std::string format_double(double v);

}  // namespace cachenet
