#pragma once

#include <vector>

#include "dmc/congest.hpp"
#include "dmc/load.hpp"
#include "dmc/tree.hpp"

namespace dmc::mst {

using congest::Network;
using congest::NetworkConfig;
using congest::RoundStats;
using tree::RootedSpanningTree;

struct MstResult {
  /// Rooted at vertex 0.
  RootedSpanningTree tree;
  /// Edge id joining each non-root vertex to its parent; unused at the root.
  std::vector<EdgeId> parent_edge;
  std::uint64_t total_load = 0;
  int phases = 0;
  RoundStats stats;
};

/// Minimum spanning tree of the present copies under the total order
/// (load, min endpoint, max endpoint, copy index), computed by
/// Boruvka-style fragment merging on the network.  Only edges with
/// multiplicity >= 1 in `loads` may be used; the network still supplies
/// every channel of the base graph.  Throws DisconnectedError when the
/// present edges do not span.
MstResult distributed_mst(const Network& net, const EdgeLoad& loads, const NetworkConfig& config);

struct TreePacking {
  std::vector<RootedSpanningTree> trees;
  EdgeLoad loads;
};

struct PackingResult {
  TreePacking packing;
  RoundStats stats;
};

/// `count` trees, each an MST against the loads of its predecessors.
/// `multiplicity` selects the packed multigraph (one entry per edge of the
/// network's graph).
PackingResult greedy_tree_packing(const Network& net, std::span<const Weight> multiplicity, std::size_t count,
                                  const NetworkConfig& config);

}  // namespace dmc::mst
