#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "dmc/graph.hpp"

// Centralized reference algorithms.  They see the whole graph at once and
// share nothing with the simulator.
namespace dmc::oracle {

struct ExactMinCut {
  Weight weight = 0;
  VertexSide side;
};

/// Stoer-Wagner, O(n^3).  Requires n >= 2.
ExactMinCut stoer_wagner(const WeightedMultigraph& g);

/// Scans all 2^(n-1) - 1 bipartitions.  Requires 2 <= n <= 12.
ExactMinCut brute_force_min_cut(const WeightedMultigraph& g);

/// One unit copy chosen by Kruskal.
struct CopyChoice {
  EdgeId edge = 0;
  Weight copy = 0;
  std::uint64_t load = 0;
};

struct KruskalTree {
  std::vector<CopyChoice> edges;
  std::uint64_t total_load = 0;
};

/// Load of copy `copy` of edge `edge`.
using CopyLoad = std::function<std::uint64_t(EdgeId edge, Weight copy)>;

/// Kruskal over every unit copy with multiplicity[e] > 0, ordered by
/// (load, min endpoint, max endpoint, copy).  Throws DisconnectedError
/// when the present copies do not span the graph.
KruskalTree kruskal_with_order(const WeightedMultigraph& g, std::span<const Weight> multiplicity, const CopyLoad& load);

/// Undirected multigraph edge for the bridge oracle; `count` parallel copies.
struct MultiEdge {
  Vertex u = 0;
  Vertex v = 0;
  Weight count = 1;
};

/// Tarjan low-link.  bridge[i] tells whether edges[i] is a bridge; a pair
/// with two or more copies in total is never one.
std::vector<bool> dfs_bridges(std::size_t n, std::span<const MultiEdge> edges);

struct Labels {
  std::vector<std::uint32_t> pre;
  std::vector<std::uint32_t> size;
  std::vector<std::uint32_t> low;
  std::vector<std::uint32_t> high;
};

/// Recursive preorder of a parent-pointer tree (children ascending) and
/// low/high against `extra`, the non-tree adjacencies (both directions
/// are added).
Labels centralized_labels(Vertex root, std::span<const Vertex> parent, std::span<const MultiEdge> extra);

/// 1 - 2^(-w/kappa).
double expected_y(double w, double kappa);

/// Plain BFS connectivity over the listed edges.
bool bfs_connected(std::size_t n, std::span<const MultiEdge> edges);

}  // namespace dmc::oracle
