#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "dmc/cast.hpp"
#include "dmc/congest.hpp"
#include "dmc/graph.hpp"

namespace dmc::tree {

/// Spanning tree given by parent pointers; the root is its own parent.
/// Children are always visited in ascending vertex id.
class RootedSpanningTree {
 public:
  RootedSpanningTree(Vertex root, std::vector<Vertex> parent);
  /// Orients an undirected edge set (n-1 edges forming a spanning tree) away from `root`.
  static RootedSpanningTree from_edges(std::size_t n, Vertex root, std::span<const std::pair<Vertex, Vertex>> edges);

  [[nodiscard]] Vertex root() const noexcept { return root_; }
  [[nodiscard]] std::size_t vertex_count() const noexcept { return parent_.size(); }
  [[nodiscard]] Vertex parent(Vertex v) const { return parent_.at(v); }
  [[nodiscard]] std::span<const Vertex> parents() const noexcept { return parent_; }
  [[nodiscard]] std::span<const Vertex> children(Vertex v) const;
  /// (parent, child) for every non-root vertex, ordered by child.
  [[nodiscard]] std::vector<std::pair<Vertex, Vertex>> edges() const;
  [[nodiscard]] bool has_edge(Vertex a, Vertex b) const;
  /// Hops from the root to the deepest vertex.
  [[nodiscard]] std::size_t height() const;
  /// Throws unless every tree edge is a channel of g.
  void check_spans(const WeightedMultigraph& g) const;

  friend bool operator==(const RootedSpanningTree& a, const RootedSpanningTree& b) {
    return a.root_ == b.root_ && a.parent_ == b.parent_;
  }

 private:
  Vertex root_;
  std::vector<Vertex> parent_;
  std::vector<std::size_t> child_offset_;
  std::vector<Vertex> child_list_;
};

/// Fragments of at most ceil(sqrt n) levels; a vertex closes a fragment
/// when its open subtree reaches that height, the root always closes.
struct FragmentDecomposition {
  /// Fragment id of each vertex (the id of the fragment's root).
  std::vector<Vertex> fragment_of;
  /// Fragment roots in ascending id.
  std::vector<Vertex> roots;

  [[nodiscard]] std::size_t count() const noexcept { return roots.size(); }
  [[nodiscard]] bool is_root(Vertex v) const { return fragment_of.at(v) == v; }
};

/// ceil(sqrt(n)).
std::size_t fragment_height_limit(std::size_t n) noexcept;

struct TreeLabels {
  std::vector<std::uint32_t> pre;
  std::vector<std::uint32_t> size;
  std::vector<std::uint32_t> low;
  std::vector<std::uint32_t> high;
};

/// Bridge test for the tree edge above child v.
inline bool bridge_above(std::uint32_t pre, std::uint32_t size, std::uint32_t low, std::uint32_t high) noexcept {
  return low >= pre && high <= pre + size - 1;
}

struct Preorder {
  std::vector<std::uint32_t> pre;
  std::vector<std::uint32_t> size;
  RoundStats stats;
};

struct LowHigh {
  std::vector<std::uint32_t> low;
  std::vector<std::uint32_t> high;
  RoundStats stats;
};

struct Bridges {
  /// bridge[v] for each non-root v: is the edge (parent(v), v) a bridge.
  /// Always false at the root.
  std::vector<bool> bridge;
  RoundStats stats;

  [[nodiscard]] std::vector<std::pair<Vertex, Vertex>> edges(const RootedSpanningTree& t) const;
};

struct Decomposition {
  FragmentDecomposition fragments;
  RoundStats stats;
};

/// Runs the distributed tree protocols for one spanning tree of the
/// network.  Fragment decomposition and preorder are independent of any
/// sampled subgraph and are computed once; low/high and bridges can then
/// be evaluated for many subgraphs.  Upcasts and downcasts travel over a
/// BFS tree of the network rooted at the tree root.
class TreeSession {
 public:
  TreeSession(const Network& net, const RootedSpanningTree& tree, const NetworkConfig& config);
  /// The session keeps references; temporaries would dangle.
  TreeSession(Network&&, const RootedSpanningTree&, const NetworkConfig&) = delete;
  TreeSession(const Network&, RootedSpanningTree&&, const NetworkConfig&) = delete;

  const Decomposition& decompose();
  const Preorder& compute_preorder();
  LowHigh compute_low_high(const SampledSubgraph& sampled);
  Bridges find_bridges(const SampledSubgraph& sampled);

  [[nodiscard]] const RootedSpanningTree& tree() const noexcept { return *tree_; }
  [[nodiscard]] const Network& network() const noexcept { return *net_; }
  [[nodiscard]] const NetworkConfig& config() const noexcept { return config_; }
  /// Rounds spent building the BFS cast tree.
  [[nodiscard]] const RoundStats& cast_stats();
  [[nodiscard]] std::size_t cast_depth();
  /// Rounds of one low/high pass.  The protocol's schedule does not depend
  /// on the sampled subgraph, so one measurement on an empty sample holds
  /// for all of them.
  [[nodiscard]] const RoundStats& low_high_cost();
  /// BFS tree of the network rooted at the tree root.
  [[nodiscard]] const Overlay& cast_overlay();

 private:
  struct Contracted {
    std::vector<Vertex> parent_fragment;  // by fragment index
    std::vector<std::vector<std::size_t>> children;
    std::vector<std::size_t> top_down;  // fragment indices, parents first
  };

  void ensure_cast();
  [[nodiscard]] std::size_t fragment_index(Vertex fid) const;

  const Network* net_;
  const RootedSpanningTree* tree_;
  NetworkConfig config_;

  Overlay tree_overlay_;
  std::optional<BfsResult> cast_;
  std::optional<Decomposition> decomposition_;
  Overlay fragment_overlay_;
  std::vector<std::vector<Port>> outer_children_;  // T-children in other fragments
  std::optional<Preorder> preorder_;
  std::optional<RoundStats> low_high_cost_;
  Contracted contracted_;  // knowledge held by the root after the preorder upcast
};

/// One-shot helpers with fresh sessions.
Decomposition decompose(const Network& net, const RootedSpanningTree& tree, const NetworkConfig& config);
Preorder compute_preorder(const Network& net, const RootedSpanningTree& tree, const NetworkConfig& config);
LowHigh compute_low_high(const Network& net, const RootedSpanningTree& tree, const SampledSubgraph& sampled,
                         const NetworkConfig& config);
Bridges find_bridges(const Network& net, const RootedSpanningTree& tree, const SampledSubgraph& sampled,
                     const NetworkConfig& config);

}  // namespace dmc::tree
