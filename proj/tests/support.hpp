#pragma once

#include <algorithm>
#include <numeric>
#include <vector>

#include "dmc/graph.hpp"
#include "dmc/oracle.hpp"
#include "dmc/rng.hpp"
#include "dmc/tree.hpp"

namespace dmc::testing {

/// Labeled tree from a Pruefer sequence over [0, n).
inline std::vector<std::pair<Vertex, Vertex>> prufer_tree(std::size_t n, const std::vector<Vertex>& seq) {
  std::vector<std::pair<Vertex, Vertex>> edges;
  if (n == 2) return {{0, 1}};
  std::vector<int> degree(n, 1);
  for (Vertex x : seq) ++degree[x];
  for (Vertex x : seq) {
    Vertex leaf = 0;
    while (degree[leaf] != 1) ++leaf;
    edges.emplace_back(leaf, x);
    --degree[leaf];
    --degree[x];
  }
  Vertex a = n, b = n;
  for (Vertex v = 0; v < n; ++v)
    if (degree[v] == 1) (a == n ? a : b) = v;
  edges.emplace_back(a, b);
  return edges;
}

/// Every labeled tree on n >= 2 vertices.
inline std::vector<std::vector<std::pair<Vertex, Vertex>>> all_trees(std::size_t n) {
  std::vector<std::vector<std::pair<Vertex, Vertex>>> out;
  if (n == 2) return {{{0, 1}}};
  std::vector<Vertex> seq(n - 2, 0);
  while (true) {
    out.push_back(prufer_tree(n, seq));
    std::size_t i = 0;
    while (i < seq.size() && ++seq[i] == n) seq[i++] = 0;
    if (i == seq.size()) break;
  }
  return out;
}

inline WeightedMultigraph from_pairs(std::size_t n, const std::vector<std::pair<Vertex, Vertex>>& pairs) {
  std::vector<Edge> edges;
  for (auto [a, b] : pairs) edges.push_back({a, b, 1});
  return WeightedMultigraph(n, std::move(edges));
}

/// A random spanning tree of g: BFS over a shuffled incidence order.
inline std::vector<std::pair<Vertex, Vertex>> random_spanning_tree(const WeightedMultigraph& g, SplitMix64& rng) {
  const std::size_t n = g.vertex_count();
  std::vector<EdgeId> order(g.edge_count());
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<Vertex> comp(n);
  std::iota(comp.begin(), comp.end(), 0);
  auto find = [&](Vertex x) {
    while (comp[x] != x) x = comp[x] = comp[comp[x]];
    return x;
  };
  std::vector<std::pair<Vertex, Vertex>> out;
  for (EdgeId e : order) {
    const auto& ed = g.edge(e);
    Vertex a = find(ed.u), b = find(ed.v);
    if (a == b) continue;
    comp[a] = b;
    out.emplace_back(ed.u, ed.v);
  }
  return out;
}

/// Sampled edges plus one copy of every tree edge, for the bridge oracle.
inline std::vector<oracle::MultiEdge> sampled_plus_tree(const SampledSubgraph& h, const tree::RootedSpanningTree& t) {
  std::vector<oracle::MultiEdge> out;
  for (EdgeId e = 0; e < h.base().edge_count(); ++e)
    if (h.present(e)) out.push_back({h.base().edge(e).u, h.base().edge(e).v, h.multiplicity(e)});
  for (auto [p, c] : t.edges()) out.push_back({p, c, 1});
  return out;
}

/// Only the sampled edges, as the adjacency list for centralized low/high.
inline std::vector<oracle::MultiEdge> sampled_edges(const SampledSubgraph& h) {
  std::vector<oracle::MultiEdge> out;
  for (EdgeId e = 0; e < h.base().edge_count(); ++e)
    if (h.present(e)) out.push_back({h.base().edge(e).u, h.base().edge(e).v, h.multiplicity(e)});
  return out;
}

/// Bridge flag per child vertex according to the oracle on sampled + T.
inline std::vector<bool> oracle_tree_bridges(const SampledSubgraph& h, const tree::RootedSpanningTree& t) {
  auto edges = sampled_plus_tree(h, t);
  auto flags = oracle::dfs_bridges(t.vertex_count(), edges);
  std::vector<bool> out(t.vertex_count(), false);
  const std::size_t first_tree = edges.size() - (t.vertex_count() - 1);
  auto tree_edges = t.edges();
  for (std::size_t i = 0; i < tree_edges.size(); ++i) out[tree_edges[i].second] = flags[first_tree + i];
  return out;
}

}  // namespace dmc::testing
