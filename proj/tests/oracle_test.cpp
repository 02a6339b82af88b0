#include <cmath>
#include <functional>
#include <numeric>

#include "dmc/oracle.hpp"
#include "gtest/gtest.h"
#include "support.hpp"

namespace dmc::oracle {
namespace {

std::vector<Weight> multiplicities(const WeightedMultigraph& g) {
  std::vector<Weight> m;
  for (const auto& e : g.edges()) m.push_back(e.w);
  return m;
}

TEST(StoerWagner, Triangle) {
  auto r = stoer_wagner(complete_graph(3));
  EXPECT_EQ(r.weight, 2u);
  EXPECT_EQ(cut_weight(complete_graph(3), r.side), 2u);
}

TEST(StoerWagner, ClassicExample) {
  WeightedMultigraph g(8, {{0, 1, 2}, {1, 2, 3}, {2, 3, 4}, {0, 4, 3}, {1, 4, 2}, {1, 5, 2},
                           {2, 6, 2}, {3, 6, 2}, {3, 7, 2}, {4, 5, 3}, {5, 6, 1}, {6, 7, 3}});
  auto r = stoer_wagner(g);
  EXPECT_EQ(r.weight, 4u);
  EXPECT_EQ(r.side.contains(0), r.side.contains(1));
  EXPECT_NE(r.side.contains(0), r.side.contains(2));
}

TEST(StoerWagner, PlantedCut) {
  auto gen = planted_cut({10, 10, 1.0, 3}, 7);
  EXPECT_EQ(stoer_wagner(gen.graph).weight, 3u);
}

TEST(StoerWagner, SingleVertexRejected) {
  EXPECT_THROW(stoer_wagner(WeightedMultigraph(1, {})), ValidationError);
}

TEST(StoerWagner, MatchesBruteForce) {
  SplitMix64 rng(10);
  for (int i = 0; i < 300; ++i) {
    const std::size_t n = 2 + rng() % 9;
    auto g = random_connected(n, rng() % (2 * n), rng(), 1 + rng() % 5);
    auto sw = stoer_wagner(g);
    auto bf = brute_force_min_cut(g);
    ASSERT_EQ(sw.weight, bf.weight);
    ASSERT_EQ(cut_weight(g, sw.side), sw.weight);
    ASSERT_EQ(cut_weight(g, bf.side), bf.weight);
  }
}

TEST(Kruskal, OrderForcedWithZeroLoads) {
  auto g = complete_graph(4);
  auto k = kruskal_with_order(g, multiplicities(g), [](EdgeId, Weight) { return 0; });
  ASSERT_EQ(k.edges.size(), 3u);
  // (0,1), (0,2), (0,3) come first in (min, max) order.
  for (const auto& c : k.edges) EXPECT_EQ(g.edge(c.edge).u, 0u);
}

TEST(Kruskal, TriangleWeightOne) {
  auto g = complete_graph(3);
  auto k = kruskal_with_order(g, multiplicities(g), [&](EdgeId e, Weight) { return g.edge(e).u == 0 && g.edge(e).v == 1 ? 0u : 1u; });
  EXPECT_EQ(k.total_load, 1u);
}

TEST(Kruskal, CopiesDistinguished) {
  WeightedMultigraph g(2, {{0, 1, 3}});
  auto k = kruskal_with_order(g, std::vector<Weight>{3}, [](EdgeId, Weight c) { return c == 0 ? 5u : 2u; });
  ASSERT_EQ(k.edges.size(), 1u);
  EXPECT_EQ(k.edges[0].copy, 1u);
  EXPECT_EQ(k.total_load, 2u);
}

TEST(Kruskal, Disconnected) {
  auto g = path_graph(3);
  EXPECT_THROW(kruskal_with_order(g, std::vector<Weight>{1, 0}, [](EdgeId, Weight) { return 0; }),
               DisconnectedError);
}

TEST(DfsBridges, TreeCycleAndDouble) {
  std::vector<MultiEdge> tree{{0, 1, 1}, {1, 2, 1}, {1, 3, 1}};
  EXPECT_EQ(dfs_bridges(4, tree), std::vector<bool>(3, true));
  std::vector<MultiEdge> cycle{{0, 1, 1}, {1, 2, 1}, {2, 0, 1}};
  EXPECT_EQ(dfs_bridges(3, cycle), std::vector<bool>(3, false));
  std::vector<MultiEdge> doubled{{0, 1, 2}, {1, 2, 1}};
  EXPECT_EQ(dfs_bridges(3, doubled), (std::vector<bool>{false, true}));
  std::vector<MultiEdge> listed_twice{{0, 1, 1}, {1, 0, 1}, {1, 2, 1}};
  EXPECT_EQ(dfs_bridges(3, listed_twice), (std::vector<bool>{false, false, true}));
}

TEST(DfsBridges, MatchesRemovalDefinition) {
  // A bridge is exactly an edge whose removal disconnects its component.
  SplitMix64 rng(4);
  for (int i = 0; i < 300; ++i) {
    const std::size_t n = 2 + rng() % 12;
    std::vector<MultiEdge> edges;
    const std::size_t m = rng() % (2 * n);
    for (std::size_t j = 0; j < m; ++j) {
      Vertex a = rng() % n, b = rng() % n;
      if (a != b) edges.push_back({a, b, 1 + rng() % 2});
    }
    auto flags = dfs_bridges(n, edges);
    // Component count with and without each edge.
    auto components = [&](std::size_t skip) {
      std::vector<Vertex> p(n);
      std::iota(p.begin(), p.end(), 0);
      std::function<Vertex(Vertex)> find = [&](Vertex x) { return p[x] == x ? x : p[x] = find(p[x]); };
      std::size_t c = n;
      for (std::size_t j = 0; j < edges.size(); ++j) {
        if (j == skip) continue;
        Vertex a = find(edges[j].u), b = find(edges[j].v);
        if (a != b) {
          p[a] = b;
          --c;
        }
      }
      return c;
    };
    const std::size_t base = components(edges.size());
    for (std::size_t j = 0; j < edges.size(); ++j) {
      const bool removal_disconnects = edges[j].count == 1 && components(j) > base;
      ASSERT_EQ(flags[j], removal_disconnects) << i << " " << j;
    }
  }
}

TEST(Labels, PathAndStar) {
  std::vector<Vertex> path{0, 0, 1};
  auto l = centralized_labels(0, path, {});
  EXPECT_EQ(l.pre, (std::vector<std::uint32_t>{0, 1, 2}));
  EXPECT_EQ(l.size, (std::vector<std::uint32_t>{3, 2, 1}));
  std::vector<MultiEdge> extra{{0, 2, 1}};
  auto c = centralized_labels(0, path, extra);
  EXPECT_EQ(c.low[1], 0u);
  EXPECT_EQ(c.high[0], 2u);
}

TEST(ExpectedY, Values) {
  EXPECT_DOUBLE_EQ(expected_y(3, 3), 0.5);
  EXPECT_DOUBLE_EQ(expected_y(0, 5), 0.0);
  for (double e = 0.01; e <= 1.0; e += 0.01) EXPECT_GE(expected_y(1 + e, 1), 0.5 + e / 4);
  EXPECT_LT(expected_y(2, 3), expected_y(3, 3));
  EXPECT_GT(expected_y(3, 2), expected_y(3, 3));
}

TEST(Connectivity, Basic) {
  std::vector<MultiEdge> e{{0, 1, 1}, {2, 3, 1}};
  EXPECT_FALSE(bfs_connected(4, e));
  e.push_back({1, 2, 1});
  EXPECT_TRUE(bfs_connected(4, e));
}

}  // namespace
}  // namespace dmc::oracle
