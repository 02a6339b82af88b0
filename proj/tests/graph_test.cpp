#include <cmath>
#include <sstream>

#include "dmc/errors.hpp"
#include "dmc/graph.hpp"
#include "dmc/oracle.hpp"
#include "gtest/gtest.h"

namespace dmc {
namespace {

GraphFile parse(const std::string& text) {
  std::istringstream in(text);
  return read_graph(in);
}

std::vector<oracle::MultiEdge> as_multi(const WeightedMultigraph& g) {
  std::vector<oracle::MultiEdge> out;
  for (const auto& e : g.edges()) out.push_back({e.u, e.v, e.w});
  return out;
}

TEST(GraphLoad, Triangle) {
  auto f = parse("p 3 3\n0 1 1\n1 2 1\n0 2 1\n");
  EXPECT_EQ(f.graph.vertex_count(), 3u);
  EXPECT_EQ(f.graph.edge_count(), 3u);
  EXPECT_EQ(f.graph.multi_edge_count(), 3u);
}

TEST(GraphLoad, SelfLoopRejected) { EXPECT_THROW(parse("p 2 2\n0 0 1\n0 1 1\n"), ValidationError); }

TEST(GraphLoad, DisconnectedRejected) { EXPECT_THROW(parse("p 4 2\n0 1 1\n2 3 1\n"), DisconnectedError); }

TEST(GraphLoad, WeightBounds) {
  EXPECT_THROW(parse("p 2 1\n0 1 0\n"), ValidationError);
  EXPECT_THROW(parse("p 2 1\n0 1 5\n"), ValidationError);  // W = n^2 = 4
  EXPECT_NO_THROW(parse("p 2 1\n0 1 4\n"));
}

TEST(GraphLoad, MalformedLines) {
  EXPECT_THROW(parse("p 3\n"), ParseError);
  EXPECT_THROW(parse("p 3 2\n0 1\n1 2 1\n"), ParseError);
  EXPECT_THROW(parse("p 3 3\n0 1 1\n1 2 1\n"), ParseError);
  EXPECT_THROW(parse("0 1 1\n"), ParseError);
}

TEST(GraphLoad, NamedVerticesKeepTheirLabels) {
  auto f = parse("p 3 2\nalpha beta 1\nbeta gamma 2\n");
  ASSERT_EQ(f.labels.size(), 3u);
  EXPECT_EQ(f.labels[0], "alpha");
  EXPECT_EQ(f.labels[2], "gamma");
  std::ostringstream out;
  write_graph(out, f);
  auto again = parse(out.str());
  EXPECT_EQ(again.labels, f.labels);
  EXPECT_EQ(again.graph.multi_edge_count(), 3u);
}

TEST(GraphLoad, ParallelEdgesMerge) {
  auto f = parse("p 2 2\n0 1 1\n1 0 2\n");
  ASSERT_EQ(f.graph.edge_count(), 1u);
  EXPECT_EQ(f.graph.edge(0).w, 3u);
}

TEST(GraphSave, RoundTripIsByteIdentical) {
  auto gen = planted_cut({10, 10, 1.0, 3}, 7);
  GraphFile f{gen.graph, gen.planted, {}};
  std::ostringstream first;
  write_graph(first, f);
  auto back = parse(first.str());
  std::ostringstream second;
  write_graph(second, back);
  EXPECT_EQ(first.str(), second.str());
  EXPECT_NE(first.str().find("# planted 3 "), std::string::npos);
}

TEST(GraphSave, RoundTripRandomGraphs) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    GraphFile f{random_connected(12, 8, seed, 5), std::nullopt, {}};
    std::ostringstream a, b;
    write_graph(a, f);
    write_graph(b, parse(a.str()));
    EXPECT_EQ(a.str(), b.str());
  }
}

TEST(Generators, PlantedCutHasWeightC) {
  auto gen = planted_cut({10, 10, 1.0, 3}, 7);
  ASSERT_TRUE(gen.planted.has_value());
  EXPECT_EQ(gen.planted->weight, 3u);
  VertexSide s(20, gen.planted->side);
  EXPECT_EQ(cut_weight(gen.graph, s), 3u);
  EXPECT_EQ(oracle::stoer_wagner(gen.graph).weight, 3u);
}

TEST(Generators, PlantedCutRejectsInfeasible) {
  EXPECT_THROW(planted_cut({10, 10, 1.0, 0}, 1), ValidationError);
  EXPECT_THROW(planted_cut({0, 10, 1.0, 3}, 1), ValidationError);
  EXPECT_THROW(planted_cut({3, 3, 1.0, 2}, 1), ValidationError);  // internal degree 2
}

TEST(Generators, SparsePlantedCutStillValid) {
  auto gen = planted_cut({32, 32, 0.5, 3}, 11);
  VertexSide s(64, gen.planted->side);
  EXPECT_EQ(cut_weight(gen.graph, s), 3u);
  EXPECT_TRUE(oracle::bfs_connected(64, as_multi(gen.graph)));
}

TEST(Generators, CliquePathShape) {
  auto g = clique_path(4, 5);
  EXPECT_EQ(g.vertex_count(), 20u);
  EXPECT_EQ(g.edge_count(), 5u * 6u + 4u);
  EXPECT_EQ(diameter(g), 9u);
}

TEST(Generators, RandomConnected) {
  auto g = random_connected(16, 10, 1);
  EXPECT_EQ(g.vertex_count(), 16u);
  EXPECT_EQ(g.edge_count(), 25u);
  EXPECT_TRUE(oracle::bfs_connected(16, as_multi(g)));
}

TEST(CutWeight, Examples) {
  auto k3 = complete_graph(3);
  EXPECT_EQ(cut_weight(k3, VertexSide(3, std::vector<Vertex>{0})), 2u);
  auto p = path_graph(3);
  EXPECT_EQ(cut_weight(p, VertexSide(3, std::vector<Vertex>{0, 2})), 2u);
}

TEST(CutWeight, ComplementSymmetric) {
  SplitMix64 rng(5);
  for (int t = 0; t < 50; ++t) {
    auto g = random_connected(9, 6, rng(), 4);
    std::vector<bool> mask(9);
    do {
      for (std::size_t i = 0; i < 9; ++i) mask[i] = (rng() & 1) != 0;
    } while (std::count(mask.begin(), mask.end(), true) % 9 == 0);
    auto s = VertexSide::from_mask(mask);
    EXPECT_EQ(cut_weight(g, s), cut_weight(g, s.complement()));
  }
}

TEST(VertexSideTest, RejectsEmptyAndFull) {
  EXPECT_THROW(VertexSide(3, std::vector<Vertex>{}), ValidationError);
  EXPECT_THROW(VertexSide(3, std::vector<Vertex>{0, 1, 2}), ValidationError);
}

TEST(Sampling, FullProbabilityKeepsEverything) {
  auto g = random_connected(10, 10, 3, 7);
  auto h = sample_subgraph(g, 1.0, 9);
  for (EdgeId e = 0; e < g.edge_count(); ++e) EXPECT_EQ(h.multiplicity(e), g.edge(e).w);
  EXPECT_EQ(h.total(), g.multi_edge_count());
}

TEST(Sampling, Replayable) {
  auto g = complete_graph(3);
  auto a = sample_subgraph(g, 0.5, 42);
  auto b = sample_subgraph(g, 0.5, 42);
  EXPECT_TRUE(std::equal(a.multiplicities().begin(), a.multiplicities().end(), b.multiplicities().begin()));
}

TEST(Sampling, KeepRateOfUnitEdge) {
  auto g = path_graph(2);
  int kept = 0;
  const int trials = 100000;
  for (int s = 0; s < trials; ++s) kept += sample_subgraph(g, 0.5, static_cast<std::uint64_t>(s)).present(0) ? 1 : 0;
  EXPECT_NEAR(kept / static_cast<double>(trials), 0.5, 0.01);
}

TEST(Sampling, MeanTotalMatchesExpectation) {
  auto g = random_connected(20, 31, 8, 6);
  ASSERT_EQ(g.edge_count(), 50u);
  const double p = 0.3;
  double sum = 0;
  const int trials = 10000;
  for (int s = 0; s < trials; ++s) {
    auto h = sample_subgraph(g, p, static_cast<std::uint64_t>(s));
    EXPECT_LE(h.total(), g.multi_edge_count());
    sum += static_cast<double>(h.total());
  }
  const double expected = p * static_cast<double>(g.multi_edge_count());
  EXPECT_NEAR(sum / trials, expected, 0.01 * expected);
}

TEST(Sampling, BinomialMatchesMoments) {
  // Two-stage draw against the Binomial(w, p) mean and variance.
  SplitMix64 a(1), b(2);
  for (auto [w, p] : {std::pair<Weight, double>{5, 0.3}, {400, 0.01}, {100, 0.7}, {1, 0.5}}) {
    double s = 0, s2 = 0;
    const int trials = 50000;
    for (int i = 0; i < trials; ++i) {
      double x = static_cast<double>(sample_binomial(w, p, a, b));
      s += x;
      s2 += x * x;
    }
    const double mean = s / trials, var = s2 / trials - mean * mean;
    const double mu = static_cast<double>(w) * p, sigma2 = mu * (1 - p);
    EXPECT_NEAR(mean, mu, 5 * std::sqrt(sigma2 / trials) + 1e-9) << w << " " << p;
    EXPECT_NEAR(var, sigma2, 0.05 * sigma2 + 1e-9) << w << " " << p;
  }
}

TEST(Metrics, Diameter) {
  EXPECT_EQ(diameter(path_graph(5)), 4u);
  EXPECT_EQ(diameter(cycle_graph(6)), 3u);
  EXPECT_EQ(diameter(star_graph(5)), 2u);
}

}  // namespace
}  // namespace dmc
