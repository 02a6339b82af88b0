#include <algorithm>
#include <set>

#include "dmc/errors.hpp"
#include "dmc/graph.hpp"

namespace dmc {

namespace {

std::uint64_t below(SplitMix64& rng, std::uint64_t bound) { return rng() % bound; }

// Random internal edges of one side, offset by `base`; empty if disconnected.
std::optional<std::vector<Edge>> dense_side(std::size_t size, Vertex base, double p, SplitMix64& rng) {
  std::vector<Edge> edges;
  for (Vertex a = 0; a < size; ++a)
    for (Vertex b = a + 1; b < size; ++b)
      if (p >= 1.0 || rng.uniform() < p) edges.push_back({base + a, base + b, 1});
  if (size > 1) {
    try {
      std::vector<Edge> local;
      for (const auto& e : edges) local.push_back({e.u - base, e.v - base, 1});
      WeightedMultigraph check(size, std::move(local));
    } catch (const DisconnectedError&) {
      return std::nullopt;
    }
  }
  return edges;
}

}  // namespace

GeneratedGraph planted_cut(const PlantedCutParams& params, std::uint64_t seed) {
  if (params.side_a < 1 || params.side_b < 1) throw ValidationError("planted sides must be nonempty");
  if (params.crossing == 0) throw ValidationError("planted cut needs at least one crossing edge");
  if (!(params.internal_p > 0.0) || params.internal_p > 1.0)
    throw ValidationError("internal edge probability must lie in (0,1]");
  const std::size_t n = params.side_a + params.side_b;
  SplitMix64 root(seed);

  constexpr int kAttempts = 100;
  for (int attempt = 0; attempt < kAttempts; ++attempt) {
    auto rng = root.derive(static_cast<std::uint64_t>(attempt));
    auto a = dense_side(params.side_a, 0, params.internal_p, rng);
    auto b = dense_side(params.side_b, static_cast<Vertex>(params.side_a), params.internal_p, rng);
    if (!a || !b) continue;
    std::vector<Weight> degree(n, 0);
    for (const auto* part : {&*a, &*b})
      for (const auto& e : *part) {
        ++degree[e.u];
        ++degree[e.v];
      }
    if (*std::min_element(degree.begin(), degree.end()) <= params.crossing) {
      if (params.internal_p >= 1.0) break;  // deterministic; retrying cannot help
      continue;
    }
    std::vector<Edge> edges = std::move(*a);
    edges.insert(edges.end(), b->begin(), b->end());
    for (Weight c = 0; c < params.crossing; ++c) {
      auto u = static_cast<Vertex>(below(rng, params.side_a));
      auto v = static_cast<Vertex>(params.side_a + below(rng, params.side_b));
      edges.push_back({u, v, 1});
    }
    PlantedCut planted{params.crossing, {}};
    for (Vertex v = 0; v < params.side_a; ++v) planted.side.push_back(v);
    return {WeightedMultigraph(n, std::move(edges)), std::move(planted)};
  }
  throw ValidationError("planted cut parameters infeasible: crossing count must be below every internal degree");
}

WeightedMultigraph random_connected(std::size_t n, std::size_t extra_edges, std::uint64_t seed,
                                    Weight max_edge_weight) {
  if (n < 1) throw ValidationError("random_connected needs n >= 1");
  if (max_edge_weight < 1) throw ValidationError("max edge weight must be at least 1");
  SplitMix64 rng = SplitMix64(seed).derive("random_connected");
  auto weight = [&] { return 1 + below(rng, max_edge_weight); };
  // Random labelled attachment tree: vertex order shuffled, each new vertex
  // hooks to a uniformly random earlier one.
  std::vector<Vertex> order(n);
  for (Vertex v = 0; v < n; ++v) order[v] = v;
  for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[below(rng, i)]);
  std::vector<Edge> edges;
  std::set<std::pair<Vertex, Vertex>> used;
  for (std::size_t i = 1; i < n; ++i) {
    Vertex a = order[i];
    Vertex b = order[below(rng, i)];
    edges.push_back({a, b, weight()});
    used.insert(std::minmax(a, b));
  }
  const std::size_t capacity = n * (n - 1) / 2 - (n - 1);
  const std::size_t extra = std::min(extra_edges, capacity);
  while (edges.size() < n - 1 + extra) {
    auto a = static_cast<Vertex>(below(rng, n));
    auto b = static_cast<Vertex>(below(rng, n));
    if (a == b || !used.insert(std::minmax(a, b)).second) continue;
    edges.push_back({a, b, weight()});
  }
  return {n, std::move(edges), std::max(max_edge_weight, WeightedMultigraph::default_max_weight(n))};
}

WeightedMultigraph clique_path(std::size_t k, std::size_t len) {
  if (k < 1 || len < 1) throw ValidationError("clique_path needs k >= 1 and len >= 1");
  std::vector<Edge> edges;
  for (std::size_t c = 0; c < len; ++c) {
    auto base = static_cast<Vertex>(c * k);
    for (Vertex a = 0; a < k; ++a)
      for (Vertex b = a + 1; b < k; ++b) edges.push_back({base + a, base + b, 1});
    if (c + 1 < len) edges.push_back({static_cast<Vertex>(base + k - 1), static_cast<Vertex>(base + k), 1});
  }
  return {k * len, std::move(edges)};
}

WeightedMultigraph path_graph(std::size_t n, Weight w) {
  std::vector<Edge> edges;
  for (Vertex v = 0; v + 1 < n; ++v) edges.push_back({v, v + 1, w});
  return {n, std::move(edges), std::max(w, WeightedMultigraph::default_max_weight(n))};
}

WeightedMultigraph cycle_graph(std::size_t n) {
  if (n < 3) throw ValidationError("cycle needs at least 3 vertices");
  std::vector<Edge> edges;
  for (Vertex v = 0; v < n; ++v) edges.push_back({v, static_cast<Vertex>((v + 1) % n), 1});
  return {n, std::move(edges)};
}

WeightedMultigraph star_graph(std::size_t leaves) {
  std::vector<Edge> edges;
  for (Vertex v = 1; v <= leaves; ++v) edges.push_back({0, v, 1});
  return {leaves + 1, std::move(edges)};
}

WeightedMultigraph complete_graph(std::size_t n) {
  std::vector<Edge> edges;
  for (Vertex a = 0; a < n; ++a)
    for (Vertex b = a + 1; b < n; ++b) edges.push_back({a, b, 1});
  return {n, std::move(edges)};
}

}  // namespace dmc
