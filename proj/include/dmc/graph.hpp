#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dmc/rng.hpp"

namespace dmc {

using Vertex = std::uint32_t;
using Weight = std::uint64_t;
using EdgeId = std::uint32_t;

struct Edge {
  Vertex u = 0;
  Vertex v = 0;
  Weight w = 1;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Connected, integer-weighted undirected graph read as a multigraph of
/// w(e) unit parallel edges per stored edge.
///
/// Construction normalizes every edge to u < v, merges repeated pairs by
/// summing their weights and sorts edges by (u, v).  It throws
/// ValidationError on self-loops, out-of-range ids, weights outside
/// [1, max_weight] and DisconnectedError when the graph is not connected.
class WeightedMultigraph {
 public:
  /// `max_weight == 0` selects the default bound n^2.
  WeightedMultigraph(std::size_t n, std::vector<Edge> edges, Weight max_weight = 0);

  [[nodiscard]] std::size_t vertex_count() const noexcept { return n_; }
  [[nodiscard]] std::size_t edge_count() const noexcept { return edges_.size(); }
  [[nodiscard]] std::span<const Edge> edges() const noexcept { return edges_; }
  [[nodiscard]] const Edge& edge(EdgeId e) const { return edges_.at(e); }
  [[nodiscard]] Weight max_weight() const noexcept { return max_weight_; }
  /// Total multiplicity, the sum of all edge weights.
  [[nodiscard]] Weight multi_edge_count() const noexcept { return multi_edge_count_; }

  /// Incident edge ids of v, ordered by the id of the other endpoint.
  [[nodiscard]] std::span<const EdgeId> incident(Vertex v) const;
  [[nodiscard]] Vertex other(EdgeId e, Vertex v) const;
  [[nodiscard]] std::optional<EdgeId> find_edge(Vertex a, Vertex b) const;

  static Weight default_max_weight(std::size_t n) noexcept;

 private:
  std::size_t n_;
  std::vector<Edge> edges_;
  Weight max_weight_;
  Weight multi_edge_count_ = 0;
  std::vector<std::size_t> offsets_;
  std::vector<EdgeId> incidence_;
};

/// One side S of a cut (S, V \ S) with S nonempty and proper.
class VertexSide {
 public:
  VertexSide(std::size_t n, std::span<const Vertex> members);
  static VertexSide from_mask(std::vector<bool> mask);

  [[nodiscard]] std::size_t universe() const noexcept { return mask_.size(); }
  [[nodiscard]] bool contains(Vertex v) const { return mask_.at(v); }
  [[nodiscard]] std::vector<Vertex> members() const;
  [[nodiscard]] std::size_t size() const noexcept { return count_; }
  [[nodiscard]] VertexSide complement() const;
  /// The side that does not contain vertex 0; a canonical name for the cut.
  [[nodiscard]] VertexSide canonical() const;

  friend bool operator==(const VertexSide&, const VertexSide&) = default;

 private:
  explicit VertexSide(std::vector<bool> mask);
  std::vector<bool> mask_;
  std::size_t count_ = 0;
};

/// Sum of w(e) over edges with exactly one endpoint in `side`.
Weight cut_weight(const WeightedMultigraph& g, const VertexSide& side);

/// A random subgraph: each unit parallel edge of `base` kept independently.
/// Holds a reference to `base`, which must outlive it.
class SampledSubgraph {
 public:
  SampledSubgraph(const WeightedMultigraph& base, std::vector<Weight> multiplicity, double p = 1.0,
                  std::uint64_t seed = 0);
  /// Every unit edge kept.
  static SampledSubgraph full(const WeightedMultigraph& base);
  /// No edge kept.
  static SampledSubgraph empty(const WeightedMultigraph& base);

  [[nodiscard]] const WeightedMultigraph& base() const noexcept { return *base_; }
  [[nodiscard]] Weight multiplicity(EdgeId e) const { return multiplicity_.at(e); }
  [[nodiscard]] std::span<const Weight> multiplicities() const noexcept { return multiplicity_; }
  [[nodiscard]] bool present(EdgeId e) const { return multiplicity_.at(e) > 0; }
  [[nodiscard]] Weight total() const noexcept;
  [[nodiscard]] double probability() const noexcept { return p_; }
  [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }
  /// True when the edges with multiplicity >= 1 connect every vertex.
  [[nodiscard]] bool connected() const;

 private:
  const WeightedMultigraph* base_;
  std::vector<Weight> multiplicity_;
  double p_;
  std::uint64_t seed_;
};

/// Threshold t with P(draw < t) = prob for a uniform 64-bit draw.
std::uint64_t presence_threshold(double prob) noexcept;

/// Binomial(w, p) drawn in two stages: `presence` decides X >= 1 with one
/// draw compared against presence_threshold(1 - (1-p)^w); `magnitude`
/// draws X conditioned on X >= 1.  Stage one alone therefore reproduces
/// the presence pattern of a subgraph.
Weight sample_binomial(Weight w, double p, SplitMix64& presence, SplitMix64& magnitude);

/// Binomial(w, p) conditioned on being at least 1.
Weight sample_positive_binomial(Weight w, double p, SplitMix64& rng);

/// Keeps each unit edge with probability p; multiplicity(e) ~ Binomial(w(e), p).
SampledSubgraph sample_subgraph(const WeightedMultigraph& g, double p, std::uint64_t seed);

/// Hop distances from `source`; unreachable vertices get SIZE_MAX.
std::vector<std::size_t> bfs_distances(const WeightedMultigraph& g, Vertex source);
std::size_t eccentricity(const WeightedMultigraph& g, Vertex source);
/// Unweighted hop diameter.
std::size_t diameter(const WeightedMultigraph& g);

// ---- file format -----------------------------------------------------------

struct PlantedCut {
  Weight weight = 0;
  std::vector<Vertex> side;
};

struct GraphFile {
  WeightedMultigraph graph;
  std::optional<PlantedCut> planted;
  /// External vertex names; empty when ids are used as-is.
  std::vector<std::string> labels;
};

GraphFile read_graph(std::istream& in, Weight max_weight = 0);
void write_graph(std::ostream& out, const GraphFile& file);
GraphFile load_graph_file(const std::string& path, Weight max_weight = 0);
WeightedMultigraph load_graph(const std::string& path, Weight max_weight = 0);
void save_graph(const std::string& path, const GraphFile& file);

// ---- generators ------------------------------------------------------------

struct PlantedCutParams {
  std::size_t side_a = 10;
  std::size_t side_b = 10;
  /// Probability of each internal edge; 1 gives two cliques.
  double internal_p = 1.0;
  /// Number of unit edges crossing the planted bipartition.
  Weight crossing = 3;
};

struct GeneratedGraph {
  WeightedMultigraph graph;
  std::optional<PlantedCut> planted;
};

/// Two dense sides joined by `crossing` random unit edges.  Side A holds
/// vertices [0, side_a).  Requires crossing to be strictly below every
/// vertex's internal degree.
GeneratedGraph planted_cut(const PlantedCutParams& params, std::uint64_t seed);

/// Random spanning tree plus `extra_edges` distinct random non-tree pairs,
/// weights uniform in [1, max_edge_weight].
WeightedMultigraph random_connected(std::size_t n, std::size_t extra_edges, std::uint64_t seed,
                                    Weight max_edge_weight = 1);

/// `len` cliques of `k` vertices, consecutive cliques joined by one edge.
WeightedMultigraph clique_path(std::size_t k, std::size_t len);

WeightedMultigraph path_graph(std::size_t n, Weight w = 1);
WeightedMultigraph cycle_graph(std::size_t n);
WeightedMultigraph star_graph(std::size_t leaves);
WeightedMultigraph complete_graph(std::size_t n);

}  // namespace dmc
