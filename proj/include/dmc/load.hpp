#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "dmc/graph.hpp"

namespace dmc {

/// Loads on the unit parallel copies of a multigraph's edges.
///
/// Copies of one edge are filled in copy-index order, so the loads of an
/// edge's copies always take the shape "copies [0, raised) carry base + 1,
/// the rest carry base".  Storing (base, raised) per edge is then exact and
/// independent of the multiplicity.
class EdgeLoad {
 public:
  EdgeLoad() = default;
  /// One entry per edge; zero multiplicity marks an absent edge.
  explicit EdgeLoad(std::vector<Weight> multiplicity);
  static EdgeLoad for_graph(const WeightedMultigraph& g);
  static EdgeLoad for_sample(const SampledSubgraph& h);

  [[nodiscard]] std::size_t edge_count() const noexcept { return mult_.size(); }
  [[nodiscard]] Weight multiplicity(EdgeId e) const { return mult_.at(e); }
  [[nodiscard]] std::span<const Weight> multiplicities() const noexcept { return mult_; }
  /// Load of copy `copy` of edge e.
  [[nodiscard]] std::uint64_t load(EdgeId e, Weight copy) const;
  /// The lightest copy of e and its load: (base, raised).
  [[nodiscard]] std::uint64_t min_load(EdgeId e) const { return base_.at(e); }
  [[nodiscard]] Weight min_copy(EdgeId e) const { return raised_.at(e); }
  /// Puts one more tree on the lightest copy of e.
  void use(EdgeId e);
  /// Sets the load shape of e directly; requires raised < multiplicity.
  void set(EdgeId e, std::uint64_t base, Weight raised);

  /// Sum of loads over every copy.
  [[nodiscard]] std::uint64_t total() const;
  [[nodiscard]] std::uint64_t max_load() const;

  friend bool operator==(const EdgeLoad&, const EdgeLoad&) = default;

 private:
  std::vector<Weight> mult_;
  std::vector<std::uint64_t> base_;
  std::vector<Weight> raised_;
};

}  // namespace dmc
