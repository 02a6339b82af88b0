#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dmc/congest.hpp"
#include "dmc/graph.hpp"

namespace dmc::bench {

/// Graph of the named family with n vertices.  cliquepath needs n to be
/// k * len with k = round(sqrt n).
WeightedMultigraph family_graph(const std::string& family, std::size_t n, std::uint64_t seed);

/// Rounds of the tree primitives on the first packed tree of g.
struct TreeRounds {
  std::size_t n = 0;
  std::size_t diameter = 0;
  std::size_t tree_height = 0;
  std::size_t fragments = 0;
  std::int64_t decompose = 0;
  std::int64_t preorder = 0;
  std::int64_t low_high = 0;
  std::int64_t bridges = 0;
  int max_bits = 0;

  [[nodiscard]] std::int64_t labels_total() const { return decompose + preorder + low_high; }
  /// D + sqrt(n).
  [[nodiscard]] double scale() const;
};

TreeRounds measure_tree_rounds(const WeightedMultigraph& g, const congest::NetworkConfig& config, std::uint64_t seed);

}  // namespace dmc::bench
