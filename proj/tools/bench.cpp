#include "bench.hpp"

#include <cmath>

#include "dmc/load.hpp"
#include "dmc/mst.hpp"
#include "dmc/tree.hpp"

namespace dmc::bench {

WeightedMultigraph family_graph(const std::string& family, std::size_t n, std::uint64_t seed) {
  if (n < 2) throw ValidationError("bench sizes must be at least 2");
  if (family == "cliquepath") {
    const auto k = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(n))));
    if (k < 2 || n % k != 0)
      throw ValidationError("cliquepath size " + std::to_string(n) + " is not k * len with k = round(sqrt n)");
    return clique_path(k, n / k);
  }
  if (family == "path") return path_graph(n);
  if (family == "random") return random_connected(n, n, seed);
  throw ValidationError("unknown family '" + family + "'");
}

double TreeRounds::scale() const { return static_cast<double>(diameter) + std::sqrt(static_cast<double>(n)); }

TreeRounds measure_tree_rounds(const WeightedMultigraph& g, const congest::NetworkConfig& config, std::uint64_t seed) {
  congest::Network net(g);
  auto mst = mst::distributed_mst(net, EdgeLoad::for_graph(g), config);
  tree::TreeSession session(net, mst.tree, config);
  TreeRounds r;
  r.n = g.vertex_count();
  r.diameter = diameter(g);
  r.tree_height = mst.tree.height();
  const auto& d = session.decompose();
  r.fragments = d.fragments.count();
  r.decompose = d.stats.rounds + session.cast_stats().rounds;
  const auto& p = session.compute_preorder();
  r.preorder = p.stats.rounds;
  auto sample = sample_subgraph(g, 0.5, seed);
  auto lh = session.compute_low_high(sample);
  r.low_high = lh.stats.rounds;
  auto b = session.find_bridges(sample);
  r.bridges = b.stats.rounds;
  r.max_bits = std::max({d.stats.max_bits, p.stats.max_bits, lh.stats.max_bits, b.stats.max_bits,
                         session.cast_stats().max_bits});
  return r;
}

}  // namespace dmc::bench
