#include "dmc/load.hpp"

#include <algorithm>

#include "dmc/errors.hpp"

namespace dmc {

EdgeLoad::EdgeLoad(std::vector<Weight> multiplicity)
    : mult_(std::move(multiplicity)), base_(mult_.size(), 0), raised_(mult_.size(), 0) {}

EdgeLoad EdgeLoad::for_graph(const WeightedMultigraph& g) {
  std::vector<Weight> m;
  m.reserve(g.edge_count());
  for (const auto& e : g.edges()) m.push_back(e.w);
  return EdgeLoad(std::move(m));
}

EdgeLoad EdgeLoad::for_sample(const SampledSubgraph& h) {
  return EdgeLoad({h.multiplicities().begin(), h.multiplicities().end()});
}

std::uint64_t EdgeLoad::load(EdgeId e, Weight copy) const {
  if (copy >= mult_.at(e)) throw ValidationError("edge copy index out of range");
  return base_[e] + (copy < raised_[e] ? 1 : 0);
}

void EdgeLoad::use(EdgeId e) {
  if (mult_.at(e) == 0) throw ValidationError("cannot load an absent edge");
  if (++raised_[e] == mult_[e]) {
    raised_[e] = 0;
    ++base_[e];
  }
}

void EdgeLoad::set(EdgeId e, std::uint64_t base, Weight raised) {
  if (mult_.at(e) == 0 ? (base != 0 || raised != 0) : raised >= mult_[e])
    throw ValidationError("load shape does not fit the edge multiplicity");
  base_[e] = base;
  raised_[e] = raised;
}

std::uint64_t EdgeLoad::total() const {
  std::uint64_t s = 0;
  for (std::size_t e = 0; e < mult_.size(); ++e) s += base_[e] * mult_[e] + raised_[e];
  return s;
}

std::uint64_t EdgeLoad::max_load() const {
  std::uint64_t best = 0;
  for (std::size_t e = 0; e < mult_.size(); ++e)
    if (mult_[e] > 0) best = std::max(best, base_[e] + (raised_[e] > 0 ? 1 : 0));
  return best;
}

}  // namespace dmc
