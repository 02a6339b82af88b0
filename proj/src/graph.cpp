#include "dmc/graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <random>

#include "dmc/errors.hpp"

namespace dmc {

namespace {

bool spans(std::size_t n, std::span<const Edge> edges, auto&& keep) {
  if (n <= 1) return true;
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::size_t components = n;
  for (std::size_t e = 0; e < edges.size(); ++e) {
    if (!keep(e)) continue;
    auto a = find(edges[e].u);
    auto b = find(edges[e].v);
    if (a != b) {
      parent[a] = b;
      --components;
    }
  }
  return components == 1;
}

}  // namespace

Weight WeightedMultigraph::default_max_weight(std::size_t n) noexcept {
  return std::max<Weight>(1, static_cast<Weight>(n) * static_cast<Weight>(n));
}

WeightedMultigraph::WeightedMultigraph(std::size_t n, std::vector<Edge> edges, Weight max_weight)
    : n_(n), max_weight_(max_weight == 0 ? default_max_weight(n) : max_weight) {
  if (n == 0) throw ValidationError("graph must have at least one vertex");
  if (n > std::numeric_limits<Vertex>::max()) throw ValidationError("too many vertices");
  for (auto& e : edges) {
    if (e.u >= n || e.v >= n) {
      throw ValidationError("edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                            ") has an endpoint outside [0," + std::to_string(n) + ")");
    }
    if (e.u == e.v) throw ValidationError("self-loop at vertex " + std::to_string(e.u));
    if (e.w == 0) throw ValidationError("edge weight must be at least 1");
    if (e.u > e.v) std::swap(e.u, e.v);
  }
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    return std::tie(a.u, a.v) < std::tie(b.u, b.v);
  });
  for (const auto& e : edges) {
    if (!edges_.empty() && edges_.back().u == e.u && edges_.back().v == e.v) {
      edges_.back().w += e.w;
    } else {
      edges_.push_back(e);
    }
  }
  for (const auto& e : edges_) {
    if (e.w > max_weight_) {
      throw ValidationError("edge (" + std::to_string(e.u) + "," + std::to_string(e.v) + ") weight " +
                            std::to_string(e.w) + " exceeds W=" + std::to_string(max_weight_));
    }
    multi_edge_count_ += e.w;
  }
  if (!spans(n_, edges_, [](std::size_t) { return true; })) {
    throw DisconnectedError("graph is not connected");
  }

  offsets_.assign(n_ + 1, 0);
  for (const auto& e : edges_) {
    ++offsets_[e.u + 1];
    ++offsets_[e.v + 1];
  }
  std::partial_sum(offsets_.begin(), offsets_.end(), offsets_.begin());
  incidence_.resize(offsets_.back());
  std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (EdgeId id = 0; id < edges_.size(); ++id) {
    incidence_[fill[edges_[id].u]++] = id;
    incidence_[fill[edges_[id].v]++] = id;
  }
  for (Vertex v = 0; v < n_; ++v) {
    std::sort(incidence_.begin() + static_cast<std::ptrdiff_t>(offsets_[v]),
              incidence_.begin() + static_cast<std::ptrdiff_t>(offsets_[v + 1]),
              [&](EdgeId a, EdgeId b) { return other(a, v) < other(b, v); });
  }
}

std::span<const EdgeId> WeightedMultigraph::incident(Vertex v) const {
  if (v >= n_) throw ValidationError("vertex out of range");
  return std::span<const EdgeId>(incidence_).subspan(offsets_[v], offsets_[v + 1] - offsets_[v]);
}

Vertex WeightedMultigraph::other(EdgeId e, Vertex v) const {
  const auto& edge = edges_[e];
  return edge.u == v ? edge.v : edge.u;
}

std::optional<EdgeId> WeightedMultigraph::find_edge(Vertex a, Vertex b) const {
  if (a > b) std::swap(a, b);
  auto it = std::lower_bound(edges_.begin(), edges_.end(), std::pair{a, b},
                             [](const Edge& e, const std::pair<Vertex, Vertex>& key) {
                               return std::tie(e.u, e.v) < std::tie(key.first, key.second);
                             });
  if (it == edges_.end() || it->u != a || it->v != b) return std::nullopt;
  return static_cast<EdgeId>(it - edges_.begin());
}

// ---- VertexSide ------------------------------------------------------------

VertexSide::VertexSide(std::vector<bool> mask) : mask_(std::move(mask)) {
  count_ = static_cast<std::size_t>(std::count(mask_.begin(), mask_.end(), true));
  if (count_ == 0) throw ValidationError("cut side is empty");
  if (count_ == mask_.size()) throw ValidationError("cut side contains every vertex");
}

VertexSide::VertexSide(std::size_t n, std::span<const Vertex> members)
    : VertexSide([&] {
        std::vector<bool> mask(n, false);
        for (Vertex v : members) {
          if (v >= n) throw ValidationError("cut side names vertex " + std::to_string(v) + " >= n");
          mask[v] = true;
        }
        return mask;
      }()) {}

VertexSide VertexSide::from_mask(std::vector<bool> mask) { return VertexSide(std::move(mask)); }

std::vector<Vertex> VertexSide::members() const {
  std::vector<Vertex> out;
  out.reserve(count_);
  for (Vertex v = 0; v < mask_.size(); ++v)
    if (mask_[v]) out.push_back(v);
  return out;
}

VertexSide VertexSide::complement() const {
  auto flipped = mask_;
  flipped.flip();
  return VertexSide(std::move(flipped));
}

VertexSide VertexSide::canonical() const { return mask_[0] ? complement() : *this; }

Weight cut_weight(const WeightedMultigraph& g, const VertexSide& side) {
  if (side.universe() != g.vertex_count()) throw ValidationError("cut side is over a different vertex set");
  Weight total = 0;
  for (const auto& e : g.edges())
    if (side.contains(e.u) != side.contains(e.v)) total += e.w;
  return total;
}

// ---- sampling --------------------------------------------------------------

SampledSubgraph::SampledSubgraph(const WeightedMultigraph& base, std::vector<Weight> multiplicity, double p,
                                 std::uint64_t seed)
    : base_(&base), multiplicity_(std::move(multiplicity)), p_(p), seed_(seed) {
  if (multiplicity_.size() != base.edge_count()) throw ValidationError("multiplicity vector size mismatch");
  for (EdgeId e = 0; e < multiplicity_.size(); ++e)
    if (multiplicity_[e] > base.edge(e).w) throw ValidationError("multiplicity exceeds edge weight");
}

SampledSubgraph SampledSubgraph::full(const WeightedMultigraph& base) {
  std::vector<Weight> m;
  m.reserve(base.edge_count());
  for (const auto& e : base.edges()) m.push_back(e.w);
  return {base, std::move(m), 1.0, 0};
}

SampledSubgraph SampledSubgraph::empty(const WeightedMultigraph& base) {
  return {base, std::vector<Weight>(base.edge_count(), 0), 0.0, 0};
}

Weight SampledSubgraph::total() const noexcept {
  return std::accumulate(multiplicity_.begin(), multiplicity_.end(), Weight{0});
}

bool SampledSubgraph::connected() const {
  return spans(base_->vertex_count(), base_->edges(), [&](std::size_t e) { return multiplicity_[e] > 0; });
}

std::uint64_t presence_threshold(double prob) noexcept {
  if (!(prob > 0.0)) return 0;
  if (prob >= 1.0) return std::numeric_limits<std::uint64_t>::max();
  return static_cast<std::uint64_t>(std::ldexp(prob, 64));
}

// X ~ Binomial(w, p) conditioned on X >= 1.
Weight sample_positive_binomial(Weight w, double p, SplitMix64& rng) {
  if (p >= 1.0) return w;
  const double q = 1.0 - p;
  const double p_zero = std::pow(q, static_cast<double>(w));
  if (p_zero > 0.5) {
    // Inversion from j = 1 over the truncated pmf.
    const double mass = -std::expm1(static_cast<double>(w) * std::log1p(-p));
    double pmf = static_cast<double>(w) * p * std::pow(q, static_cast<double>(w - 1));
    double u = rng.uniform() * mass;
    Weight j = 1;
    while (u > pmf && j < w) {
      u -= pmf;
      pmf *= (static_cast<double>(w - j) / static_cast<double>(j + 1)) * (p / q);
      ++j;
    }
    return j;
  }
  std::binomial_distribution<Weight> dist(w, p);
  for (;;) {
    Weight x = dist(rng);
    if (x >= 1) return x;
  }
}

Weight sample_binomial(Weight w, double p, SplitMix64& presence, SplitMix64& magnitude) {
  if (w == 0 || !(p > 0.0)) {
    presence();
    return 0;
  }
  const double keep = p >= 1.0 ? 1.0 : -std::expm1(static_cast<double>(w) * std::log1p(-p));
  const std::uint64_t draw = presence();
  if (p < 1.0 && draw >= presence_threshold(keep)) return 0;
  return sample_positive_binomial(w, p, magnitude);
}

SampledSubgraph sample_subgraph(const WeightedMultigraph& g, double p, std::uint64_t seed) {
  if (!(p > 0.0) || p > 1.0) throw ValidationError("sampling probability must lie in (0,1]");
  SplitMix64 root(seed);
  auto presence = root.derive("presence");
  auto magnitude = root.derive("magnitude");
  std::vector<Weight> m;
  m.reserve(g.edge_count());
  for (const auto& e : g.edges()) m.push_back(sample_binomial(e.w, p, presence, magnitude));
  return {g, std::move(m), p, seed};
}

// ---- distances -------------------------------------------------------------

std::vector<std::size_t> bfs_distances(const WeightedMultigraph& g, Vertex source) {
  constexpr auto kInf = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> dist(g.vertex_count(), kInf);
  std::queue<Vertex> queue;
  dist[source] = 0;
  queue.push(source);
  while (!queue.empty()) {
    Vertex x = queue.front();
    queue.pop();
    for (EdgeId e : g.incident(x)) {
      Vertex y = g.other(e, x);
      if (dist[y] == kInf) {
        dist[y] = dist[x] + 1;
        queue.push(y);
      }
    }
  }
  return dist;
}

std::size_t eccentricity(const WeightedMultigraph& g, Vertex source) {
  auto dist = bfs_distances(g, source);
  return *std::max_element(dist.begin(), dist.end());
}

std::size_t diameter(const WeightedMultigraph& g) {
  std::size_t best = 0;
  for (Vertex v = 0; v < g.vertex_count(); ++v) best = std::max(best, eccentricity(g, v));
  return best;
}

}  // namespace dmc
