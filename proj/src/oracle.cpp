#include "dmc/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <tuple>

#include "dmc/errors.hpp"

namespace dmc::oracle {

ExactMinCut stoer_wagner(const WeightedMultigraph& g) {
  const std::size_t n = g.vertex_count();
  if (n < 2) throw ValidationError("minimum cut needs at least two vertices");
  std::vector<std::vector<Weight>> adj(n, std::vector<Weight>(n, 0));
  for (const auto& e : g.edges()) {
    adj[e.u][e.v] += e.w;
    adj[e.v][e.u] += e.w;
  }
  // groups[i]: original vertices merged into super-vertex i.
  std::vector<std::vector<Vertex>> groups(n);
  for (Vertex v = 0; v < n; ++v) groups[v] = {v};
  std::vector<Vertex> alive(n);
  std::iota(alive.begin(), alive.end(), 0);

  Weight best = std::numeric_limits<Weight>::max();
  std::vector<Vertex> best_side;
  while (alive.size() > 1) {
    std::vector<Weight> conn(n, 0);
    std::vector<char> added(n, 0);
    Vertex prev = alive[0], last = alive[0];
    for (std::size_t step = 0; step < alive.size(); ++step) {
      Vertex pick = n;
      for (Vertex v : alive)
        if (!added[v] && (pick == n || conn[v] > conn[pick])) pick = v;
      added[pick] = 1;
      prev = last;
      last = pick;
      for (Vertex v : alive)
        if (!added[v]) conn[v] += adj[pick][v];
    }
    if (conn[last] < best) {
      best = conn[last];
      best_side = groups[last];
    }
    // Merge last into prev.
    groups[prev].insert(groups[prev].end(), groups[last].begin(), groups[last].end());
    for (Vertex v : alive) {
      adj[prev][v] += adj[last][v];
      adj[v][prev] = adj[prev][v];
    }
    adj[prev][prev] = 0;
    alive.erase(std::find(alive.begin(), alive.end(), last));
  }
  return {best, VertexSide(n, best_side).canonical()};
}

ExactMinCut brute_force_min_cut(const WeightedMultigraph& g) {
  const std::size_t n = g.vertex_count();
  if (n < 2 || n > 12) throw ValidationError("brute force cut scan needs 2 <= n <= 12");
  Weight best = std::numeric_limits<Weight>::max();
  std::uint32_t best_mask = 0;
  // Vertex 0 stays outside the side, so each cut is seen once.
  for (std::uint32_t mask = 1; mask < (1u << (n - 1)); ++mask) {
    const std::uint32_t side = mask << 1;
    Weight w = 0;
    for (const auto& e : g.edges())
      if (((side >> e.u) & 1u) != ((side >> e.v) & 1u)) w += e.w;
    if (w < best) {
      best = w;
      best_mask = side;
    }
  }
  std::vector<bool> m(n);
  for (Vertex v = 0; v < n; ++v) m[v] = ((best_mask >> v) & 1u) != 0;
  return {best, VertexSide::from_mask(std::move(m))};
}

namespace {

struct UnionFind {
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[a] = b;
    return true;
  }
  std::vector<std::size_t> parent;
};

}  // namespace

KruskalTree kruskal_with_order(const WeightedMultigraph& g, std::span<const Weight> multiplicity,
                               const CopyLoad& load) {
  if (multiplicity.size() != g.edge_count()) throw ValidationError("one multiplicity per edge required");
  using Key = std::tuple<std::uint64_t, Vertex, Vertex, Weight, EdgeId>;
  std::vector<Key> copies;
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    const auto& ed = g.edge(e);
    for (Weight c = 0; c < multiplicity[e]; ++c)
      copies.emplace_back(load(e, c), std::min(ed.u, ed.v), std::max(ed.u, ed.v), c, e);
  }
  std::sort(copies.begin(), copies.end());
  UnionFind uf(g.vertex_count());
  KruskalTree out;
  for (const auto& [l, a, b, c, e] : copies) {
    if (!uf.unite(a, b)) continue;
    out.edges.push_back({e, c, l});
    out.total_load += l;
  }
  if (out.edges.size() + 1 != g.vertex_count()) throw DisconnectedError("present edges do not span the graph");
  return out;
}

std::vector<bool> dfs_bridges(std::size_t n, std::span<const MultiEdge> edges) {
  // Expand to one adjacency entry per listed edge; an entry with count >= 2
  // gets a second copy so it closes a cycle with itself.
  struct Arc {
    Vertex to;
    std::size_t id;  // position in the expanded list
  };
  std::vector<std::size_t> owner;
  std::vector<std::vector<Arc>> adj(n);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const auto& e = edges[i];
    if (e.u >= n || e.v >= n) throw ValidationError("bridge oracle edge out of range");
    if (e.count == 0 || e.u == e.v) continue;
    for (Weight c = 0; c < std::min<Weight>(e.count, 2); ++c) {
      const std::size_t id = owner.size();
      owner.push_back(i);
      adj[e.u].push_back({e.v, id});
      adj[e.v].push_back({e.u, id});
    }
  }
  std::vector<bool> bridge(edges.size(), false);
  std::vector<int> disc(n, -1), low(n, 0);
  int timer = 0;
  struct Frame {
    Vertex v;
    std::size_t via;  // arc id used to enter v
    std::size_t next = 0;
  };
  for (Vertex s = 0; s < n; ++s) {
    if (disc[s] != -1) continue;
    std::vector<Frame> stack{{s, static_cast<std::size_t>(-1)}};
    disc[s] = low[s] = timer++;
    while (!stack.empty()) {
      auto& f = stack.back();
      if (f.next < adj[f.v].size()) {
        const Arc a = adj[f.v][f.next++];
        if (a.id == f.via) continue;
        if (disc[a.to] == -1) {
          disc[a.to] = low[a.to] = timer++;
          stack.push_back({a.to, a.id});
        } else {
          low[f.v] = std::min(low[f.v], disc[a.to]);
        }
        continue;
      }
      const Frame done = f;
      stack.pop_back();
      if (stack.empty()) break;
      Vertex p = stack.back().v;
      low[p] = std::min(low[p], low[done.v]);
      if (low[done.v] > disc[p]) bridge[owner[done.via]] = true;
    }
  }
  // Parallel listings of one pair are never bridges.
  std::vector<std::tuple<Vertex, Vertex, std::size_t>> pairs;
  for (std::size_t i = 0; i < edges.size(); ++i)
    if (edges[i].count > 0 && edges[i].u != edges[i].v)
      pairs.emplace_back(std::min(edges[i].u, edges[i].v), std::max(edges[i].u, edges[i].v), i);
  std::sort(pairs.begin(), pairs.end());
  for (std::size_t i = 0; i + 1 < pairs.size(); ++i)
    if (std::get<0>(pairs[i]) == std::get<0>(pairs[i + 1]) && std::get<1>(pairs[i]) == std::get<1>(pairs[i + 1])) {
      bridge[std::get<2>(pairs[i])] = false;
      bridge[std::get<2>(pairs[i + 1])] = false;
    }
  return bridge;
}

namespace {

void preorder_visit(Vertex v, const std::vector<std::vector<Vertex>>& kids, Labels& out, std::uint32_t& next) {
  out.pre[v] = next++;
  out.size[v] = 1;
  for (Vertex c : kids[v]) {
    preorder_visit(c, kids, out, next);
    out.size[v] += out.size[c];
  }
}

void low_high_visit(Vertex v, const std::vector<std::vector<Vertex>>& kids,
                    const std::vector<std::vector<Vertex>>& other, Labels& out) {
  out.low[v] = out.high[v] = out.pre[v];
  for (Vertex w : other[v]) {
    out.low[v] = std::min(out.low[v], out.pre[w]);
    out.high[v] = std::max(out.high[v], out.pre[w]);
  }
  for (Vertex c : kids[v]) {
    low_high_visit(c, kids, other, out);
    out.low[v] = std::min(out.low[v], out.low[c]);
    out.high[v] = std::max(out.high[v], out.high[c]);
  }
}

}  // namespace

Labels centralized_labels(Vertex root, std::span<const Vertex> parent, std::span<const MultiEdge> extra) {
  const std::size_t n = parent.size();
  std::vector<std::vector<Vertex>> kids(n), other(n);
  for (Vertex v = 0; v < n; ++v)
    if (v != root) kids.at(parent[v]).push_back(v);
  for (const auto& e : extra) {
    if (e.count == 0) continue;
    other.at(e.u).push_back(e.v);
    other.at(e.v).push_back(e.u);
  }
  Labels out;
  out.pre.assign(n, 0);
  out.size.assign(n, 0);
  out.low.assign(n, 0);
  out.high.assign(n, 0);
  std::uint32_t next = 0;
  preorder_visit(root, kids, out, next);
  low_high_visit(root, kids, other, out);
  return out;
}

double expected_y(double w, double kappa) { return 1.0 - std::exp2(-w / kappa); }

bool bfs_connected(std::size_t n, std::span<const MultiEdge> edges) {
  if (n == 0) return true;
  std::vector<std::vector<Vertex>> adj(n);
  for (const auto& e : edges) {
    if (e.count == 0) continue;
    adj.at(e.u).push_back(e.v);
    adj.at(e.v).push_back(e.u);
  }
  std::vector<char> seen(n, 0);
  std::queue<Vertex> q;
  q.push(0);
  seen[0] = 1;
  std::size_t count = 1;
  while (!q.empty()) {
    Vertex x = q.front();
    q.pop();
    for (Vertex y : adj[x])
      if (!seen[y]) {
        seen[y] = 1;
        ++count;
        q.push(y);
      }
  }
  return count == n;
}

}  // namespace dmc::oracle
