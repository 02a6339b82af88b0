#include "dmc/tree.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>

namespace dmc::tree {

using congest::bits_for;

// ---- RootedSpanningTree ----------------------------------------------------

RootedSpanningTree::RootedSpanningTree(Vertex root, std::vector<Vertex> parent)
    : root_(root), parent_(std::move(parent)) {
  const std::size_t n = parent_.size();
  if (root_ >= n) throw ValidationError("tree root out of range");
  if (parent_[root_] != root_) throw ValidationError("tree root must be its own parent");
  child_offset_.assign(n + 1, 0);
  for (Vertex v = 0; v < n; ++v) {
    if (parent_[v] >= n) throw ValidationError("tree parent out of range");
    if (v != root_ && parent_[v] == v) throw ValidationError("tree has more than one root");
    if (v != root_) ++child_offset_[parent_[v] + 1];
  }
  std::partial_sum(child_offset_.begin(), child_offset_.end(), child_offset_.begin());
  child_list_.resize(n - 1);
  auto fill = child_offset_;
  for (Vertex v = 0; v < n; ++v)
    if (v != root_) child_list_[fill[parent_[v]]++] = v;  // ascending v keeps children sorted
  // Acyclic and spanning: every vertex reached from the root.
  std::vector<char> seen(n, 0);
  std::vector<Vertex> stack{root_};
  seen[root_] = 1;
  std::size_t reached = 1;
  while (!stack.empty()) {
    Vertex x = stack.back();
    stack.pop_back();
    for (Vertex c : children(x)) {
      if (seen[c]) throw ValidationError("tree parent pointers contain a cycle");
      seen[c] = 1;
      ++reached;
      stack.push_back(c);
    }
  }
  if (reached != n) throw ValidationError("tree parent pointers contain a cycle");
}

RootedSpanningTree RootedSpanningTree::from_edges(std::size_t n, Vertex root,
                                                  std::span<const std::pair<Vertex, Vertex>> edges) {
  if (edges.size() + 1 != n) throw ValidationError("a spanning tree needs exactly n-1 edges");
  std::vector<std::vector<Vertex>> adj(n);
  for (auto [a, b] : edges) {
    if (a >= n || b >= n) throw ValidationError("tree edge endpoint out of range");
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  std::vector<Vertex> parent(n, static_cast<Vertex>(n));
  parent.at(root) = root;
  std::queue<Vertex> q;
  q.push(root);
  while (!q.empty()) {
    Vertex x = q.front();
    q.pop();
    for (Vertex y : adj[x]) {
      if (parent[y] != n) continue;
      parent[y] = x;
      q.push(y);
    }
  }
  if (std::find(parent.begin(), parent.end(), static_cast<Vertex>(n)) != parent.end())
    throw ValidationError("tree edges do not span the vertex set");
  return {root, std::move(parent)};
}

std::span<const Vertex> RootedSpanningTree::children(Vertex v) const {
  return std::span<const Vertex>(child_list_).subspan(child_offset_.at(v), child_offset_[v + 1] - child_offset_[v]);
}

std::vector<std::pair<Vertex, Vertex>> RootedSpanningTree::edges() const {
  std::vector<std::pair<Vertex, Vertex>> out;
  for (Vertex v = 0; v < parent_.size(); ++v)
    if (v != root_) out.emplace_back(parent_[v], v);
  return out;
}

bool RootedSpanningTree::has_edge(Vertex a, Vertex b) const {
  return (a != root_ && parent_.at(a) == b) || (b != root_ && parent_.at(b) == a);
}

std::size_t RootedSpanningTree::height() const {
  std::size_t best = 0;
  std::vector<std::pair<Vertex, std::size_t>> stack{{root_, 0}};
  while (!stack.empty()) {
    auto [x, d] = stack.back();
    stack.pop_back();
    best = std::max(best, d);
    for (Vertex c : children(x)) stack.emplace_back(c, d + 1);
  }
  return best;
}

void RootedSpanningTree::check_spans(const WeightedMultigraph& g) const {
  if (g.vertex_count() != parent_.size()) throw ValidationError("tree and graph have different vertex counts");
  for (auto [p, c] : edges())
    if (!g.find_edge(p, c))
      throw ValidationError("tree edge (" + std::to_string(p) + "," + std::to_string(c) + ") is not a graph edge");
}

std::size_t fragment_height_limit(std::size_t n) noexcept {
  auto t = static_cast<std::size_t>(std::sqrt(static_cast<double>(n)));
  while (t * t < n) ++t;
  while (t > 1 && (t - 1) * (t - 1) >= n) --t;
  return std::max<std::size_t>(t, 1);
}

std::vector<std::pair<Vertex, Vertex>> Bridges::edges(const RootedSpanningTree& t) const {
  std::vector<std::pair<Vertex, Vertex>> out;
  for (Vertex v = 0; v < bridge.size(); ++v)
    if (bridge[v]) out.emplace_back(t.parent(v), v);
  return out;
}

// ---- TreeSession -----------------------------------------------------------

namespace {

std::vector<std::optional<Vertex>> parent_vertices(const RootedSpanningTree& t) {
  std::vector<std::optional<Vertex>> out(t.vertex_count());
  for (Vertex v = 0; v < t.vertex_count(); ++v)
    if (v != t.root()) out[v] = t.parent(v);
  return out;
}

}  // namespace

TreeSession::TreeSession(const Network& net, const RootedSpanningTree& tree, const NetworkConfig& config)
    : net_(&net), tree_(&tree), config_(config) {
  tree.check_spans(net.graph());
  auto parents = parent_vertices(tree);
  tree_overlay_ = Overlay::from_parents(net, parents);
}

void TreeSession::ensure_cast() {
  if (!cast_) cast_ = bfs_tree(*net_, tree_->root(), config_);
}

const RoundStats& TreeSession::cast_stats() {
  ensure_cast();
  return cast_->stats;
}

const Overlay& TreeSession::cast_overlay() {
  ensure_cast();
  return cast_->tree;
}

std::size_t TreeSession::cast_depth() {
  ensure_cast();
  return *std::max_element(cast_->depth.begin(), cast_->depth.end());
}

std::size_t TreeSession::fragment_index(Vertex fid) const {
  const auto& roots = decomposition_->fragments.roots;
  return static_cast<std::size_t>(std::lower_bound(roots.begin(), roots.end(), fid) - roots.begin());
}

const Decomposition& TreeSession::decompose() {
  if (decomposition_) return *decomposition_;
  const std::size_t n = net_->size();
  const auto limit = static_cast<std::uint64_t>(fragment_height_limit(n));
  const Vertex root = tree_->root();

  // Open height h in [1, limit) travels up; 0 means "I closed a fragment".
  RecordLayout height_layout{{bits_for(limit)}};
  std::vector<Record> own(n, Record{0});
  auto grown = convergecast(
      *net_, tree_overlay_, height_layout, own,
      [&](Vertex v, const Record&, std::span<const ChildRecord> kids) {
        std::uint64_t h = 1;
        for (const auto& k : kids) h = std::max(h, 1 + k.record[0]);
        return Record{(h >= limit || v == root) ? 0 : h};
      },
      config_, "decompose");

  // Fragment overlay: keep the tree edge above v iff v stayed open.
  std::vector<std::optional<Vertex>> frag_parent(n);
  for (Vertex v = 0; v < n; ++v)
    if (v != root && grown.subtree[v][0] != 0) frag_parent[v] = tree_->parent(v);
  fragment_overlay_ = Overlay::from_parents(*net_, frag_parent);
  outer_children_.assign(n, {});
  for (Vertex v = 0; v < n; ++v)
    for (const auto& k : grown.from_children[v])
      if (k.record[0] == 0) outer_children_[v].push_back(k.port);

  RecordLayout id_layout{{net_->id_bits()}};
  std::vector<std::optional<Record>> seeds(n);
  for (Vertex v = 0; v < n; ++v)
    if (fragment_overlay_.is_root(v)) seeds[v] = Record{v};
  auto ids = broadcast(
      *net_, fragment_overlay_, id_layout, seeds,
      [](Vertex, const Record& mine, std::span<const Port> kids) { return std::vector<Record>(kids.size(), mine); },
      config_, "decompose");

  Decomposition d;
  d.stats = grown.stats;
  d.stats += ids.stats;
  d.fragments.fragment_of.resize(n);
  for (Vertex v = 0; v < n; ++v) {
    d.fragments.fragment_of[v] = static_cast<Vertex>(ids.value[v][0]);
    if (fragment_overlay_.is_root(v)) d.fragments.roots.push_back(v);
  }
  decomposition_ = std::move(d);
  return *decomposition_;
}

const Preorder& TreeSession::compute_preorder() {
  if (preorder_) return *preorder_;
  decompose();
  ensure_cast();
  const std::size_t n = net_->size();
  const int idb = net_->id_bits();
  const Vertex root = tree_->root();
  const auto& frags = decomposition_->fragments;
  RecordLayout one{{idb}};
  RecordLayout two{{idb, idb}};
  RecordLayout three{{idb, idb, idb}};
  RoundStats stats;

  // 1. Fragment roots learn the fragment id of their tree parent.
  std::vector<Vertex> parent_fid(n, 0);
  parent_fid[root] = frags.fragment_of[root];
  {
    auto ex = exchange(
        *net_, one,
        [&](Vertex v) {
          std::vector<PortRecord> out;
          for (Port p : outer_children_[v]) out.push_back({p, Record{frags.fragment_of[v]}});
          return out;
        },
        config_, "preorder");
    stats += ex.stats;
    for (Vertex v = 0; v < n; ++v)
      for (const auto& r : ex.received[v]) parent_fid[v] = static_cast<Vertex>(r.record[0]);
  }

  // 2. Fragment sizes by convergecast inside each fragment (values are size-1).
  auto sum_sizes = [](Vertex, const Record&, std::span<const ChildRecord> kids) {
    std::uint64_t s = 0;
    for (const auto& k : kids) s += k.record[0] + 1;
    return Record{s};
  };
  auto local = convergecast(*net_, fragment_overlay_, one, std::vector<Record>(n, Record{0}), sum_sizes, config_,
                            "preorder");
  stats += local.stats;

  // 3. Fragment roots upcast (fid, parent fid, size-1); the root rebuilds the contracted tree.
  std::vector<std::vector<Record>> up(n);
  for (Vertex r : frags.roots) up[r].push_back({r, parent_fid[r], local.subtree[r][0]});
  auto gathered = upcast(*net_, cast_->tree, three, std::move(up), config_, "preorder");
  stats += gathered.stats;

  const std::size_t count = frags.count();
  contracted_ = {};
  contracted_.parent_fragment.assign(count, 0);
  contracted_.children.assign(count, {});
  std::vector<std::uint64_t> frag_size(count, 0);
  for (const auto& rec : gathered.at_root) {
    const auto i = fragment_index(static_cast<Vertex>(rec[0]));
    contracted_.parent_fragment[i] = static_cast<Vertex>(rec[1]);
    frag_size[i] = rec[2] + 1;
    if (rec[0] != rec[1]) contracted_.children[fragment_index(static_cast<Vertex>(rec[1]))].push_back(i);
  }
  {
    std::queue<std::size_t> q;
    q.push(fragment_index(frags.fragment_of[root]));
    while (!q.empty()) {
      auto i = q.front();
      q.pop();
      contracted_.top_down.push_back(i);
      for (auto c : contracted_.children[i]) q.push(c);
    }
  }
  std::vector<std::uint64_t> sub_size(count, 0);
  for (auto it = contracted_.top_down.rbegin(); it != contracted_.top_down.rend(); ++it) {
    sub_size[*it] += frag_size[*it];
    if (*it != contracted_.top_down.front())
      sub_size[fragment_index(contracted_.parent_fragment[*it])] += sub_size[*it];
  }

  // 4. Root downcasts (fid, subtree size-1) to every fragment root.
  std::vector<Record> down;
  for (std::size_t i = 0; i < count; ++i) down.push_back({frags.roots[i], sub_size[i] - 1});
  auto told = downcast(*net_, cast_->tree, two, std::move(down), config_, "preorder");
  stats += told.stats;
  std::vector<std::uint64_t> my_subtree(n, 0);
  for (Vertex r : frags.roots)
    for (const auto& rec : told.received[r])
      if (rec[0] == r) my_subtree[r] = rec[1] + 1;

  // 5. Fragment roots tell their tree parent their full subtree size.
  std::vector<std::vector<PortRecord>> outer_sizes(n);
  {
    auto ex = exchange(
        *net_, one,
        [&](Vertex v) {
          std::vector<PortRecord> out;
          if (frags.is_root(v) && v != root) out.push_back({*tree_overlay_.parent[v], Record{my_subtree[v] - 1}});
          return out;
        },
        config_, "preorder");
    stats += ex.stats;
    outer_sizes = std::move(ex.received);
  }

  // 6. Full subtree sizes inside each fragment, counting hanging fragments.
  auto full = convergecast(
      *net_, fragment_overlay_, one, std::vector<Record>(n, Record{0}),
      [&](Vertex v, const Record&, std::span<const ChildRecord> kids) {
        std::uint64_t s = 0;
        for (const auto& k : kids) s += k.record[0] + 1;
        for (const auto& o : outer_sizes[v]) s += o.record[0] + 1;
        return Record{s};
      },
      config_, "preorder");
  stats += full.stats;

  // Sizes of all tree children of v, in port (= vertex id) order.
  auto child_sizes = [&](Vertex v) {
    std::vector<std::pair<Port, std::uint64_t>> sizes;
    for (const auto& k : full.from_children[v]) sizes.emplace_back(k.port, k.record[0] + 1);
    for (const auto& o : outer_sizes[v]) sizes.emplace_back(o.port, o.record[0] + 1);
    std::sort(sizes.begin(), sizes.end());
    return sizes;
  };
  auto child_offsets = [&](Vertex v, std::uint64_t rel) {
    std::vector<std::pair<Port, std::uint64_t>> offs;
    std::uint64_t next = rel + 1;
    for (auto [port, size] : child_sizes(v)) {
      offs.emplace_back(port, next);
      next += size;
    }
    return offs;
  };

  // 7. Preorder relative to the fragment root, top-down inside fragments.
  std::vector<std::optional<Record>> zero(n);
  for (Vertex r : frags.roots) zero[r] = Record{0};
  auto rel = broadcast(
      *net_, fragment_overlay_, one, zero,
      [&](Vertex v, const Record& mine, std::span<const Port> kids) {
        auto offs = child_offsets(v, mine[0]);
        std::vector<Record> out;
        for (Port k : kids)
          out.push_back({std::find_if(offs.begin(), offs.end(), [&](const auto& o) { return o.first == k; })->second});
        return out;
      },
      config_, "preorder");
  stats += rel.stats;

  // 8. Hanging fragment roots learn their position inside the parent fragment.
  std::vector<std::uint64_t> rel_in_parent(n, 0);
  {
    auto ex = exchange(
        *net_, one,
        [&](Vertex v) {
          std::vector<PortRecord> out;
          for (auto [port, off] : child_offsets(v, rel.value[v][0]))
            if (std::find(outer_children_[v].begin(), outer_children_[v].end(), port) != outer_children_[v].end())
              out.push_back({port, Record{off}});
          return out;
        },
        config_, "preorder");
    stats += ex.stats;
    for (Vertex v = 0; v < n; ++v)
      for (const auto& r : ex.received[v]) rel_in_parent[v] = r.record[0];
  }

  // 9. Upcast the offsets; the root resolves absolute numbers of fragment roots.
  std::vector<std::vector<Record>> offsets_up(n);
  for (Vertex r : frags.roots)
    if (r != root) offsets_up[r].push_back({r, rel_in_parent[r]});
  auto offsets = upcast(*net_, cast_->tree, two, std::move(offsets_up), config_, "preorder");
  stats += offsets.stats;
  std::vector<std::uint64_t> frag_rel(count, 0), frag_pre(count, 0);
  for (const auto& rec : offsets.at_root) frag_rel[fragment_index(static_cast<Vertex>(rec[0]))] = rec[1];
  for (auto i : contracted_.top_down)
    if (i != contracted_.top_down.front())
      frag_pre[i] = frag_pre[fragment_index(contracted_.parent_fragment[i])] + frag_rel[i];

  // 10. Downcast absolute numbers; 11. fragments add them internally.
  std::vector<Record> abs;
  for (std::size_t i = 0; i < count; ++i) abs.push_back({frags.roots[i], frag_pre[i]});
  auto placed = downcast(*net_, cast_->tree, two, std::move(abs), config_, "preorder");
  stats += placed.stats;
  std::vector<std::optional<Record>> base(n);
  for (Vertex r : frags.roots)
    for (const auto& rec : placed.received[r])
      if (rec[0] == r) base[r] = Record{rec[1]};
  auto spread = broadcast(
      *net_, fragment_overlay_, one, base,
      [](Vertex, const Record& mine, std::span<const Port> kids) { return std::vector<Record>(kids.size(), mine); },
      config_, "preorder");
  stats += spread.stats;

  Preorder out;
  out.stats = std::move(stats);
  out.pre.resize(n);
  out.size.resize(n);
  for (Vertex v = 0; v < n; ++v) {
    out.pre[v] = static_cast<std::uint32_t>(spread.value[v][0] + rel.value[v][0]);
    out.size[v] = static_cast<std::uint32_t>(full.subtree[v][0] + 1);
  }
  preorder_ = std::move(out);
  return *preorder_;
}

LowHigh TreeSession::compute_low_high(const SampledSubgraph& sampled) {
  if (&sampled.base() != &net_->graph() && sampled.base().vertex_count() != net_->size())
    throw ValidationError("sampled subgraph is over a different vertex set");
  compute_preorder();
  const std::size_t n = net_->size();
  const int idb = net_->id_bits();
  const Vertex root = tree_->root();
  const auto& frags = decomposition_->fragments;
  const auto& pre = preorder_->pre;
  RecordLayout one{{idb}};
  RecordLayout two{{idb, idb}};
  RecordLayout three{{idb, idb, idb}};
  RoundStats stats;

  // 1. Preorder numbers cross every sampled edge (parallel copies of tree edges included).
  auto heard = exchange(
      *net_, one,
      [&](Vertex v) {
        std::vector<PortRecord> out;
        for (Port p = 0; p < net_->degree(v); ++p)
          if (sampled.present(net_->edge(v, p))) out.push_back({p, Record{pre[v]}});
        return out;
      },
      config_, "low_high");
  stats += heard.stats;
  std::vector<Record> own(n);
  for (Vertex v = 0; v < n; ++v) {
    std::uint64_t lo = pre[v], hi = pre[v];
    for (const auto& r : heard.received[v]) {
      lo = std::min(lo, r.record[0]);
      hi = std::max(hi, r.record[0]);
    }
    own[v] = {lo, hi};
  }
  auto min_max = [](const Record& own, std::span<const ChildRecord> kids, auto&& extra) {
    Record r = own;
    for (const auto& k : kids) {
      r[0] = std::min(r[0], k.record[0]);
      r[1] = std::max(r[1], k.record[1]);
    }
    extra(r);
    return r;
  };

  // 2. Fragment-wide min/max.
  auto inner = convergecast(
      *net_, fragment_overlay_, two, own,
      [&](Vertex, const Record& o, std::span<const ChildRecord> kids) { return min_max(o, kids, [](Record&) {}); },
      config_, "low_high");
  stats += inner.stats;

  // 3. Upcast per-fragment extremes; the root aggregates over the contracted tree.
  std::vector<std::vector<Record>> up(n);
  for (Vertex r : frags.roots) up[r].push_back({r, inner.subtree[r][0], inner.subtree[r][1]});
  auto gathered = upcast(*net_, cast_->tree, three, std::move(up), config_, "low_high");
  stats += gathered.stats;
  const std::size_t count = frags.count();
  std::vector<std::uint64_t> smin(count), smax(count);
  for (const auto& rec : gathered.at_root) {
    auto i = fragment_index(static_cast<Vertex>(rec[0]));
    smin[i] = rec[1];
    smax[i] = rec[2];
  }
  for (auto it = contracted_.top_down.rbegin(); it != contracted_.top_down.rend(); ++it) {
    if (*it == contracted_.top_down.front()) continue;
    auto p = fragment_index(contracted_.parent_fragment[*it]);
    smin[p] = std::min(smin[p], smin[*it]);
    smax[p] = std::max(smax[p], smax[*it]);
  }

  // 4. Downcast subtree extremes to fragment roots.
  std::vector<Record> down;
  for (std::size_t i = 0; i < count; ++i) down.push_back({frags.roots[i], smin[i], smax[i]});
  auto told = downcast(*net_, cast_->tree, three, std::move(down), config_, "low_high");
  stats += told.stats;
  std::vector<Record> mine(n);
  for (Vertex r : frags.roots)
    for (const auto& rec : told.received[r])
      if (rec[0] == r) mine[r] = {rec[1], rec[2]};

  // 5. Fragment roots hand their subtree extremes to the tree parent.
  auto handed = exchange(
      *net_, two,
      [&](Vertex v) {
        std::vector<PortRecord> out;
        if (frags.is_root(v) && v != root) out.push_back({*tree_overlay_.parent[v], mine[v]});
        return out;
      },
      config_, "low_high");
  stats += handed.stats;

  // 6. Final pass inside fragments with hanging fragments folded in.
  auto final_pass = convergecast(
      *net_, fragment_overlay_, two, own,
      [&](Vertex v, const Record& o, std::span<const ChildRecord> kids) {
        return min_max(o, kids, [&](Record& r) {
          for (const auto& h : handed.received[v]) {
            r[0] = std::min(r[0], h.record[0]);
            r[1] = std::max(r[1], h.record[1]);
          }
        });
      },
      config_, "low_high");
  stats += final_pass.stats;

  LowHigh out;
  out.stats = std::move(stats);
  out.low.resize(n);
  out.high.resize(n);
  for (Vertex v = 0; v < n; ++v) {
    out.low[v] = static_cast<std::uint32_t>(final_pass.subtree[v][0]);
    out.high[v] = static_cast<std::uint32_t>(final_pass.subtree[v][1]);
  }
  return out;
}

const RoundStats& TreeSession::low_high_cost() {
  if (!low_high_cost_) low_high_cost_ = compute_low_high(SampledSubgraph::empty(net_->graph())).stats;
  return *low_high_cost_;
}

Bridges TreeSession::find_bridges(const SampledSubgraph& sampled) {
  auto lh = compute_low_high(sampled);
  const auto& pre = preorder_->pre;
  const auto& size = preorder_->size;
  Bridges out;
  out.stats = std::move(lh.stats);
  out.bridge.assign(net_->size(), false);
  for (Vertex v = 0; v < net_->size(); ++v)
    if (v != tree_->root()) out.bridge[v] = bridge_above(pre[v], size[v], lh.low[v], lh.high[v]);
  return out;
}

// ---- one-shot helpers ------------------------------------------------------

Decomposition decompose(const Network& net, const RootedSpanningTree& tree, const NetworkConfig& config) {
  TreeSession s(net, tree, config);
  return s.decompose();
}

Preorder compute_preorder(const Network& net, const RootedSpanningTree& tree, const NetworkConfig& config) {
  TreeSession s(net, tree, config);
  RoundStats stats = s.cast_stats();
  stats += s.decompose().stats;
  Preorder out = s.compute_preorder();
  stats += out.stats;
  out.stats = std::move(stats);
  return out;
}

LowHigh compute_low_high(const Network& net, const RootedSpanningTree& tree, const SampledSubgraph& sampled,
                         const NetworkConfig& config) {
  TreeSession s(net, tree, config);
  RoundStats stats = s.cast_stats();
  stats += s.decompose().stats;
  stats += s.compute_preorder().stats;
  LowHigh out = s.compute_low_high(sampled);
  stats += out.stats;
  out.stats = std::move(stats);
  return out;
}

Bridges find_bridges(const Network& net, const RootedSpanningTree& tree, const SampledSubgraph& sampled,
                     const NetworkConfig& config) {
  TreeSession s(net, tree, config);
  RoundStats stats = s.cast_stats();
  stats += s.decompose().stats;
  stats += s.compute_preorder().stats;
  Bridges out = s.find_bridges(sampled);
  stats += out.stats;
  out.stats = std::move(stats);
  return out;
}

}  // namespace dmc::tree
