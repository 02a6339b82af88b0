#include "dmc/mst.hpp"

#include <algorithm>
#include <tuple>

namespace dmc::mst {

using congest::bits_for;
using congest::Message;
using congest::NodeContext;
using congest::Port;
using tree::ChildRecord;
using tree::Overlay;
using tree::PortRecord;
using tree::Record;
using tree::RecordLayout;

namespace {

constexpr unsigned kFlood = 5;

struct FloodResult {
  std::vector<Vertex> fid;
  Overlay overlay;
  RoundStats stats;
};

/// Every leader sends its id down the tree edges it knows; each vertex
/// adopts the first id it hears and the port it came from as parent.
FloodResult flood(const Network& net, const std::vector<std::vector<Port>>& tree_ports,
                  const std::vector<char>& leader, const NetworkConfig& config) {
  struct State {
    Vertex fid = 0;
    std::optional<Port> parent;
    tree::RecordAssembler assembler;
    std::vector<Message> chunks;
    std::size_t sent = 0;
  };
  const int budget = config.bits_per_message;
  const RecordLayout layout{{net.id_bits()}};
  std::vector<State> init(net.size());
  for (auto& s : init) s.assembler = tree::RecordAssembler(&layout, budget);
  auto program = [&](State& s, NodeContext& ctx) {
    const Vertex v = ctx.vertex();
    if (s.chunks.empty()) {
      if (leader[v]) {
        s.fid = v;
      } else {
        std::optional<Record> got;
        for (Port p : tree_ports[v])
          if (const auto& m = ctx.inbox(p)) {
            s.parent = p;
            got = s.assembler.push(*m);
            break;
          }
        if (!got) return;
        s.fid = static_cast<Vertex>((*got)[0]);
      }
      s.chunks = tree::encode_record(kFlood, layout, Record{s.fid}, budget);
    }
    if (s.sent == s.chunks.size()) {
      ctx.halt();
      return;
    }
    for (Port p : tree_ports[v])
      if (p != s.parent) ctx.send(p, s.chunks[s.sent]);
    ++s.sent;
  };
  auto res = congest::run(net, std::move(init), program, config, "mst");
  FloodResult out;
  out.stats = std::move(res.stats);
  out.overlay.parent.resize(net.size());
  out.overlay.children.resize(net.size());
  for (Vertex v = 0; v < net.size(); ++v) {
    out.fid.push_back(res.states[v].fid);
    out.overlay.parent[v] = res.states[v].parent;
    for (Port p : tree_ports[v])
      if (p != res.states[v].parent) out.overlay.children[v].push_back(p);
  }
  return out;
}

bool spans(const WeightedMultigraph& g, const EdgeLoad& loads) {
  SampledSubgraph h(g, {loads.multiplicities().begin(), loads.multiplicities().end()});
  return h.connected();
}

}  // namespace

MstResult distributed_mst(const Network& net, const EdgeLoad& loads, const NetworkConfig& config) {
  const auto& g = net.graph();
  const std::size_t n = net.size();
  if (loads.edge_count() != g.edge_count()) throw ValidationError("loads must cover every edge of the graph");
  if (!spans(g, loads)) throw DisconnectedError("the packed multigraph is disconnected");
  config.validate(n);

  const int idb = net.id_bits();
  // Width of the load field, agreed on by all vertices before the run.
  const int load_bits = bits_for(loads.max_load() + 1);
  auto present = [&](Vertex v, Port p) { return loads.multiplicity(net.edge(v, p)) > 0; };

  std::vector<Vertex> fid(n);
  for (Vertex v = 0; v < n; ++v) fid[v] = v;
  Overlay overlay;
  overlay.parent.assign(n, std::nullopt);
  overlay.children.assign(n, {});
  std::vector<std::vector<Port>> tree_ports(n);
  RoundStats stats;
  int phases = 0;

  RecordLayout id_layout{{idb}};
  RecordLayout key_layout{{1, load_bits, idb, idb}};
  RecordLayout choice_layout{{1, idb, idb}};
  RecordLayout flag_layout{{1}};
  using Key = std::tuple<std::uint64_t, std::uint64_t, std::uint64_t>;

  while (n > 1) {
    // Learn the fragment of every neighbor over present edges.
    auto ids = tree::exchange(
        net, id_layout,
        [&](Vertex v) {
          std::vector<PortRecord> out;
          for (Port p = 0; p < net.degree(v); ++p)
            if (present(v, p)) out.push_back({p, Record{fid[v]}});
          return out;
        },
        config, "mst");
    stats += ids.stats;

    // Lightest outgoing edge of each fragment, gathered at its leader.
    std::vector<Record> own(n, Record{0, 0, 0, 0});
    for (Vertex v = 0; v < n; ++v) {
      for (const auto& [p, rec] : ids.received[v]) {
        if (rec[0] == fid[v]) continue;
        const Vertex w = net.neighbor(v, p);
        Record cand{1, loads.min_load(net.edge(v, p)), std::min(v, w), std::max(v, w)};
        if (own[v][0] == 0 || Key{cand[1], cand[2], cand[3]} < Key{own[v][1], own[v][2], own[v][3]}) own[v] = cand;
      }
    }
    auto best = tree::convergecast(
        net, overlay, key_layout, own,
        [](Vertex, const Record& mine, std::span<const ChildRecord> kids) {
          Record r = mine;
          for (const auto& k : kids) {
            if (k.record[0] == 0) continue;
            if (r[0] == 0 || Key{k.record[1], k.record[2], k.record[3]} < Key{r[1], r[2], r[3]}) r = k.record;
          }
          return r;
        },
        config, "mst");
    stats += best.stats;

    std::vector<std::optional<Record>> seeds(n);
    bool any_done = false;
    std::size_t fragments = 0;
    for (Vertex v = 0; v < n; ++v)
      if (overlay.is_root(v)) {
        ++fragments;
        const auto& r = best.subtree[v];
        seeds[v] = Record{r[0], r[2], r[3]};
        any_done = any_done || r[0] == 0;
      }
    if (any_done) {
      if (fragments > 1) throw DisconnectedError("the packed multigraph is disconnected");
      break;
    }
    ++phases;
    auto told = tree::broadcast(
        net, overlay, choice_layout, seeds,
        [](Vertex, const Record& mine, std::span<const Port> kids) { return std::vector<Record>(kids.size(), mine); },
        config, "mst");
    stats += told.stats;

    // The endpoint inside the fragment claims the chosen edge.
    std::vector<std::optional<Port>> claimed(n);
    for (Vertex v = 0; v < n; ++v) {
      const auto& c = told.value[v];
      if (c[1] != v && c[2] != v) continue;
      const Vertex other = static_cast<Vertex>(c[1] == v ? c[2] : c[1]);
      claimed[v] = net.port_to(v, other);
    }
    auto merged = tree::exchange(
        net, flag_layout,
        [&](Vertex v) {
          std::vector<PortRecord> out;
          if (claimed[v]) out.push_back({*claimed[v], Record{1}});
          return out;
        },
        config, "mst");
    stats += merged.stats;

    std::vector<char> leader(n, 0);
    for (Vertex v = 0; v < n; ++v) {
      auto add = [&](Port p) {
        if (std::find(tree_ports[v].begin(), tree_ports[v].end(), p) == tree_ports[v].end()) tree_ports[v].push_back(p);
      };
      if (claimed[v]) add(*claimed[v]);
      for (const auto& pr : merged.received[v]) {
        add(pr.port);
        // Both sides chose this edge: the smaller endpoint leads the merge.
        if (claimed[v] == pr.port && v < net.neighbor(v, pr.port)) leader[v] = 1;
      }
      std::sort(tree_ports[v].begin(), tree_ports[v].end());
    }
    auto f = flood(net, tree_ports, leader, config);
    stats += f.stats;
    fid = std::move(f.fid);
    overlay = std::move(f.overlay);
  }

  // Orient the finished tree away from vertex 0.
  std::vector<char> zero(n, 0);
  zero[0] = 1;
  auto oriented = flood(net, tree_ports, zero, config);
  stats += oriented.stats;

  std::vector<Vertex> parent(n, 0);
  std::vector<EdgeId> parent_edge(n, 0);
  std::uint64_t total = 0;
  for (Vertex v = 1; v < n; ++v) {
    const Port p = *oriented.overlay.parent[v];
    parent[v] = net.neighbor(v, p);
    parent_edge[v] = net.edge(v, p);
    total += loads.min_load(parent_edge[v]);
  }
  return {RootedSpanningTree(0, std::move(parent)), std::move(parent_edge), total, phases, std::move(stats)};
}

PackingResult greedy_tree_packing(const Network& net, std::span<const Weight> multiplicity, std::size_t count,
                                  const NetworkConfig& config) {
  if (count == 0) throw ValidationError("a tree packing needs at least one tree");
  PackingResult out{{{}, EdgeLoad({multiplicity.begin(), multiplicity.end()})}, {}};
  for (std::size_t i = 0; i < count; ++i) {
    auto t = distributed_mst(net, out.packing.loads, config);
    for (Vertex v = 1; v < net.size(); ++v) out.packing.loads.use(t.parent_edge[v]);
    out.packing.trees.push_back(std::move(t.tree));
    out.stats += t.stats;
  }
  return out;
}

}  // namespace dmc::mst
