#include "dmc/cast.hpp"

#include <algorithm>
#include <deque>
#include <numeric>

namespace dmc::tree {

using congest::NodeContext;

namespace {

constexpr unsigned kData = 1;
constexpr unsigned kEnd = 2;
constexpr unsigned kJoin = 3;
constexpr unsigned kAck = 4;

int payload_bits(int budget) { return std::min(budget - congest::kTagBits, 64 * static_cast<int>(congest::kMaxFields)); }

}  // namespace

Overlay Overlay::from_parents(const Network& net, std::span<const std::optional<Vertex>> parent_vertex) {
  const std::size_t n = net.size();
  if (parent_vertex.size() != n) throw ValidationError("overlay needs one parent entry per vertex");
  Overlay o;
  o.parent.assign(n, std::nullopt);
  o.children.assign(n, {});
  for (Vertex v = 0; v < n; ++v) {
    if (!parent_vertex[v]) continue;
    auto up = net.port_to(v, *parent_vertex[v]);
    auto down = net.port_to(*parent_vertex[v], v);
    if (!up || !down) throw ValidationError("overlay edge is not a network channel");
    o.parent[v] = *up;
    o.children[*parent_vertex[v]].push_back(*down);
  }
  for (auto& c : o.children) std::sort(c.begin(), c.end());
  return o;
}

// ---- records ---------------------------------------------------------------

int RecordLayout::total_bits() const { return std::accumulate(widths.begin(), widths.end(), 0); }

int RecordLayout::chunks(int budget) const {
  const int cap = payload_bits(budget);
  if (cap <= 0) throw congest::EncodingError("budget leaves no room for payload");
  return std::max(1, (total_bits() + cap - 1) / cap);
}

std::vector<Message> encode_record(unsigned tag, const RecordLayout& layout, const Record& record, int budget) {
  if (record.size() != layout.widths.size()) throw congest::EncodingError("record does not match its layout");
  std::vector<bool> bits;
  bits.reserve(static_cast<std::size_t>(layout.total_bits()));
  for (std::size_t i = 0; i < record.size(); ++i) {
    const int w = layout.widths[i];
    if (w < 64 && (record[i] >> w) != 0)
      throw congest::EncodingError("record field " + std::to_string(i) + " value " + std::to_string(record[i]) +
                                   " exceeds " + std::to_string(w) + " bits");
    for (int b = 0; b < w; ++b) bits.push_back(((record[i] >> b) & 1u) != 0);
  }
  const int cap = payload_bits(budget);
  const int count = layout.chunks(budget);
  std::vector<Message> out;
  out.reserve(static_cast<std::size_t>(count));
  std::size_t pos = 0;
  for (int c = 0; c < count; ++c) {
    Message m(tag);
    std::size_t end = std::min(bits.size(), pos + static_cast<std::size_t>(cap));
    while (pos < end) {
      const std::size_t w = std::min<std::size_t>(64, end - pos);
      std::uint64_t value = 0;
      for (std::size_t b = 0; b < w; ++b)
        if (bits[pos + b]) value |= std::uint64_t{1} << b;
      m.add(value, static_cast<int>(w));
      pos += w;
    }
    out.push_back(m);
  }
  return out;
}

Record decode_record(const RecordLayout& layout, std::span<const Message> chunks) {
  std::vector<bool> bits;
  for (const auto& m : chunks)
    for (const auto& f : m.fields())
      for (int b = 0; b < f.width; ++b) bits.push_back(((f.value >> b) & 1u) != 0);
  if (static_cast<int>(bits.size()) != layout.total_bits())
    throw congest::EncodingError("chunk payload does not match the record layout");
  Record r;
  r.reserve(layout.widths.size());
  std::size_t pos = 0;
  for (int w : layout.widths) {
    std::uint64_t value = 0;
    for (int b = 0; b < w; ++b)
      if (bits[pos + static_cast<std::size_t>(b)]) value |= std::uint64_t{1} << b;
    r.push_back(value);
    pos += static_cast<std::size_t>(w);
  }
  return r;
}

std::optional<Record> RecordAssembler::push(const Message& m) {
  pending_.push_back(m);
  if (static_cast<int>(pending_.size()) < need_) return std::nullopt;
  Record r = decode_record(*layout_, pending_);
  pending_.clear();
  return r;
}

// ---- convergecast ----------------------------------------------------------

ConvergecastResult convergecast(const Network& net, const Overlay& overlay, const RecordLayout& layout,
                                std::vector<Record> own, const Combine& combine, const NetworkConfig& config,
                                const std::string& phase) {
  struct State {
    Record own;
    std::vector<RecordAssembler> assemblers;
    std::vector<ChildRecord> kids;
    std::deque<Message> queue;
    bool combined = false;
    Record result;
  };
  const int budget = config.bits_per_message;
  std::vector<State> init(net.size());
  for (Vertex v = 0; v < net.size(); ++v) {
    init[v].own = std::move(own.at(v));
    init[v].assemblers.assign(net.degree(v), RecordAssembler(&layout, budget));
  }
  auto program = [&](State& s, NodeContext& ctx) {
    const Vertex v = ctx.vertex();
    for (Port p : overlay.children[v]) {
      if (const auto& m = ctx.inbox(p)) {
        if (auto rec = s.assemblers[p].push(*m)) s.kids.push_back({p, std::move(*rec)});
      }
    }
    if (!s.combined && s.kids.size() == overlay.children[v].size()) {
      std::sort(s.kids.begin(), s.kids.end(), [](const ChildRecord& a, const ChildRecord& b) { return a.port < b.port; });
      s.result = combine(v, s.own, s.kids);
      s.combined = true;
      if (overlay.is_root(v)) {
        ctx.halt();
        return;
      }
      auto chunks = encode_record(kData, layout, s.result, budget);
      s.queue.assign(chunks.begin(), chunks.end());
    }
    if (s.combined && !s.queue.empty()) {
      ctx.send(*overlay.parent[v], s.queue.front());
      s.queue.pop_front();
      if (s.queue.empty()) ctx.halt();
    }
  };
  auto res = congest::run(net, std::move(init), program, config, phase);
  ConvergecastResult out;
  out.stats = std::move(res.stats);
  for (auto& s : res.states) {
    out.subtree.push_back(std::move(s.result));
    out.from_children.push_back(std::move(s.kids));
  }
  return out;
}

// ---- broadcast -------------------------------------------------------------

BroadcastResult broadcast(const Network& net, const Overlay& overlay, const RecordLayout& layout,
                          std::vector<std::optional<Record>> seed, const Split& split, const NetworkConfig& config,
                          const std::string& phase) {
  struct State {
    std::optional<Record> mine;
    RecordAssembler assembler;
    std::vector<std::deque<Message>> queues;
    bool split_done = false;
  };
  const int budget = config.bits_per_message;
  std::vector<State> init(net.size());
  for (Vertex v = 0; v < net.size(); ++v) {
    if (overlay.is_root(v) && !seed.at(v)) throw ValidationError("broadcast root without a seed record");
    init[v].mine = overlay.is_root(v) ? std::move(seed[v]) : std::nullopt;
    init[v].assembler = RecordAssembler(&layout, budget);
  }
  auto program = [&](State& s, NodeContext& ctx) {
    const Vertex v = ctx.vertex();
    if (!s.mine) {
      if (const auto& m = ctx.inbox(*overlay.parent[v])) s.mine = s.assembler.push(*m);
      if (!s.mine) return;
    }
    const auto& kids = overlay.children[v];
    if (!s.split_done) {
      auto records = split(v, *s.mine, kids);
      if (records.size() != kids.size()) throw ValidationError("split must give one record per child");
      for (const auto& r : records) {
        auto chunks = encode_record(kData, layout, r, budget);
        s.queues.emplace_back(chunks.begin(), chunks.end());
      }
      s.split_done = true;
    }
    bool pending = false;
    for (std::size_t i = 0; i < kids.size(); ++i) {
      if (s.queues[i].empty()) continue;
      ctx.send(kids[i], s.queues[i].front());
      s.queues[i].pop_front();
      pending = pending || !s.queues[i].empty();
    }
    if (!pending) ctx.halt();
  };
  auto res = congest::run(net, std::move(init), program, config, phase);
  BroadcastResult out;
  out.stats = std::move(res.stats);
  for (auto& s : res.states) out.value.push_back(s.mine ? std::move(*s.mine) : Record{});
  return out;
}

// ---- pipelined upcast / downcast -------------------------------------------

UpcastResult upcast(const Network& net, const Overlay& overlay, const RecordLayout& layout,
                    std::vector<std::vector<Record>> records, const NetworkConfig& config, const std::string& phase) {
  struct State {
    std::deque<Message> queue;
    std::vector<RecordAssembler> assemblers;
    std::size_t ended = 0;
    std::vector<Record> collected;
  };
  const int budget = config.bits_per_message;
  std::size_t roots = 0;
  std::vector<State> init(net.size());
  for (Vertex v = 0; v < net.size(); ++v) {
    init[v].assemblers.assign(net.degree(v), RecordAssembler(&layout, budget));
    if (overlay.is_root(v)) {
      ++roots;
      init[v].collected = std::move(records.at(v));
      continue;
    }
    for (const auto& r : records.at(v)) {
      auto chunks = encode_record(kData, layout, r, budget);
      init[v].queue.insert(init[v].queue.end(), chunks.begin(), chunks.end());
    }
  }
  if (roots != 1) throw ValidationError("upcast needs a single-rooted overlay");
  auto program = [&](State& s, NodeContext& ctx) {
    const Vertex v = ctx.vertex();
    const bool root = overlay.is_root(v);
    for (Port p : overlay.children[v]) {
      const auto& m = ctx.inbox(p);
      if (!m) continue;
      if (m->tag() == kEnd) {
        ++s.ended;
      } else if (auto rec = s.assemblers[p].push(*m)) {
        if (root) {
          s.collected.push_back(std::move(*rec));
        } else {
          auto chunks = encode_record(kData, layout, *rec, budget);
          s.queue.insert(s.queue.end(), chunks.begin(), chunks.end());
        }
      }
    }
    const bool children_done = s.ended == overlay.children[v].size();
    if (root) {
      if (children_done) ctx.halt();
      return;
    }
    if (!s.queue.empty()) {
      ctx.send(*overlay.parent[v], s.queue.front());
      s.queue.pop_front();
    } else if (children_done) {
      ctx.send(*overlay.parent[v], Message(kEnd));
      ctx.halt();
    }
  };
  auto res = congest::run(net, std::move(init), program, config, phase);
  UpcastResult out;
  out.stats = std::move(res.stats);
  for (Vertex v = 0; v < net.size(); ++v)
    if (overlay.is_root(v)) out.at_root = std::move(res.states[v].collected);
  return out;
}

DowncastResult downcast(const Network& net, const Overlay& overlay, const RecordLayout& layout,
                        std::vector<Record> at_root, const NetworkConfig& config, const std::string& phase) {
  struct State {
    std::deque<Message> queue;
    RecordAssembler assembler;
    std::vector<Record> received;
    bool ended = false;
  };
  const int budget = config.bits_per_message;
  std::size_t roots = 0;
  std::vector<State> init(net.size());
  for (Vertex v = 0; v < net.size(); ++v) {
    init[v].assembler = RecordAssembler(&layout, budget);
    if (!overlay.is_root(v)) continue;
    ++roots;
    for (const auto& r : at_root) {
      auto chunks = encode_record(kData, layout, r, budget);
      init[v].queue.insert(init[v].queue.end(), chunks.begin(), chunks.end());
    }
    init[v].queue.emplace_back(kEnd);
    init[v].received = at_root;
    init[v].ended = true;
  }
  if (roots != 1) throw ValidationError("downcast needs a single-rooted overlay");
  auto program = [&](State& s, NodeContext& ctx) {
    const Vertex v = ctx.vertex();
    const auto& kids = overlay.children[v];
    if (!overlay.is_root(v)) {
      if (const auto& m = ctx.inbox(*overlay.parent[v])) {
        if (!kids.empty()) s.queue.push_back(*m);
        if (m->tag() == kEnd) {
          s.ended = true;
        } else if (auto rec = s.assembler.push(*m)) {
          s.received.push_back(std::move(*rec));
        }
      }
    }
    if (!s.queue.empty()) {
      for (Port p : kids) ctx.send(p, s.queue.front());
      s.queue.pop_front();
    }
    if (s.ended && (s.queue.empty() || kids.empty())) ctx.halt();
  };
  auto res = congest::run(net, std::move(init), program, config, phase);
  DowncastResult out;
  out.stats = std::move(res.stats);
  for (auto& s : res.states) out.received.push_back(std::move(s.received));
  return out;
}

// ---- neighbor exchange -----------------------------------------------------

ExchangeResult exchange(const Network& net, const RecordLayout& layout,
                        const std::function<std::vector<PortRecord>(Vertex)>& outgoing, const NetworkConfig& config,
                        const std::string& phase) {
  struct State {
    std::vector<std::pair<Port, std::vector<Message>>> out;
    std::vector<RecordAssembler> assemblers;
    std::vector<PortRecord> received;
  };
  const int budget = config.bits_per_message;
  const int chunks = layout.chunks(budget);
  std::vector<State> init(net.size());
  for (Vertex v = 0; v < net.size(); ++v) {
    init[v].assemblers.assign(net.degree(v), RecordAssembler(&layout, budget));
    for (auto& pr : outgoing(v)) init[v].out.emplace_back(pr.port, encode_record(kData, layout, pr.record, budget));
  }
  auto program = [&](State& s, NodeContext& ctx) {
    const auto round = ctx.round();
    if (round >= 1) {
      for (Port p = 0; p < ctx.degree(); ++p) {
        if (const auto& m = ctx.inbox(p))
          if (auto rec = s.assemblers[p].push(*m)) s.received.push_back({p, std::move(*rec)});
      }
    }
    if (round < chunks) {
      for (const auto& [port, msgs] : s.out) ctx.send(port, msgs[static_cast<std::size_t>(round)]);
    } else {
      ctx.halt();
    }
  };
  auto res = congest::run(net, std::move(init), program, config, phase);
  ExchangeResult out;
  out.stats = std::move(res.stats);
  for (auto& s : res.states) out.received.push_back(std::move(s.received));
  return out;
}

// ---- BFS -------------------------------------------------------------------

BfsResult bfs_tree(const Network& net, Vertex root, const NetworkConfig& config) {
  struct State {
    bool joined = false;
    std::int64_t joined_round = 0;
    std::optional<Port> parent;
    std::vector<Port> children;
  };
  if (root >= net.size()) throw ValidationError("BFS root out of range");
  auto program = [&](State& s, NodeContext& ctx) {
    if (!s.joined) {
      std::optional<Port> from;
      if (ctx.vertex() != root) {
        for (Port p = 0; p < ctx.degree() && !from; ++p)
          if (const auto& m = ctx.inbox(p); m && m->tag() == kJoin) from = p;
        if (!from) return;
      }
      s.joined = true;
      s.joined_round = ctx.round();
      s.parent = from;
      for (Port p = 0; p < ctx.degree(); ++p) ctx.send(p, Message(p == from ? kAck : kJoin));
      return;
    }
    if (ctx.round() == s.joined_round + 2) {
      for (Port p = 0; p < ctx.degree(); ++p)
        if (const auto& m = ctx.inbox(p); m && m->tag() == kAck) s.children.push_back(p);
      ctx.halt();
    }
  };
  auto res = congest::run(net, std::vector<State>(net.size()), program, config, "bfs");
  BfsResult out;
  out.stats = std::move(res.stats);
  for (auto& s : res.states) {
    out.tree.parent.push_back(s.parent);
    out.tree.children.push_back(std::move(s.children));
    out.depth.push_back(static_cast<std::size_t>(s.joined_round));
  }
  return out;
}

}  // namespace dmc::tree
