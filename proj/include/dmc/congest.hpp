#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dmc/errors.hpp"
#include "dmc/graph.hpp"
#include "dmc/rng.hpp"

namespace dmc::congest {

using Port = std::uint32_t;

inline constexpr int kTagBits = 4;
inline constexpr std::size_t kMaxFields = 4;

/// Bits needed to write any value in [0, count): ceil(log2 count), at least 1.
int bits_for(std::uint64_t count) noexcept;

/// Canonical message: a 4-bit tag followed by fixed-width unsigned fields.
class Message {
 public:
  struct Field {
    std::uint64_t value = 0;
    int width = 0;
  };

  explicit Message(unsigned tag);

  /// Appends a field; throws EncodingError when `value` needs more than `width` bits.
  Message& add(std::uint64_t value, int width);

  [[nodiscard]] unsigned tag() const noexcept { return tag_; }
  [[nodiscard]] std::span<const Field> fields() const noexcept { return {fields_.data(), count_}; }
  [[nodiscard]] std::uint64_t field(std::size_t i) const {
    if (i >= count_) throw std::out_of_range("message field index");
    return fields_[i].value;
  }

  friend bool operator==(const Message& a, const Message& b) noexcept;

 private:
  std::array<Field, kMaxFields> fields_{};
  std::size_t count_ = 0;
  unsigned tag_;
};

class EncodingError : public Error {
 public:
  using Error::Error;
  [[nodiscard]] const char* kind() const noexcept override { return "encoding"; }
};

/// Serialized length in bits: tag plus field widths.  An absent message is 0.
int message_size(const Message& m) noexcept;
int message_size(const std::optional<Message>& m) noexcept;

struct NetworkConfig {
  /// Budget per neighbor pair, per direction, per round.
  int bits_per_message = 0;
  std::int64_t round_limit = 1'000'000;
  std::uint64_t seed = 0;

  /// B = 4 * max(2, ceil(log2 n)).
  static NetworkConfig defaults_for(std::size_t n);
  static int default_bits(std::size_t n) noexcept;
  /// Throws ValidationError unless B >= ceil(log2 n) + 2 and round_limit > 0.
  void validate(std::size_t n) const;
};

struct RoundStats {
  std::int64_t rounds = 0;
  int max_bits = 0;
  std::int64_t messages = 0;
  /// Rounds per phase label, in first-seen order.
  std::vector<std::pair<std::string, std::int64_t>> phases;

  /// Sequential composition: rounds and messages add, bit maxima combine.
  RoundStats& operator+=(const RoundStats& other);
  /// Adds `rounds` under `phase` without any traffic.
  void charge(const std::string& phase, std::int64_t rounds);
  [[nodiscard]] std::int64_t phase_rounds(const std::string& phase) const;
};

class BudgetViolation : public Error {
 public:
  BudgetViolation(const std::string& what, Vertex node, std::int64_t round, Vertex neighbor, int bits, int budget)
      : Error(what), node(node), round(round), neighbor(neighbor), bits(bits), budget(budget) {}
  [[nodiscard]] int exit_code() const noexcept override { return 3; }
  [[nodiscard]] const char* kind() const noexcept override { return "budget"; }

  Vertex node;
  std::int64_t round;
  Vertex neighbor;
  int bits;
  int budget;
};

class RoundLimitExceeded : public Error {
 public:
  RoundLimitExceeded(const std::string& what, RoundStats stats) : Error(what), stats(std::move(stats)) {}
  [[nodiscard]] int exit_code() const noexcept override { return 4; }
  [[nodiscard]] const char* kind() const noexcept override { return "round_limit"; }

  RoundStats stats;
};

/// Communication topology: one logical channel per neighbor pair of the
/// graph.  Ports of a vertex are ordered by neighbor id, so port p of v is
/// the p-th entry of graph.incident(v).
class Network {
 public:
  explicit Network(const WeightedMultigraph& g);

  [[nodiscard]] const WeightedMultigraph& graph() const noexcept { return *graph_; }
  [[nodiscard]] std::size_t size() const noexcept { return graph_->vertex_count(); }
  [[nodiscard]] std::size_t degree(Vertex v) const { return graph_->incident(v).size(); }
  [[nodiscard]] Vertex neighbor(Vertex v, Port p) const { return graph_->other(edge(v, p), v); }
  [[nodiscard]] EdgeId edge(Vertex v, Port p) const { return graph_->incident(v)[p]; }
  /// The port at neighbor(v, p) leading back to v.
  [[nodiscard]] Port reverse(Vertex v, Port p) const { return reverse_[offset_[v] + p]; }
  [[nodiscard]] std::optional<Port> port_to(Vertex v, Vertex w) const;
  /// Index of the (v, p) slot in a flat per-port array.
  [[nodiscard]] std::size_t slot(Vertex v, Port p) const { return offset_[v] + p; }
  [[nodiscard]] std::size_t slot_count() const noexcept { return offset_.back(); }
  [[nodiscard]] int id_bits() const noexcept { return id_bits_; }

 private:
  const WeightedMultigraph* graph_;
  std::vector<std::size_t> offset_;
  std::vector<Port> reverse_;
  int id_bits_;
};

/// What a node sees during one step: its own id, the round number, its
/// inbox and its private randomness.  Nothing global.
class NodeContext {
 public:
  [[nodiscard]] Vertex vertex() const noexcept { return v_; }
  [[nodiscard]] std::int64_t round() const noexcept { return round_; }
  [[nodiscard]] std::size_t degree() const { return net_->degree(v_); }
  [[nodiscard]] Vertex neighbor(Port p) const { return net_->neighbor(v_, p); }
  [[nodiscard]] EdgeId edge(Port p) const { return net_->edge(v_, p); }
  [[nodiscard]] std::optional<Port> port_to(Vertex w) const { return net_->port_to(v_, w); }
  [[nodiscard]] int id_bits() const noexcept { return net_->id_bits(); }
  [[nodiscard]] std::size_t network_size() const noexcept { return net_->size(); }
  [[nodiscard]] int budget() const noexcept { return budget_; }

  /// Message that arrived on port p this round (sent by the neighbor last round).
  [[nodiscard]] const std::optional<Message>& inbox(Port p) const { return (*inbox_)[net_->slot(v_, p)]; }

  /// Queues m on port p for delivery next round.  At most one message per
  /// port per round, each within the bit budget; violations throw
  /// BudgetViolation immediately.
  void send(Port p, const Message& m);
  /// Sends m on every port.
  void send_all(const Message& m);
  /// Stops stepping this node.  Messages later addressed to it are dropped.
  void halt() noexcept { halted_ = true; }
  [[nodiscard]] SplitMix64& rng() noexcept { return *rng_; }

 private:
  template <class State, class Program>
  friend class Engine;

  const Network* net_ = nullptr;
  Vertex v_ = 0;
  std::int64_t round_ = 0;
  int budget_ = 0;
  const std::vector<std::optional<Message>>* inbox_ = nullptr;
  std::vector<std::optional<Message>>* outbox_ = nullptr;
  SplitMix64* rng_ = nullptr;
  bool halted_ = false;
  RoundStats* stats_ = nullptr;
};

template <class State>
struct RunResult {
  std::vector<State> states;
  RoundStats stats;
};

/// Synchronous round engine.  Round 0 lets every node initialize and send;
/// in round r >= 1 a node reads what its neighbors sent in round r-1.
/// The run ends once every node has halted; `rounds` is the last round in
/// which any node was stepped.
template <class State, class Program>
class Engine {
 public:
  Engine(const Network& net, const NetworkConfig& config, Program& program)
      : net_(net), config_(config), program_(program) {}

  RunResult<State> operator()(std::vector<State> states, const std::string& phase) {
    const std::size_t n = net_.size();
    if (states.size() != n) throw ValidationError("one initial state per vertex required");
    config_.validate(n);
    std::vector<std::optional<Message>> inbox(net_.slot_count()), outbox(net_.slot_count());
    std::vector<char> halted(n, 0);
    std::vector<SplitMix64> rngs;
    rngs.reserve(n);
    SplitMix64 root(config_.seed);
    for (Vertex v = 0; v < n; ++v) rngs.push_back(root.derive(v));

    RoundStats stats;
    std::size_t live = n;
    for (std::int64_t round = 0; live > 0; ++round) {
      if (round > config_.round_limit) {
        stats.phases = {{phase, stats.rounds}};
        throw RoundLimitExceeded("phase '" + phase + "' exceeded the round limit of " +
                                     std::to_string(config_.round_limit),
                                 stats);
      }
      for (Vertex v = 0; v < n; ++v) {
        if (halted[v]) continue;
        NodeContext ctx;
        ctx.net_ = &net_;
        ctx.v_ = v;
        ctx.round_ = round;
        ctx.budget_ = config_.bits_per_message;
        ctx.inbox_ = &inbox;
        ctx.outbox_ = &outbox;
        ctx.rng_ = &rngs[v];
        ctx.stats_ = &stats;
        program_(states[v], ctx);
        if (ctx.halted_) {
          halted[v] = 1;
          --live;
        }
      }
      stats.rounds = round;
      std::fill(inbox.begin(), inbox.end(), std::nullopt);
      for (Vertex v = 0; v < n; ++v) {
        for (Port p = 0; p < net_.degree(v); ++p) {
          auto& out = outbox[net_.slot(v, p)];
          if (!out) continue;
          const Vertex w = net_.neighbor(v, p);
          if (!halted[w]) inbox[net_.slot(w, net_.reverse(v, p))] = std::move(out);
          out.reset();
        }
      }
    }
    stats.phases = {{phase, stats.rounds}};
    return {std::move(states), std::move(stats)};
  }

 private:
  const Network& net_;
  NetworkConfig config_;
  Program& program_;
};

/// Runs `program(State&, NodeContext&)` on every vertex until all halt.
template <class State, class Program>
RunResult<State> run(const Network& net, std::vector<State> initial, Program&& program, const NetworkConfig& config,
                     const std::string& phase = "run") {
  Engine<State, std::remove_reference_t<Program>> engine(net, config, program);
  return engine(std::move(initial), phase);
}

}  // namespace dmc::congest
