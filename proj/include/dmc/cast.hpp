#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dmc/congest.hpp"

namespace dmc::tree {

using congest::Message;
using congest::Network;
using congest::NetworkConfig;
using congest::Port;
using congest::RoundStats;

/// Oriented forest laid over network channels.  Each vertex knows only
/// its own parent port and child ports (children ordered by neighbor id).
struct Overlay {
  std::vector<std::optional<Port>> parent;
  std::vector<std::vector<Port>> children;

  /// `parent_vertex[v]` is v's parent, or nullopt for a root.  Every
  /// parent must be a network neighbor.
  static Overlay from_parents(const Network& net, std::span<const std::optional<Vertex>> parent_vertex);
  [[nodiscard]] bool is_root(Vertex v) const { return !parent[v].has_value(); }
};

/// A record is a fixed sequence of unsigned fields of known widths.  It
/// travels as one or more consecutive messages, each carrying at most
/// B - 4 payload bits, so any record fits any budget by pipelining.
using Record = std::vector<std::uint64_t>;

struct RecordLayout {
  std::vector<int> widths;

  [[nodiscard]] int total_bits() const;
  /// Messages needed per record under budget B.
  [[nodiscard]] int chunks(int budget) const;
};

std::vector<Message> encode_record(unsigned tag, const RecordLayout& layout, const Record& record, int budget);
Record decode_record(const RecordLayout& layout, std::span<const Message> chunks);

/// Reassembles records from a stream of chunk messages on one port.
class RecordAssembler {
 public:
  RecordAssembler() = default;
  RecordAssembler(const RecordLayout* layout, int budget) : layout_(layout), need_(layout->chunks(budget)) {}
  /// Returns a finished record once its last chunk arrives.
  std::optional<Record> push(const Message& m);

 private:
  const RecordLayout* layout_ = nullptr;
  int need_ = 1;
  std::vector<Message> pending_;
};

// ---- tree protocols --------------------------------------------------------

struct ChildRecord {
  Port port;
  Record record;
};

/// Combines a vertex's own record with its children's aggregates.
using Combine = std::function<Record(Vertex, const Record& own, std::span<const ChildRecord> children)>;

struct ConvergecastResult {
  /// Aggregate of each vertex's overlay subtree.
  std::vector<Record> subtree;
  /// What each vertex received, one entry per child port in port order.
  std::vector<std::vector<ChildRecord>> from_children;
  RoundStats stats;
};

/// Bottom-up aggregation over every tree of the overlay in parallel.  A
/// vertex forwards once all children have reported.
ConvergecastResult convergecast(const Network& net, const Overlay& overlay, const RecordLayout& layout,
                                std::vector<Record> own, const Combine& combine, const NetworkConfig& config,
                                const std::string& phase);

/// Given the record a vertex holds, produce one record per child port.
using Split = std::function<std::vector<Record>(Vertex, const Record& mine, std::span<const Port> children)>;

struct BroadcastResult {
  /// Record held by each vertex (the root's seed, or what its parent sent).
  std::vector<Record> value;
  RoundStats stats;
};

/// Top-down wave over every tree of the overlay; `seed[r]` must be set for
/// each root r.
BroadcastResult broadcast(const Network& net, const Overlay& overlay, const RecordLayout& layout,
                          std::vector<std::optional<Record>> seed, const Split& split, const NetworkConfig& config,
                          const std::string& phase);

struct UpcastResult {
  std::vector<Record> at_root;
  RoundStats stats;
};

/// Pipelined convergecast of individual records to the single root of
/// `overlay`.  Each channel carries one message per round; records are
/// forwarded whole so chunks from different senders never interleave.
UpcastResult upcast(const Network& net, const Overlay& overlay, const RecordLayout& layout,
                    std::vector<std::vector<Record>> records, const NetworkConfig& config, const std::string& phase);

struct DowncastResult {
  /// Every vertex ends with the root's full list, in order.
  std::vector<std::vector<Record>> received;
  RoundStats stats;
};

/// Pipelined broadcast of a list of records from the root of `overlay`.
DowncastResult downcast(const Network& net, const Overlay& overlay, const RecordLayout& layout,
                        std::vector<Record> at_root, const NetworkConfig& config, const std::string& phase);

struct PortRecord {
  Port port;
  Record record;
};

struct ExchangeResult {
  std::vector<std::vector<PortRecord>> received;
  RoundStats stats;
};

/// One neighbor exchange: each vertex sends the records `outgoing(v)`
/// chooses (at most one per port), all in parallel.
ExchangeResult exchange(const Network& net, const RecordLayout& layout,
                        const std::function<std::vector<PortRecord>(Vertex)>& outgoing, const NetworkConfig& config,
                        const std::string& phase);

/// Distributed BFS from `root`; returns the BFS tree as an overlay whose
/// parent choice is the smallest-id neighbor one hop closer to the root.
struct BfsResult {
  Overlay tree;
  std::vector<std::size_t> depth;
  RoundStats stats;
};
BfsResult bfs_tree(const Network& net, Vertex root, const NetworkConfig& config);

}  // namespace dmc::tree
