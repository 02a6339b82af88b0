#include "dmc/congest.hpp"

#include <algorithm>
#include <bit>

namespace dmc::congest {

int bits_for(std::uint64_t count) noexcept {
  if (count <= 2) return 1;
  return std::bit_width(count - 1);
}

Message::Message(unsigned tag) : tag_(tag) {
  if (tag >= (1u << kTagBits)) throw EncodingError("message tag " + std::to_string(tag) + " needs more than 4 bits");
}

Message& Message::add(std::uint64_t value, int width) {
  if (count_ == kMaxFields) throw EncodingError("too many fields in one message");
  if (width < 1 || width > 64) throw EncodingError("field width must lie in [1,64]");
  if (width < 64 && (value >> width) != 0)
    throw EncodingError("value " + std::to_string(value) + " does not fit in " + std::to_string(width) + " bits");
  fields_[count_++] = {value, width};
  return *this;
}

bool operator==(const Message& a, const Message& b) noexcept {
  if (a.tag_ != b.tag_ || a.count_ != b.count_) return false;
  for (std::size_t i = 0; i < a.count_; ++i)
    if (a.fields_[i].value != b.fields_[i].value || a.fields_[i].width != b.fields_[i].width) return false;
  return true;
}

int message_size(const Message& m) noexcept {
  int bits = kTagBits;
  for (const auto& f : m.fields()) bits += f.width;
  return bits;
}

int message_size(const std::optional<Message>& m) noexcept { return m ? message_size(*m) : 0; }

int NetworkConfig::default_bits(std::size_t n) noexcept {
  return 4 * std::max(2, bits_for(std::max<std::size_t>(n, 1)));
}

NetworkConfig NetworkConfig::defaults_for(std::size_t n) {
  NetworkConfig c;
  c.bits_per_message = default_bits(n);
  return c;
}

void NetworkConfig::validate(std::size_t n) const {
  const int floor = bits_for(std::max<std::size_t>(n, 1)) + 2;
  if (bits_per_message < floor)
    throw ValidationError("bits per message B=" + std::to_string(bits_per_message) + " is below ceil(log2 n)+2=" +
                          std::to_string(floor));
  if (round_limit <= 0) throw ValidationError("round limit must be positive");
}

RoundStats& RoundStats::operator+=(const RoundStats& other) {
  rounds += other.rounds;
  max_bits = std::max(max_bits, other.max_bits);
  messages += other.messages;
  for (const auto& [label, r] : other.phases) {
    auto it = std::find_if(phases.begin(), phases.end(), [&](const auto& p) { return p.first == label; });
    if (it == phases.end())
      phases.emplace_back(label, r);
    else
      it->second += r;
  }
  return *this;
}

void RoundStats::charge(const std::string& phase, std::int64_t r) {
  RoundStats extra;
  extra.rounds = r;
  extra.phases = {{phase, r}};
  *this += extra;
}

std::int64_t RoundStats::phase_rounds(const std::string& phase) const {
  for (const auto& [label, r] : phases)
    if (label == phase) return r;
  return 0;
}

Network::Network(const WeightedMultigraph& g) : graph_(&g), id_bits_(bits_for(g.vertex_count())) {
  const std::size_t n = g.vertex_count();
  offset_.assign(n + 1, 0);
  for (Vertex v = 0; v < n; ++v) offset_[v + 1] = offset_[v] + g.incident(v).size();
  reverse_.resize(offset_.back());
  for (Vertex v = 0; v < n; ++v) {
    auto inc = g.incident(v);
    for (Port p = 0; p < inc.size(); ++p) {
      const Vertex w = g.other(inc[p], v);
      reverse_[offset_[v] + p] = *port_to(w, v);
    }
  }
}

std::optional<Port> Network::port_to(Vertex v, Vertex w) const {
  auto inc = graph_->incident(v);
  auto it = std::lower_bound(inc.begin(), inc.end(), w,
                             [&](EdgeId e, Vertex target) { return graph_->other(e, v) < target; });
  if (it == inc.end() || graph_->other(*it, v) != w) return std::nullopt;
  return static_cast<Port>(it - inc.begin());
}

void NodeContext::send(Port p, const Message& m) {
  if (p >= degree()) throw EncodingError("vertex " + std::to_string(v_) + " has no port " + std::to_string(p));
  const int bits = message_size(m);
  if (bits > budget_) {
    throw BudgetViolation("vertex " + std::to_string(v_) + " sent " + std::to_string(bits) + " bits to " +
                              std::to_string(neighbor(p)) + " in round " + std::to_string(round_) + " (B=" +
                              std::to_string(budget_) + ")",
                          v_, round_, neighbor(p), bits, budget_);
  }
  auto& slot = (*outbox_)[net_->slot(v_, p)];
  if (slot) {
    throw BudgetViolation("vertex " + std::to_string(v_) + " sent two messages to " + std::to_string(neighbor(p)) +
                              " in round " + std::to_string(round_),
                          v_, round_, neighbor(p), bits + message_size(slot), budget_);
  }
  slot = m;
  ++stats_->messages;
  stats_->max_bits = std::max(stats_->max_bits, bits);
}

void NodeContext::send_all(const Message& m) {
  for (Port p = 0; p < degree(); ++p) send(p, m);
}

}  // namespace dmc::congest
