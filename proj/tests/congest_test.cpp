#include "dmc/congest.hpp"
#include "gtest/gtest.h"

namespace dmc::congest {
namespace {

struct Flood {
  bool informed = false;
};

// Source 0 floods a single bit; everyone halts after forwarding.
RunResult<Flood> flood_one_bit(const WeightedMultigraph& g, const NetworkConfig& cfg) {
  Network net(g);
  return run(
      net, std::vector<Flood>(g.vertex_count()),
      [](Flood& s, NodeContext& ctx) {
        bool got = ctx.vertex() == 0 && ctx.round() == 0;
        for (Port p = 0; p < ctx.degree(); ++p) got = got || ctx.inbox(p).has_value();
        if (!got) return;
        s.informed = true;
        ctx.send_all(Message(1).add(1, 1));
        ctx.halt();
      },
      cfg, "flood");
}

TEST(MessageSize, Encoding) {
  EXPECT_EQ(bits_for(64), 6);
  EXPECT_EQ(message_size(Message(3).add(63, bits_for(64))), 6 + kTagBits);
  EXPECT_EQ(message_size(Message(3).add(1, 6).add(2, 6)), 12 + kTagBits);
  EXPECT_EQ(message_size(std::optional<Message>{}), 0);
  EXPECT_THROW(Message(1).add(64, 6), EncodingError);
  EXPECT_THROW(Message(16), EncodingError);
}

TEST(Engine, FloodTakesEccentricityRounds) {
  auto g = clique_path(4, 5);
  auto res = flood_one_bit(g, NetworkConfig::defaults_for(g.vertex_count()));
  EXPECT_EQ(res.stats.rounds, static_cast<std::int64_t>(eccentricity(g, 0)));
  EXPECT_LE(res.stats.rounds, static_cast<std::int64_t>(diameter(g)));
  for (const auto& s : res.states) EXPECT_TRUE(s.informed);
  EXPECT_EQ(res.stats.phase_rounds("flood"), res.stats.rounds);
}

TEST(Engine, OversizedMessageViolatesBudget) {
  auto g = path_graph(64);
  NetworkConfig cfg;
  cfg.bits_per_message = bits_for(64) + 2;
  Network net(g);
  try {
    run(
        net, std::vector<int>(64, 0),
        [](int&, NodeContext& ctx) {
          if (ctx.vertex() == 5) ctx.send(0, Message(1).add(1, 6).add(2, 6).add(3, 6));
          ctx.halt();
        },
        cfg);
    FAIL() << "expected a budget violation";
  } catch (const BudgetViolation& e) {
    EXPECT_EQ(e.node, 5u);
    EXPECT_EQ(e.round, 0);
    EXPECT_EQ(e.neighbor, 4u);
    EXPECT_EQ(e.bits, 18 + kTagBits);
    EXPECT_EQ(e.budget, 8);
    EXPECT_EQ(e.exit_code(), 3);
  }
}

TEST(Engine, OneMessagePerChannelPerRound) {
  // Weight 3 between 0 and 1: still one channel.
  WeightedMultigraph g(2, {{0, 1, 3}});
  Network net(g);
  EXPECT_EQ(net.degree(0), 1u);
  EXPECT_THROW(run(
                   net, std::vector<int>(2, 0),
                   [](int&, NodeContext& ctx) {
                     ctx.send(0, Message(1));
                     ctx.send(0, Message(1));
                     ctx.halt();
                   },
                   NetworkConfig::defaults_for(2)),
               BudgetViolation);
}

TEST(Engine, PingRoundTripTakesTwoRounds) {
  auto g = path_graph(2);
  Network net(g);
  struct S {
    std::int64_t reply_round = -1;
  };
  auto res = run(
      net, std::vector<S>(2),
      [](S& s, NodeContext& ctx) {
        if (ctx.vertex() == 0) {
          if (ctx.round() == 0) ctx.send(0, Message(1));
          if (ctx.inbox(0)) {
            s.reply_round = ctx.round();
            ctx.halt();
          }
        } else if (ctx.inbox(0)) {
          ctx.send(0, Message(2));
          ctx.halt();
        }
      },
      NetworkConfig::defaults_for(2));
  EXPECT_EQ(res.states[0].reply_round, 2);
}

TEST(Engine, HaltedNodesDropMessages) {
  auto g = path_graph(2);
  Network net(g);
  struct S {
    int seen = 0;
  };
  auto res = run(
      net, std::vector<S>(2),
      [](S& s, NodeContext& ctx) {
        if (ctx.inbox(0)) ++s.seen;
        if (ctx.vertex() == 1) ctx.halt();
        if (ctx.vertex() == 0) {
          ctx.send(0, Message(1));
          if (ctx.round() == 3) ctx.halt();
        }
      },
      NetworkConfig::defaults_for(2));
  EXPECT_EQ(res.states[1].seen, 0);
  EXPECT_EQ(res.stats.rounds, 3);
}

TEST(Engine, RoundLimit) {
  auto g = path_graph(3);
  NetworkConfig cfg = NetworkConfig::defaults_for(3);
  cfg.round_limit = 10;
  Network net(g);
  try {
    run(net, std::vector<int>(3, 0), [](int&, NodeContext&) {}, cfg, "spin");
    FAIL();
  } catch (const RoundLimitExceeded& e) {
    EXPECT_EQ(e.exit_code(), 4);
    EXPECT_EQ(e.stats.rounds, 10);
  }
}

TEST(Engine, DeterministicWithNodeRandomness) {
  auto g = random_connected(30, 20, 4);
  NetworkConfig cfg = NetworkConfig::defaults_for(30);
  cfg.seed = 77;
  Network net(g);
  auto once = [&] {
    return run(
        net, std::vector<std::uint64_t>(30, 0),
        [](std::uint64_t& s, NodeContext& ctx) {
          for (Port p = 0; p < ctx.degree(); ++p)
            if (ctx.inbox(p)) s ^= ctx.inbox(p)->field(0);
          if (ctx.round() == 5) {
            ctx.halt();
            return;
          }
          ctx.send_all(Message(1).add(ctx.rng()() & 0xff, 8));
        },
        cfg);
  };
  auto a = once(), b = once();
  EXPECT_EQ(a.states, b.states);
  EXPECT_EQ(a.stats.rounds, b.stats.rounds);
  EXPECT_EQ(a.stats.messages, b.stats.messages);
  EXPECT_EQ(a.stats.max_bits, b.stats.max_bits);
}

TEST(Config, Validation) {
  EXPECT_EQ(NetworkConfig::default_bits(64), 24);
  EXPECT_EQ(NetworkConfig::default_bits(20), 20);
  NetworkConfig c;
  c.bits_per_message = 7;
  EXPECT_THROW(c.validate(64), ValidationError);
  c.bits_per_message = 8;
  EXPECT_NO_THROW(c.validate(64));
  c.round_limit = 0;
  EXPECT_THROW(c.validate(64), ValidationError);
}

TEST(Stats, Composition) {
  RoundStats a, b;
  a.charge("x", 3);
  b.charge("y", 4);
  b.charge("x", 1);
  b.max_bits = 9;
  a += b;
  EXPECT_EQ(a.rounds, 8);
  EXPECT_EQ(a.phase_rounds("x"), 4);
  EXPECT_EQ(a.phase_rounds("y"), 4);
  EXPECT_EQ(a.max_bits, 9);
}

}  // namespace
}  // namespace dmc::congest
