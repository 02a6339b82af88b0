#include "dmc/mincut.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

#include "dmc/mst.hpp"

namespace dmc::mincut {

using congest::bits_for;
using congest::Port;
using tree::ChildRecord;
using tree::PortRecord;
using tree::Record;
using tree::RecordLayout;

double solve_epsilon_prime(double epsilon) {
  if (!(epsilon > 0.0) || epsilon > 1.0) throw ValidationError("epsilon must lie in (0, 1]");
  auto f = [&](double x) { return (1 + x) * (1 + x) * (1 + x) / (1 - x) - (1 + epsilon); };
  // f(0) = -epsilon < 0 and f(epsilon) > 0, so the root lies in (0, epsilon).
  double lo = 0.0, hi = epsilon;
  for (int i = 0; i < 200 && lo < hi; ++i) {
    const double mid = lo + (hi - lo) / 2;
    if (mid == lo || mid == hi) break;
    (f(mid) < 0 ? lo : hi) = mid;
  }
  return std::abs(f(lo)) <= std::abs(f(hi)) ? lo : hi;
}

EpsilonSchedule EpsilonSchedule::make(double epsilon, std::size_t n) {
  EpsilonSchedule s;
  s.epsilon = epsilon;
  s.epsilon_prime = solve_epsilon_prime(epsilon);
  const double ln_n = std::log(static_cast<double>(std::max<std::size_t>(n, 2)));
  s.k = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::ceil(128 * ln_n / (s.epsilon_prime * s.epsilon_prime))));
  const auto k = static_cast<double>(s.k);
  s.threshold = k / 2 + s.epsilon_prime * k / 8;
  return s;
}

double x_value(std::size_t i, std::size_t n, double epsilon_prime) {
  if (i == 0) return 1.0;
  const double ln_n = std::log(static_cast<double>(std::max<std::size_t>(n, 2)));
  return std::ldexp(20 * ln_n / (epsilon_prime * epsilon_prime), static_cast<int>(i - 1));
}

std::size_t outer_iterations(std::size_t n, Weight max_weight, double epsilon_prime) {
  const double nw = static_cast<double>(n) * static_cast<double>(max_weight);
  std::size_t i = 0;
  while (x_value(i + 1, n, epsilon_prime) <= nw) ++i;
  return i + 1;
}

std::vector<double> gamma_sweep(double x_i, double x_next, double epsilon_prime) {
  const double stop = (1 + epsilon_prime) / (1 - epsilon_prime) * x_next;
  std::vector<double> out;
  double gamma = x_i;
  do {
    out.push_back(gamma);
    gamma *= 1 + epsilon_prime;
  } while (!(gamma > stop));
  return out;
}

// ---- packing policy ----------------------------------------------------------

double paper_packing_count(double epsilon_prime, std::size_t n, Weight multi_edges) {
  const double ln_n = std::log(static_cast<double>(std::max<std::size_t>(n, 2)));
  const double lambda = (1 + epsilon_prime) * 20 * ln_n / (epsilon_prime * epsilon_prime);
  const double ln_m = std::log(static_cast<double>(std::max<Weight>(multi_edges, 1)));
  return 96 * std::pow(lambda + 1, 7) * ln_m * ln_m * ln_m;
}

std::size_t PackingPolicy::count(const EpsilonSchedule& s, std::size_t n, Weight multi_edges) const {
  switch (mode) {
    case PackingMode::fixed:
      if (fixed_count == 0) throw ValidationError("fixed packing needs a count of at least 1");
      return fixed_count;
    case PackingMode::paper: {
      const double c = paper_packing_count(s.epsilon_prime, n, multi_edges);
      if (!(c <= paper_cap) || !(c < 0x1p63)) {
        std::ostringstream msg;
        msg << "paper packing count " << std::setprecision(4) << c << " exceeds the cap of " << paper_cap;
        throw PolicyError(msg.str());
      }
      return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(c)));
    }
    case PackingMode::karger: {
      const double ln_n = std::log(static_cast<double>(std::max<std::size_t>(n, 2)));
      const double eps = s.epsilon_prime;
      const double lambda_hat = std::min((1 + eps) * 20 * ln_n / (eps * eps), lambda_cap);
      return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(c_pack * lambda_hat * ln_n)));
    }
  }
  throw ValidationError("unknown packing mode");
}

PackingMode parse_mode(const std::string& name) {
  if (name == "paper") return PackingMode::paper;
  if (name == "karger") return PackingMode::karger;
  if (name == "fixed") return PackingMode::fixed;
  throw ValidationError("unknown packing policy '" + name + "'");
}

std::string to_string(PackingMode mode) {
  switch (mode) {
    case PackingMode::paper: return "paper";
    case PackingMode::karger: return "karger";
    case PackingMode::fixed: return "fixed";
  }
  return "?";
}

TestEngine parse_engine(const std::string& name) {
  if (name == "fast") return TestEngine::fast;
  if (name == "simulated") return TestEngine::simulated;
  throw ValidationError("unknown test engine '" + name + "'");
}

std::string to_string(TestEngine engine) { return engine == TestEngine::fast ? "fast" : "simulated"; }

// ---- cuts ---------------------------------------------------------------------

VertexSide side_marking(const RootedSpanningTree& t, std::span<const std::uint32_t> pre,
                        std::span<const std::uint32_t> size, Vertex u, Vertex v) {
  if (v >= t.vertex_count() || v == t.root() || t.parent(v) != u)
    throw ValidationError("(" + std::to_string(u) + "," + std::to_string(v) + ") is not a tree edge with child " +
                          std::to_string(v));
  std::vector<bool> mask(t.vertex_count());
  for (Vertex x = 0; x < t.vertex_count(); ++x) mask[x] = pre[x] >= pre[v] && pre[x] < pre[v] + size[v];
  return VertexSide::from_mask(std::move(mask));
}

// ---- sampling -----------------------------------------------------------------

namespace {

/// 64 independent Bernoulli(t / 2^64) bits.  Compares 64 uniform reals
/// with t bit by bit from the top, stopping once every lane has differed.
std::uint64_t bernoulli_lanes(std::uint64_t t, SplitMix64& rng) {
  if (t == 0) return 0;
  std::uint64_t undecided = ~std::uint64_t{0}, result = 0;
  for (int j = 63; j >= 0 && undecided != 0; --j) {
    const std::uint64_t r = rng();
    if ((t >> j) & 1u) {
      result |= undecided & ~r;
      undecided &= r;
    } else {
      undecided &= ~r;
    }
  }
  return result;
}

double presence_probability(Weight w, double kappa) {
  return -std::expm1(-static_cast<double>(w) * std::log(2.0) / kappa);
}

}  // namespace

std::vector<std::uint64_t> sample_presence_block(const WeightedMultigraph& g, double kappa, std::uint64_t seed,
                                                 std::uint64_t block) {
  SplitMix64 rng = SplitMix64(seed).derive("presence").derive(block);
  std::vector<std::uint64_t> out(g.edge_count());
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    const double p = presence_probability(g.edge(e).w, kappa);
    out[e] = p >= 1.0 ? ~std::uint64_t{0} : bernoulli_lanes(presence_threshold(p), rng);
  }
  return out;
}

// ---- Test(T, kappa) ---------------------------------------------------------

namespace {

/// For each edge, the non-root vertices whose parent edge lies on its tree path.
struct PathIndex {
  std::vector<std::size_t> offset;
  std::vector<Vertex> vertex;

  PathIndex(const WeightedMultigraph& g, const RootedSpanningTree& t) {
    const std::size_t n = t.vertex_count();
    std::vector<std::uint32_t> depth(n, 0);
    std::vector<Vertex> order{t.root()};
    for (std::size_t i = 0; i < order.size(); ++i)
      for (Vertex c : t.children(order[i])) {
        depth[c] = depth[order[i]] + 1;
        order.push_back(c);
      }
    offset.push_back(0);
    for (const auto& e : g.edges()) {
      Vertex a = e.u, b = e.v;
      while (a != b) {
        if (depth[a] < depth[b]) std::swap(a, b);
        vertex.push_back(a);
        a = t.parent(a);
      }
      offset.push_back(vertex.size());
    }
  }
};

struct Decision {
  std::optional<Vertex> child;
  /// Each vertex's own verdict on whether it lies below the chosen edge.
  std::vector<bool> below;
  RoundStats stats;
};

/// Every child vertex holds its sum; the cast root learns the smallest
/// (sum, pre) at or below the threshold and tells everyone its pre range.
Decision decide(tree::TreeSession& session, const std::vector<std::uint64_t>& sums, double threshold,
                std::uint64_t k) {
  const auto& net = session.network();
  const auto& t = session.tree();
  const auto& labels = session.compute_preorder();
  const std::size_t n = net.size();
  const int idb = net.id_bits();
  const int size_bits = bits_for(n + 1);

  RecordLayout candidate{{1, bits_for(k + 1), idb, size_bits}};
  std::vector<Record> own(n, Record{0, 0, 0, 0});
  for (Vertex v = 0; v < n; ++v)
    if (v != t.root() && static_cast<double>(sums[v]) <= threshold)
      own[v] = {1, sums[v], labels.pre[v], labels.size[v]};
  auto better = [](const Record& a, const Record& b) {
    if (a[0] != b[0]) return a[0] > b[0];
    return std::pair(a[1], a[2]) < std::pair(b[1], b[2]);
  };
  const auto& cast = session.cast_overlay();
  auto best = tree::convergecast(
      net, cast, candidate, own,
      [&](Vertex, const Record& mine, std::span<const ChildRecord> kids) {
        Record r = mine;
        for (const auto& c : kids)
          if (better(c.record, r)) r = c.record;
        return r;
      },
      session.config(), "decide");

  Decision d;
  d.stats = best.stats;
  RecordLayout verdict{{1, idb, size_bits}};
  std::vector<std::optional<Record>> seed(n);
  const Record& top = best.subtree[t.root()];
  seed[t.root()] = Record{top[0], top[2], top[3]};
  auto told = tree::broadcast(
      net, cast, verdict, seed,
      [](Vertex, const Record& mine, std::span<const Port> kids) { return std::vector<Record>(kids.size(), mine); },
      session.config(), "decide");
  d.stats += told.stats;
  d.below.assign(n, false);
  for (Vertex v = 0; v < n; ++v) {
    const Record& r = told.value[v];
    if (r[0] != 1) continue;
    d.below[v] = labels.pre[v] >= r[1] && labels.pre[v] < r[1] + r[2];
    if (labels.pre[v] == r[1]) d.child = v;
  }
  return d;
}

RoundStats sampling_round(const Network& net, const NetworkConfig& config) {
  // The smaller endpoint of each edge flips the coins and sends the verdict.
  RecordLayout bit{{1}};
  return tree::exchange(
             net, bit,
             [&](Vertex v) {
               std::vector<PortRecord> out;
               for (Port p = 0; p < net.degree(v); ++p)
                 if (v < net.neighbor(v, p)) out.push_back({p, Record{1}});
               return out;
             },
             config, "sample")
      .stats;
}

}  // namespace

TestOutcome test_tree_cut(tree::TreeSession& session, double kappa, const EpsilonSchedule& sched,
                          std::uint64_t seed, TestEngine engine) {
  if (!(kappa >= 1.0)) throw ValidationError("kappa must be at least 1");
  const auto& net = session.network();
  const auto& g = net.graph();
  const auto& t = session.tree();
  const std::size_t n = net.size();
  const std::uint64_t k = sched.k;
  const double theta = sched.threshold;

  TestOutcome out;
  out.sums.assign(n, 0);
  const RoundStats sample_cost = sampling_round(net, session.config());
  const RoundStats& lh_cost = session.low_high_cost();

  const PathIndex paths(g, t);
  const double q = -std::expm1(-std::log(2.0) / kappa);
  SplitMix64 magnitude_root = SplitMix64(seed).derive("magnitude");
  std::vector<std::uint64_t> cover(n);

  auto all_above = [&] {
    for (Vertex v = 0; v < n; ++v)
      if (v != t.root() && static_cast<double>(out.sums[v]) <= theta) return false;
    return true;
  };

  for (std::uint64_t block = 0; block * 64 < k; ++block) {
    const std::uint64_t lanes = std::min<std::uint64_t>(64, k - block * 64);
    const std::uint64_t valid = lanes == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << lanes) - 1;
    auto present = sample_presence_block(g, kappa, seed, block);
    if (engine == TestEngine::fast) {
      std::fill(cover.begin(), cover.end(), 0);
      for (EdgeId e = 0; e < g.edge_count(); ++e) {
        const std::uint64_t m = present[e] & valid;
        if (m == 0) continue;
        for (std::size_t i = paths.offset[e]; i < paths.offset[e + 1]; ++i) cover[paths.vertex[i]] |= m;
      }
      for (Vertex v = 0; v < n; ++v) out.sums[v] += static_cast<std::uint64_t>(std::popcount(cover[v]));
    } else {
      SplitMix64 magnitude = magnitude_root.derive(block);
      for (std::uint64_t lane = 0; lane < lanes; ++lane) {
        std::vector<Weight> mult(g.edge_count(), 0);
        for (EdgeId e = 0; e < g.edge_count(); ++e)
          if ((present[e] >> lane) & 1u) mult[e] = sample_positive_binomial(g.edge(e).w, q, magnitude);
        out.stats += sampling_round(net, session.config());
        auto b = session.find_bridges(SampledSubgraph(g, std::move(mult), q, seed));
        out.stats += b.stats;
        for (Vertex v = 0; v < n; ++v)
          if (v != t.root() && !b.bridge[v]) ++out.sums[v];
      }
    }
    out.trials_run += lanes;
    // Sums never decrease, so once all exceed the threshold the verdict is fixed.
    if (all_above()) break;
  }

  // Rounds for the trials, including any skipped by the early exit: the
  // network itself would run all k.
  const std::uint64_t charged = engine == TestEngine::fast ? k : k - out.trials_run;
  for (const auto& [phase, r] : sample_cost.phases) out.stats.charge(phase, r * static_cast<std::int64_t>(charged));
  for (const auto& [phase, r] : lh_cost.phases) out.stats.charge(phase, r * static_cast<std::int64_t>(charged));
  out.stats.max_bits = std::max({out.stats.max_bits, sample_cost.max_bits, lh_cost.max_bits});

  auto d = decide(session, out.sums, theta, k);
  out.stats += d.stats;
  if (d.child) {
    const Vertex v = *d.child;
    CutResult c{VertexSide::from_mask(std::move(d.below)), 0, {}};
    c.weight = cut_weight(g, c.side);
    c.source.parent = t.parent(v);
    c.source.child = v;
    out.cut = std::move(c);
  }
  return out;
}

// ---- driver ---------------------------------------------------------------------

MinCutReport approx_min_cut(const WeightedMultigraph& g, double epsilon, std::uint64_t seed,
                            const NetworkConfig& config, const MinCutOptions& options) {
  const std::size_t n = g.vertex_count();
  if (n < 2) throw ValidationError("a cut needs at least two vertices");
  config.validate(n);
  Network net(g);
  struct {
    EpsilonSchedule schedule;
    std::vector<IterationInfo> iterations;
    std::vector<TraceEntry> trace;
    std::vector<std::string> warnings;
    std::size_t tests_run = 0;
    RoundStats stats;
  } report;
  auto finish = [&](CutResult cut) {
    return MinCutReport{std::move(cut), report.schedule, std::move(report.iterations), std::move(report.trace),
                        std::move(report.warnings), report.tests_run, std::move(report.stats)};
  };
  report.schedule = EpsilonSchedule::make(epsilon, n);
  const double eps = report.schedule.epsilon_prime;
  const SplitMix64 root(seed);
  std::optional<CutResult> best;

  const std::size_t outer = outer_iterations(n, g.max_weight(), eps);
  for (std::size_t i = 0; i < outer; ++i) {
    IterationInfo info;
    info.iteration = i;
    info.x_low = x_value(i, n, eps);
    info.x_high = x_value(i + 1, n, eps);
    info.probability = std::ldexp(1.0, -static_cast<int>(i));
    if (options.lambda_interval &&
        (info.x_high < options.lambda_interval->first || info.x_low > options.lambda_interval->second)) {
      info.skipped = true;
      report.iterations.push_back(info);
      continue;
    }
    auto h = sample_subgraph(g, info.probability, root.derive("skeleton").derive(i).key());
    report.stats += sampling_round(net, config);
    if (!h.connected()) {
      info.skipped = true;
      report.warnings.push_back("iteration " + std::to_string(i) + ": sampled graph is disconnected, skipped");
      report.iterations.push_back(info);
      continue;
    }
    const std::size_t count = options.policy.count(report.schedule, n, h.total());
    info.trees = count;
    report.iterations.push_back(info);
    auto packed = mst::greedy_tree_packing(net, h.multiplicities(), count, config);
    report.stats += packed.stats;

    std::vector<tree::TreeSession> sessions;
    sessions.reserve(count);
    for (const auto& t : packed.packing.trees) {
      sessions.emplace_back(net, t, config);
      if (sessions.size() == 1) report.stats += sessions.back().cast_stats();
      report.stats += sessions.back().decompose().stats;
      report.stats += sessions.back().compute_preorder().stats;
    }

    const auto gammas = gamma_sweep(info.x_low, info.x_high, eps);
    for (std::size_t gi = 0; gi < gammas.size(); ++gi) {
      const double gamma = gammas[gi];
      for (std::size_t ti = 0; ti < sessions.size(); ++ti) {
        const std::uint64_t test_seed = root.derive("test").derive(i).derive(gi).derive(ti).key();
        auto out = test_tree_cut(sessions[ti], (1 + eps) * gamma, report.schedule, test_seed, options.engine);
        report.stats += out.stats;
        ++report.tests_run;
        if (options.trace) {
          TraceEntry e{i, gamma, ti, out.cut.has_value(), std::numeric_limits<std::uint64_t>::max()};
          for (Vertex v = 0; v < n; ++v)
            if (v != sessions[ti].tree().root()) e.min_sum = std::min(e.min_sum, out.sums[v]);
          report.trace.push_back(e);
        }
        if (!out.cut) continue;
        out.cut->source.iteration = i;
        out.cut->source.tree_index = ti;
        out.cut->source.gamma = gamma;
        if (!best || out.cut->weight < best->weight) best = std::move(out.cut);
        if (!options.exhaustive) {
          return finish(std::move(*best));
        }
      }
    }
  }
  if (!best) throw NoCutFound("no Test call returned a cut");
  return finish(std::move(*best));
}

}  // namespace dmc::mincut
