#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dmc/congest.hpp"
#include "dmc/graph.hpp"
#include "dmc/tree.hpp"

namespace dmc::mincut {

using congest::Network;
using congest::NetworkConfig;
using congest::RoundStats;
using tree::RootedSpanningTree;

/// epsilon' with (1+e')^3/(1-e') = 1+epsilon, found by bisection.
/// Throws ValidationError unless 0 < epsilon <= 1.
double solve_epsilon_prime(double epsilon);

struct EpsilonSchedule {
  double epsilon = 0;
  double epsilon_prime = 0;
  /// Trials per Test: ceil(128 ln n / e'^2), at least 1.
  std::uint64_t k = 1;
  /// k/2 + e'k/8.
  double threshold = 0;

  static EpsilonSchedule make(double epsilon, std::size_t n);
};

// ---- outer and inner schedules ----------------------------------------------

/// X_0 = 1 and X_{i+1} = 2^i * 20 ln n / e'^2.
double x_value(std::size_t i, std::size_t n, double epsilon_prime);

/// Outer iterations i = 0..I, where I is the first index with X_{I+1} > nW.
std::size_t outer_iterations(std::size_t n, Weight max_weight, double epsilon_prime);

/// gamma = X_i, (1+e')X_i, ... ; the last one is the first whose successor
/// exceeds ((1+e')/(1-e')) X_{i+1}.
std::vector<double> gamma_sweep(double x_i, double x_next, double epsilon_prime);

// ---- packing policy ----------------------------------------------------------

enum class PackingMode { paper, karger, fixed };

struct PackingPolicy {
  PackingMode mode = PackingMode::karger;
  std::size_t fixed_count = 0;
  double c_pack = 2.0;
  /// Upper clamp on lambda-hat in karger mode.
  double lambda_cap = 4.0;
  /// Paper mode refuses counts above this.
  double paper_cap = 1e4;

  /// Trees to pack in a sampled graph with `multi_edges` unit edges.
  /// Throws PolicyError when paper mode exceeds its cap.
  [[nodiscard]] std::size_t count(const EpsilonSchedule& s, std::size_t n, Weight multi_edges) const;
};

/// 96 ((1+e') 20 ln n / e'^2 + 1)^7 ln^3 m, unrounded.
double paper_packing_count(double epsilon_prime, std::size_t n, Weight multi_edges);

PackingMode parse_mode(const std::string& name);
std::string to_string(PackingMode mode);

// ---- cuts ---------------------------------------------------------------------

struct CutSource {
  std::size_t iteration = 0;
  std::size_t tree_index = 0;
  Vertex parent = 0;
  Vertex child = 0;
  double gamma = 0;
};

struct CutResult {
  VertexSide side;
  Weight weight = 0;
  CutSource source;
};

/// The subtree of child v below tree edge (u, v): every x whose preorder
/// number lies in [pre(v), pre(v)+size(v)-1].  Throws ValidationError
/// unless (u, v) is a tree edge with v the child.
VertexSide side_marking(const RootedSpanningTree& t, std::span<const std::uint32_t> pre,
                        std::span<const std::uint32_t> size, Vertex u, Vertex v);

// ---- Test(T, kappa) ---------------------------------------------------------

/// How Test evaluates its k trials.
///  fast: evaluates "some sampled edge crosses C(T,e)" centrally, 64 trials
///        per machine word, and charges each trial the rounds measured for
///        one distributed low/high pass on T.
///  simulated: runs the distributed bridge protocol for every trial.
/// Both draw identical sampled subgraphs and so reach identical decisions.
enum class TestEngine { fast, simulated };

TestEngine parse_engine(const std::string& name);
std::string to_string(TestEngine engine);

struct TestOutcome {
  std::optional<CutResult> cut;
  /// Sum of Y over the trials evaluated, per child vertex (0 at the root).
  std::vector<std::uint64_t> sums;
  /// Trials actually evaluated; below k when every sum already exceeds the threshold.
  std::uint64_t trials_run = 0;
  RoundStats stats;
};

/// Test(T, kappa) on G for the tree held by `session`.  Each trial keeps
/// every unit edge with probability 1 - 2^(-1/kappa).
TestOutcome test_tree_cut(tree::TreeSession& session, double kappa, const EpsilonSchedule& sched,
                          std::uint64_t seed, TestEngine engine = TestEngine::fast);

/// Presence of every edge of g in 64 consecutive trials: bit j of
/// result[e] is set when edge e appears in trial (64 * block + j).  Each
/// edge appears with probability 1 - 2^(-w/kappa).
std::vector<std::uint64_t> sample_presence_block(const WeightedMultigraph& g, double kappa, std::uint64_t seed,
                                                 std::uint64_t block);

// ---- driver ---------------------------------------------------------------------

struct TraceEntry {
  std::size_t iteration = 0;
  double gamma = 0;
  std::size_t tree_index = 0;
  bool returned = false;
  /// Smallest Y sum over the tree's edges.
  std::uint64_t min_sum = 0;
};

struct IterationInfo {
  std::size_t iteration = 0;
  double x_low = 0;
  double x_high = 0;
  double probability = 1;
  std::size_t trees = 0;
  bool skipped = false;
};

struct MinCutOptions {
  PackingPolicy policy;
  TestEngine engine = TestEngine::fast;
  /// Keep searching after the first cut and return the lightest one.
  bool exhaustive = false;
  /// Externally known bracket for lambda; iterations outside it are skipped.
  std::optional<std::pair<double, double>> lambda_interval;
  bool trace = false;
};

struct MinCutReport {
  CutResult cut;
  EpsilonSchedule schedule;
  std::vector<IterationInfo> iterations;
  std::vector<TraceEntry> trace;
  std::vector<std::string> warnings;
  std::size_t tests_run = 0;
  RoundStats stats;
};

/// The full search for a (1+epsilon)-approximate min cut.  Throws
/// NoCutFound when no Test returns a cut.
MinCutReport approx_min_cut(const WeightedMultigraph& g, double epsilon, std::uint64_t seed,
                            const NetworkConfig& config, const MinCutOptions& options = {});

}  // namespace dmc::mincut
