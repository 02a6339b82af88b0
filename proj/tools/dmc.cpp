// dmc: generate instances, run the distributed min-cut algorithm and its
// oracles, and benchmark the tree primitives.

#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "bench.hpp"
#include "dmc/mincut.hpp"
#include "dmc/oracle.hpp"
#include "json.hpp"

using json = nlohmann::ordered_json;
using namespace dmc;

namespace {

constexpr int kSchemaVersion = 1;

void emit(const json& j, const std::string& path) {
  if (path.empty()) return;
  if (path == "-") {
    std::cout << j.dump(2) << '\n';
    return;
  }
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write '" + path + "'");
  out << j.dump(2) << '\n';
}

json stats_json(const congest::RoundStats& s) {
  json phases = json::array();
  for (const auto& [name, rounds] : s.phases) phases.push_back({{"phase", name}, {"rounds", rounds}});
  return {{"rounds", s.rounds}, {"max_bits", s.max_bits}, {"messages", s.messages}, {"phases", phases}};
}

std::string digest(const std::vector<Vertex>& members) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (Vertex v : members)
    for (int b = 0; b < 4; ++b) {
      h ^= (v >> (8 * b)) & 0xffu;
      h *= 0x100000001b3ULL;
    }
  std::ostringstream s;
  s << std::hex << std::setw(16) << std::setfill('0') << h;
  return s.str();
}

json side_json(const VertexSide& side, const std::vector<std::string>& labels) {
  const auto canon = side.canonical().members();
  json j = {{"size", canon.size()}, {"members", canon}, {"digest", digest(canon)}};
  if (!labels.empty()) {
    json names = json::array();
    for (Vertex v : canon) names.push_back(labels[v]);
    j["labels"] = names;
  }
  return j;
}

json input_json(const std::string& path, const WeightedMultigraph& g) {
  return {{"path", path},         {"n", g.vertex_count()},       {"m", g.edge_count()},
          {"m_multi", g.multi_edge_count()}, {"W", g.max_weight()}, {"D", diameter(g)}};
}

// ---- gen ---------------------------------------------------------------------

struct GenArgs {
  std::string model;
  std::size_t na = 10, nb = 10, k = 4, len = 5, n = 16, extra = 10;
  Weight c = 3, max_weight = 1;
  double p = 1.0;
  std::uint64_t seed = 1;
  std::string out;
};

int cmd_gen(const GenArgs& a) {
  GraphFile file{WeightedMultigraph(2, {{0, 1, 1}}), std::nullopt, {}};
  if (a.model == "planted") {
    if (a.c == 0) throw ValidationError("planted cut needs c >= 1");
    if (a.na < 1 || a.nb < 1) throw ValidationError("planted sides need at least one vertex");
    auto gg = planted_cut({a.na, a.nb, a.p, a.c}, a.seed);
    file = {std::move(gg.graph), std::move(gg.planted), {}};
  } else if (a.model == "cliquepath") {
    file.graph = clique_path(a.k, a.len);
  } else if (a.model == "random") {
    file.graph = random_connected(a.n, a.extra, a.seed, a.max_weight);
  } else {
    throw ValidationError("unknown model '" + a.model + "'");
  }
  if (a.out.empty() || a.out == "-") {
    write_graph(std::cout, file);
  } else {
    save_graph(a.out, file);
  }
  return 0;
}

// ---- solve ---------------------------------------------------------------------

struct SolveArgs {
  std::string graph;
  double epsilon = 0.5;
  std::uint64_t seed = 1;
  std::string policy = "karger";
  std::size_t fixed_count = 0;
  double c_pack = 2.0;
  double lambda_cap = 4.0;
  double paper_cap = 1e4;
  int bits = 0;
  std::int64_t round_limit = 1'000'000;
  bool oracle = false;
  bool check = false;
  bool exhaustive = false;
  bool trace = false;
  std::string engine = "fast";
  std::vector<double> lambda_interval;
  std::string json_path;
};

int cmd_solve(const SolveArgs& a) {
  const auto start = std::chrono::steady_clock::now();
  const GraphFile file = load_graph_file(a.graph);
  const auto& g = file.graph;
  const std::size_t n = g.vertex_count();

  auto config = congest::NetworkConfig::defaults_for(n);
  if (a.bits > 0) config.bits_per_message = a.bits;
  config.round_limit = a.round_limit;
  config.seed = SplitMix64(a.seed).derive("network").key();

  mincut::MinCutOptions opt;
  opt.policy.mode = mincut::parse_mode(a.policy);
  opt.policy.fixed_count = a.fixed_count;
  opt.policy.c_pack = a.c_pack;
  opt.policy.lambda_cap = a.lambda_cap;
  opt.policy.paper_cap = a.paper_cap;
  opt.engine = mincut::parse_engine(a.engine);
  opt.exhaustive = a.exhaustive;
  opt.trace = a.trace;
  if (!a.lambda_interval.empty()) {
    if (a.lambda_interval.size() != 2 || a.lambda_interval[0] > a.lambda_interval[1])
      throw ValidationError("--lambda-interval needs LO HI with LO <= HI");
    opt.lambda_interval = std::pair(a.lambda_interval[0], a.lambda_interval[1]);
  }

  json report = {{"schema_version", kSchemaVersion}, {"command", "solve"}, {"input", input_json(a.graph, g)}};
  json cfg = {{"epsilon", a.epsilon},
              {"policy", a.policy},
              {"fixed_count", a.fixed_count},
              {"c_pack", a.c_pack},
              {"lambda_cap", a.lambda_cap},
              {"engine", a.engine},
              {"bits", config.bits_per_message},
              {"round_limit", config.round_limit},
              {"exhaustive", a.exhaustive}};
  report["seeds"] = {{"master", a.seed}, {"network", config.seed}};

  auto r = mincut::approx_min_cut(g, a.epsilon, a.seed, config, opt);
  cfg["epsilon_prime"] = r.schedule.epsilon_prime;
  cfg["k"] = r.schedule.k;
  cfg["threshold"] = r.schedule.threshold;
  report["config"] = cfg;

  const Weight exact = cut_weight(g, r.cut.side);
  json result = {{"weight", r.cut.weight}, {"exact_weight", exact}, {"side", side_json(r.cut.side, file.labels)}};
  result["source"] = {{"iteration", r.cut.source.iteration},
                      {"tree_index", r.cut.source.tree_index},
                      {"tree_edge", {r.cut.source.parent, r.cut.source.child}},
                      {"gamma", r.cut.source.gamma}};
  result["tests_run"] = r.tests_run;
  report["result"] = result;

  int code = 0;
  std::optional<double> ratio;
  if (a.oracle || a.check) {
    const auto sw = oracle::stoer_wagner(g);
    ratio = static_cast<double>(r.cut.weight) / static_cast<double>(sw.weight);
    report["oracle"] = {{"lambda", sw.weight}, {"side", side_json(sw.side, file.labels)}, {"ratio", *ratio}};
    if (a.check) {
      const bool ok = *ratio <= 1 + a.epsilon && exact == r.cut.weight;
      report["check"] = {{"bound", 1 + a.epsilon}, {"passed", ok}};
      if (!ok) code = 1;
    }
  }

  json iters = json::array();
  for (const auto& it : r.iterations)
    iters.push_back({{"iteration", it.iteration},
                     {"x_low", it.x_low},
                     {"x_high", it.x_high},
                     {"probability", it.probability},
                     {"trees", it.trees},
                     {"skipped", it.skipped}});
  report["iterations"] = iters;
  report["warnings"] = r.warnings;
  report["stats"] = stats_json(r.stats);
  if (a.trace) {
    json tr = json::array();
    for (const auto& t : r.trace)
      tr.push_back({{"iteration", t.iteration},
                    {"gamma", t.gamma},
                    {"tree", t.tree_index},
                    {"returned", t.returned},
                    {"min_sum", t.min_sum}});
    report["trace"] = tr;
  }
  report["wall_time_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  for (const auto& w : r.warnings) std::cerr << "warning: " << w << '\n';
  if (a.json_path != "-") {
    std::cout << "weight " << r.cut.weight << "  side " << r.cut.side.canonical().size() << " vertices  rounds "
              << r.stats.rounds << "  max_bits " << r.stats.max_bits << "/" << config.bits_per_message;
    if (ratio) std::cout << "  lambda " << report["oracle"]["lambda"] << "  ratio " << *ratio;
    std::cout << '\n';
    if (a.check) std::cout << (code == 0 ? "check passed" : "check FAILED") << '\n';
  }
  emit(report, a.json_path);
  return code;
}

// ---- oracle ----------------------------------------------------------------------

int cmd_oracle(const std::string& path, const std::string& json_path) {
  const GraphFile file = load_graph_file(path);
  const auto sw = oracle::stoer_wagner(file.graph);
  json report = {{"schema_version", kSchemaVersion},
                 {"command", "oracle"},
                 {"input", input_json(path, file.graph)},
                 {"lambda", sw.weight},
                 {"side", side_json(sw.side, file.labels)}};
  if (file.planted) report["planted_weight"] = file.planted->weight;
  if (json_path != "-") std::cout << "lambda " << sw.weight << '\n';
  emit(report, json_path);
  return 0;
}

// ---- bench ------------------------------------------------------------------------

int cmd_bench(const std::string& family, const std::vector<std::size_t>& sizes, std::size_t seeds,
              std::uint64_t seed, int bits, const std::string& json_path) {
  if (sizes.empty()) throw ValidationError("bench needs at least one size");
  if (seeds == 0) throw ValidationError("bench needs at least one seed");
  json rows = json::array();
  std::optional<double> c_fit;
  if (json_path != "-")
    std::cout << "n\tseed\tD\tsqrt_n\theight\tfrags\tdecomp\tpreorder\tlow_high\tbridges\tlabels/(D+sqrt n)\n";
  for (std::size_t n : sizes) {
    for (std::size_t s = 0; s < seeds; ++s) {
      const std::uint64_t run_seed = SplitMix64(seed).derive(n).derive(s).key();
      const auto g = bench::family_graph(family, n, run_seed);
      auto config = congest::NetworkConfig::defaults_for(n);
      if (bits > 0) config.bits_per_message = bits;
      config.seed = run_seed;
      const auto r = bench::measure_tree_rounds(g, config, run_seed);
      const double ratio = static_cast<double>(r.labels_total()) / r.scale();
      if (!c_fit) c_fit = ratio;
      const double bound = *c_fit * r.scale();
      rows.push_back({{"n", n},
                      {"seed", run_seed},
                      {"D", r.diameter},
                      {"sqrt_n", std::sqrt(static_cast<double>(n))},
                      {"tree_height", r.tree_height},
                      {"fragments", r.fragments},
                      {"decompose", r.decompose},
                      {"preorder", r.preorder},
                      {"low_high", r.low_high},
                      {"bridges", r.bridges},
                      {"max_bits", r.max_bits},
                      {"ratio", ratio},
                      {"within_1_5x_fit", static_cast<double>(r.labels_total()) <= 1.5 * bound}});
      if (json_path != "-")
        std::cout << n << '\t' << s << '\t' << r.diameter << '\t' << std::sqrt(static_cast<double>(n)) << '\t'
                  << r.tree_height << '\t' << r.fragments << '\t' << r.decompose << '\t' << r.preorder << '\t'
                  << r.low_high << '\t' << r.bridges << '\t' << ratio << '\n';
    }
  }
  json report = {{"schema_version", kSchemaVersion}, {"command", "bench"}, {"family", family},
                 {"seeds", {{"master", seed}, {"per_size", seeds}}}, {"c_fit", *c_fit}, {"rows", rows}};
  emit(report, json_path);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distributed approximate minimum cut in a simulated CONGEST network"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "Generate a graph file");
  g->add_option("model", gen.model, "planted | cliquepath | random")->required();
  g->add_option("--na", gen.na, "Planted side A size");
  g->add_option("--nb", gen.nb, "Planted side B size");
  g->add_option("--c", gen.c, "Planted crossing unit edges");
  g->add_option("--p", gen.p, "Planted internal edge probability");
  g->add_option("--k", gen.k, "Clique size");
  g->add_option("--len", gen.len, "Number of cliques");
  g->add_option("--n", gen.n, "Random graph size");
  g->add_option("--extra", gen.extra, "Random non-tree edges");
  g->add_option("--max-weight", gen.max_weight, "Random edge weights in [1, W]");
  g->add_option("--seed", gen.seed, "Seed");
  g->add_option("-o,--out", gen.out, "Output path (stdout when omitted)");

  SolveArgs solve;
  auto* s = app.add_subcommand("solve", "Run the approximate min-cut algorithm");
  s->add_option("graph", solve.graph, "Graph file")->required();
  s->add_option("--epsilon", solve.epsilon, "Approximation parameter in (0, 1]");
  s->add_option("--seed", solve.seed, "Master seed");
  s->add_option("--policy", solve.policy, "Tree packing policy: paper | karger | fixed");
  s->add_option("--fixed-count", solve.fixed_count, "Trees per packing in fixed mode");
  s->add_option("--c-pack", solve.c_pack, "Karger policy constant");
  s->add_option("--lambda-cap", solve.lambda_cap, "Upper clamp on the karger lambda estimate");
  s->add_option("--paper-cap", solve.paper_cap, "Largest tree count paper mode accepts");
  s->add_option("--bits", solve.bits, "Bits per message B (default 4*max(2,ceil(log2 n)))");
  s->add_option("--round-limit", solve.round_limit, "Round cap per protocol run");
  s->add_option("--engine", solve.engine, "Test engine: fast | simulated");
  s->add_option("--lambda-interval", solve.lambda_interval, "Known bracket LO HI for the min cut")->expected(2);
  s->add_flag("--oracle", solve.oracle, "Also run Stoer-Wagner and report the ratio");
  s->add_flag("--check", solve.check, "Exit 1 unless ratio <= 1 + epsilon (implies --oracle)");
  s->add_flag("--exhaustive", solve.exhaustive, "Keep going after the first cut and return the lightest");
  s->add_flag("--trace", solve.trace, "Record every Test call");
  s->add_option("--json", solve.json_path, "Write the report to PATH ('-' for stdout)");

  std::string oracle_path, oracle_json;
  auto* o = app.add_subcommand("oracle", "Exact minimum cut by Stoer-Wagner");
  o->add_option("graph", oracle_path, "Graph file")->required();
  o->add_option("--json", oracle_json, "Write the report to PATH ('-' for stdout)");

  std::string family = "cliquepath", bench_json;
  std::vector<std::size_t> sizes;
  std::size_t seeds = 1;
  std::uint64_t bench_seed = 1;
  int bench_bits = 0;
  auto* b = app.add_subcommand("bench", "Rounds of the tree primitives across sizes");
  b->add_option("--family", family, "cliquepath | path | random");
  b->add_option("--sizes", sizes, "Vertex counts")->delimiter(',')->required();
  b->add_option("--seeds", seeds, "Runs per size");
  b->add_option("--seed", bench_seed, "Master seed");
  b->add_option("--bits", bench_bits, "Bits per message B");
  b->add_option("--json", bench_json, "Write the report to PATH ('-' for stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  std::string json_path;
  if (s->parsed()) json_path = solve.json_path;
  if (o->parsed()) json_path = oracle_json;
  if (b->parsed()) json_path = bench_json;
  try {
    if (g->parsed()) return cmd_gen(gen);
    if (s->parsed()) return cmd_solve(solve);
    if (o->parsed()) return cmd_oracle(oracle_path, oracle_json);
    return cmd_bench(family, sizes, seeds, bench_seed, bench_bits, bench_json);
  } catch (const Error& e) {
    json err = {{"schema_version", kSchemaVersion}, {"error", {{"kind", e.kind()}, {"message", e.what()}}}};
    if (const auto* bv = dynamic_cast<const congest::BudgetViolation*>(&e))
      err["error"]["detail"] = {{"node", bv->node}, {"round", bv->round}, {"neighbor", bv->neighbor},
                                {"bits", bv->bits},  {"budget", bv->budget}};
    std::cerr << "error (" << e.kind() << "): " << e.what() << '\n';
    if (!json_path.empty()) {
      try {
        emit(err, json_path);
      } catch (const Error&) {
      }
    }
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
