#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "dmc/errors.hpp"
#include "dmc/graph.hpp"

namespace dmc {

namespace {

std::vector<std::string> split_ws(const std::string& line) {
  std::istringstream ss(line);
  std::vector<std::string> out;
  for (std::string tok; ss >> tok;) out.push_back(tok);
  return out;
}

template <class T>
std::optional<T> parse_int(std::string_view s) {
  T value{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

struct RawEdge {
  std::string u, v;
  Weight w;
  std::size_t line;
};

}  // namespace

GraphFile read_graph(std::istream& in, Weight max_weight) {
  std::optional<std::pair<std::size_t, std::size_t>> header;
  std::vector<RawEdge> raw;
  std::optional<PlantedCut> planted;
  std::map<Vertex, std::string> declared_labels;
  std::size_t lineno = 0;

  for (std::string line; std::getline(in, line);) {
    ++lineno;
    auto toks = split_ws(line);
    if (toks.empty()) continue;
    if (toks[0].starts_with("#")) {
      // Sidecar records ride in comment lines; anything else is ignored.
      if (toks[0] == "#" && toks.size() >= 2 && toks[1] == "planted") {
        if (toks.size() != 4) throw ParseError("planted record needs '# planted <c> <ids>'", lineno);
        auto c = parse_int<Weight>(toks[2]);
        if (!c) throw ParseError("bad planted weight '" + toks[2] + "'", lineno);
        PlantedCut pc{*c, {}};
        std::istringstream ids(toks[3]);
        for (std::string id; std::getline(ids, id, ',');) {
          auto v = parse_int<Vertex>(id);
          if (!v) throw ParseError("bad planted vertex '" + id + "'", lineno);
          pc.side.push_back(*v);
        }
        planted = std::move(pc);
      } else if (toks[0] == "#" && toks.size() >= 2 && toks[1] == "label") {
        if (toks.size() != 4) throw ParseError("label record needs '# label <id> <name>'", lineno);
        auto v = parse_int<Vertex>(toks[2]);
        if (!v) throw ParseError("bad label id '" + toks[2] + "'", lineno);
        declared_labels[*v] = toks[3];
      }
      continue;
    }
    if (toks[0] == "p") {
      if (header) throw ParseError("duplicate header", lineno);
      if (toks.size() != 3) throw ParseError("header must be 'p <n> <m>'", lineno);
      auto n = parse_int<std::size_t>(toks[1]);
      auto m = parse_int<std::size_t>(toks[2]);
      if (!n || !m) throw ParseError("header must be 'p <n> <m>'", lineno);
      header = {*n, *m};
      continue;
    }
    if (!header) throw ParseError("edge before header", lineno);
    if (toks.size() != 3) throw ParseError("edge line must be '<u> <v> <w>'", lineno);
    auto w = parse_int<Weight>(toks[2]);
    if (!w) throw ParseError("bad weight '" + toks[2] + "'", lineno);
    raw.push_back({toks[0], toks[1], *w, lineno});
  }
  if (!header) throw ParseError("missing header 'p <n> <m>'", lineno);
  const auto [n, m] = *header;
  if (raw.size() != m) {
    throw ParseError("header declares " + std::to_string(m) + " edges, found " + std::to_string(raw.size()),
                     lineno);
  }

  // Ids are taken literally when every endpoint is an integer in [0, n);
  // otherwise names are mapped to dense ids in order of first appearance.
  bool literal = std::all_of(raw.begin(), raw.end(), [&](const RawEdge& e) {
    auto a = parse_int<Vertex>(e.u);
    auto b = parse_int<Vertex>(e.v);
    return a && b && *a < n && *b < n;
  });
  std::vector<std::string> labels;
  std::vector<Edge> edges;
  edges.reserve(raw.size());
  if (literal) {
    for (const auto& e : raw) edges.push_back({*parse_int<Vertex>(e.u), *parse_int<Vertex>(e.v), e.w});
    if (!declared_labels.empty()) {
      labels.resize(n);
      for (Vertex v = 0; v < n; ++v) labels[v] = std::to_string(v);
      for (const auto& [v, name] : declared_labels) {
        if (v >= n) throw ParseError("label id out of range", lineno);
        labels[v] = name;
      }
    }
  } else {
    std::map<std::string, Vertex> ids;
    auto id_of = [&](const std::string& name, std::size_t line) {
      auto [it, fresh] = ids.try_emplace(name, static_cast<Vertex>(ids.size()));
      if (fresh) {
        if (ids.size() > n) throw ParseError("more distinct vertex names than n", line);
        labels.push_back(name);
      }
      return it->second;
    };
    for (const auto& e : raw) edges.push_back({id_of(e.u, e.line), id_of(e.v, e.line), e.w});
    while (labels.size() < n) labels.push_back("_" + std::to_string(labels.size()));
  }

  GraphFile file{WeightedMultigraph(n, std::move(edges), max_weight), std::move(planted), std::move(labels)};
  if (file.planted) {
    for (Vertex v : file.planted->side)
      if (v >= n) throw ValidationError("planted side names vertex outside the graph");
  }
  return file;
}

void write_graph(std::ostream& out, const GraphFile& file) {
  const auto& g = file.graph;
  out << "p " << g.vertex_count() << ' ' << g.edge_count() << '\n';
  if (file.planted) {
    out << "# planted " << file.planted->weight << ' ';
    for (std::size_t i = 0; i < file.planted->side.size(); ++i) out << (i ? "," : "") << file.planted->side[i];
    out << '\n';
  }
  for (Vertex v = 0; v < file.labels.size(); ++v) out << "# label " << v << ' ' << file.labels[v] << '\n';
  for (const auto& e : g.edges()) out << e.u << ' ' << e.v << ' ' << e.w << '\n';
}

GraphFile load_graph_file(const std::string& path, Weight max_weight) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open graph file '" + path + "'");
  return read_graph(in, max_weight);
}

WeightedMultigraph load_graph(const std::string& path, Weight max_weight) {
  return load_graph_file(path, max_weight).graph;
}

void save_graph(const std::string& path, const GraphFile& file) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write graph file '" + path + "'");
  write_graph(out, file);
  if (!out) throw ValidationError("write failed for '" + path + "'");
}

}  // namespace dmc
