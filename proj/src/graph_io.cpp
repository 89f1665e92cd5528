#include <fstream>
#include <sstream>

#include "dverify/graph.hpp"

namespace dverify {
namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw GraphError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void dump(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw GraphError("cannot write " + path);
  out << text;
}

// Splits a line into unsigned decimal fields; rejects anything else.
std::vector<std::uint64_t> fields(const std::string& line, std::size_t lineno) {
  std::vector<std::uint64_t> out;
  std::size_t i = 0;
  while (i < line.size()) {
    if (line[i] == ' ' || line[i] == '\t' || line[i] == '\r') {
      ++i;
      continue;
    }
    if (line[i] < '0' || line[i] > '9') {
      throw GraphError("line " + std::to_string(lineno) + ": malformed token");
    }
    std::uint64_t v = 0;
    while (i < line.size() && line[i] >= '0' && line[i] <= '9') {
      auto digit = static_cast<std::uint64_t>(line[i] - '0');
      if (v > (std::numeric_limits<std::uint64_t>::max() - digit) / 10) {
        throw GraphError("line " + std::to_string(lineno) + ": number overflow");
      }
      v = v * 10 + digit;
      ++i;
    }
    out.push_back(v);
  }
  return out;
}

}  // namespace

Graph parse_graph(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw GraphError("empty graph file");
  std::istringstream head(line);
  std::size_t n = 0, m = 0;
  std::string flag;
  if (!(head >> n >> m)) throw GraphError("line 1: expected 'n m [weighted]'");
  bool weighted = false;
  if (head >> flag) {
    if (flag != "weighted") throw GraphError("line 1: unknown flag '" + flag + "'");
    weighted = true;
  }
  std::vector<Edge> edges;
  std::vector<Weight> w;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    auto f = fields(line, lineno);
    if (f.empty()) continue;
    if (f.size() != (weighted ? 3u : 2u)) throw GraphError("line " + std::to_string(lineno) + ": wrong field count");
    if (f[0] >= n || f[1] >= n) throw GraphError("line " + std::to_string(lineno) + ": node id out of range");
    edges.push_back({static_cast<NodeId>(f[0]), static_cast<NodeId>(f[1])});
    if (weighted) w.push_back(f[2]);
  }
  if (edges.size() != m) throw GraphError("edge count does not match header");
  return weighted ? Graph(n, std::move(edges), std::move(w)) : Graph(n, std::move(edges));
}

std::string format_graph(const Graph& g) {
  std::ostringstream out;
  out << g.node_count() << ' ' << g.edge_count();
  if (g.weighted()) out << " weighted";
  out << '\n';
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    out << g.edge(e).u << ' ' << g.edge(e).v;
    if (g.weighted()) out << ' ' << g.weight(e);
    out << '\n';
  }
  return out.str();
}

Graph read_graph(const std::string& path) { return parse_graph(slurp(path)); }
void write_graph(const Graph& g, const std::string& path) { dump(path, format_graph(g)); }

SubgraphIndicator parse_subgraph(const std::string& text, const Graph& host) {
  std::istringstream in(text);
  std::string line;
  std::vector<Edge> edges;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto f = fields(line, lineno);
    if (f.empty()) continue;
    if (f.size() != 2) throw GraphError("line " + std::to_string(lineno) + ": expected 'u v'");
    if (f[0] >= host.node_count() || f[1] >= host.node_count() || !host.find_edge(f[0], f[1])) {
      throw GraphError("line " + std::to_string(lineno) + ": edge not in host graph");
    }
    edges.push_back(make_edge(static_cast<NodeId>(f[0]), static_cast<NodeId>(f[1])));
  }
  return SubgraphIndicator::from_edge_list(host, edges);
}

std::string format_subgraph(const SubgraphIndicator& h, const Graph& host) {
  h.check_host(host);
  std::ostringstream out;
  for (EdgeId e : h.edge_ids()) out << host.edge(e).u << ' ' << host.edge(e).v << '\n';
  return out.str();
}

SubgraphIndicator read_subgraph(const std::string& path, const Graph& host) {
  return parse_subgraph(slurp(path), host);
}

void write_subgraph(const SubgraphIndicator& h, const Graph& host, const std::string& path) {
  dump(path, format_subgraph(h, host));
}

}  // namespace dverify
