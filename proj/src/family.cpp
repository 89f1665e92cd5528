#include "dverify/family.hpp"

#include <map>
#include <string>

namespace dverify {
namespace {

constexpr std::size_t kMaxNodes = std::size_t{1} << 31;

std::size_t checked_mul(std::size_t a, std::size_t b) {
  if (a != 0 && b > kMaxNodes / a) throw GraphError("family size overflow");
  return a * b;
}

class EdgeBuilder {
 public:
  void add(NodeId a, NodeId b, EdgeClass c) {
    auto e = make_edge(a, b);
    edges_.try_emplace(e, c);  // first insertion fixes the class; duplicates collapse
  }
  FamilyGraph finish(FamilyParams params, std::size_t n, std::size_t extra_begin, std::size_t ham_b) {
    std::vector<Edge> edges;
    edges.reserve(edges_.size());
    for (const auto& [e, c] : edges_) edges.push_back(e);
    FamilyGraph fg;
    fg.params = params;
    fg.graph = Graph(n, std::move(edges));
    fg.edge_class.resize(fg.graph.edge_count());
    // map iteration order equals the graph's sorted edge order
    std::size_t i = 0;
    for (const auto& [e, c] : edges_) fg.edge_class[i++] = c;
    fg.extra_node_begin = extra_begin;
    fg.ham_b = ham_b;
    return fg;
  }

 private:
  std::map<Edge, EdgeClass> edges_;
};

void add_base(EdgeBuilder& eb, const FamilyGraph& fg) {
  const auto& pr = fg.params;
  for (std::size_t l = 0; l < pr.p; ++l) {
    std::size_t width = 1;
    for (std::size_t k = 0; k < l; ++k) width *= pr.d;
    for (std::size_t i = 0; i < width; ++i)
      for (std::size_t c = 0; c < pr.d; ++c) eb.add(fg.tree_node(l, i), fg.tree_node(l + 1, i * pr.d + c), EdgeClass::tree);
  }
  for (std::size_t path = 1; path <= pr.gamma; ++path) {
    for (std::size_t j = 0; j < pr.m(); ++j) eb.add(fg.path_node(path, j), fg.path_node(path, j + 1), EdgeClass::path);
    for (std::size_t j = 0; j <= pr.m(); ++j) eb.add(fg.tree_node(pr.p, j), fg.path_node(path, j), EdgeClass::spoke);
  }
}

}  // namespace

std::size_t FamilyParams::leaves() const {
  validate();
  std::size_t x = 1;
  for (std::size_t k = 0; k < p; ++k) x = checked_mul(x, d);
  return x;
}

std::size_t FamilyParams::tree_size() const {
  // (d^{p+1} - 1) / (d - 1)
  std::size_t total = 0, width = 1;
  for (std::size_t l = 0; l <= p; ++l) {
    total += width;
    if (l < p) width = checked_mul(width, d);
  }
  return total;
}

std::size_t FamilyParams::node_count() const {
  std::size_t n = checked_mul(gamma, leaves()) + tree_size();
  if (n > kMaxNodes) throw GraphError("family size overflow");
  return n;
}

void FamilyParams::validate() const {
  if (gamma < 1) throw GraphError("gamma must be >= 1");
  if (d < 2) throw GraphError("d must be >= 2");
  if (p < 1) throw GraphError("p must be >= 1");
}

NodeId FamilyGraph::tree_node(std::size_t level, std::size_t index) const {
  std::size_t base = 0, width = 1;
  for (std::size_t l = 0; l < level; ++l) {
    base += width;
    width *= params.d;
  }
  if (level > params.p || index >= width) throw GraphError("tree node index out of range");
  return static_cast<NodeId>(base + index);
}

NodeId FamilyGraph::path_node(std::size_t path, std::size_t j) const {
  if (path < 1 || path > params.gamma || j > params.m()) throw GraphError("path node index out of range");
  return static_cast<NodeId>(params.tree_size() + (path - 1) * params.leaves() + j);
}

NodeId FamilyGraph::tree_parent(NodeId v) const {
  if (v == 0 || !is_tree_node(v)) throw GraphError("node has no tree parent");
  return static_cast<NodeId>((v - 1) / params.d);
}

FamilyGraph generate_family(const FamilyParams& params) {
  const std::size_t n = params.node_count();
  FamilyGraph fg;
  fg.params = params;
  EdgeBuilder eb;
  add_base(eb, fg);
  return eb.finish(params, n, n, 0);
}

FamilyGraph generate_family_ham(std::size_t b, std::size_t p) {
  if (b == 0) throw GraphError("b must be >= 1");
  if (p < 2) throw GraphError("p must be >= 2 for the Hamiltonian variant");
  FamilyParams params{2 + 12 * b, 2, p};
  const std::size_t base_n = params.node_count();
  const std::size_t G = params.gamma, m = params.m();
  FamilyGraph fg;
  fg.params = params;
  EdgeBuilder eb;
  add_base(eb, fg);
  auto v = [&](std::size_t path, std::size_t j) { return fg.path_node(path, j); };
  auto u = [&](std::size_t level, std::size_t i) { return fg.tree_node(level, i); };

  for (std::size_t a = 1; a <= G; ++a)
    for (std::size_t c = a + 1; c <= G; ++c) {
      eb.add(v(a, 0), v(c, 0), EdgeClass::extra);
      eb.add(v(a, m), v(c, m), EdgeClass::extra);
    }
  for (std::size_t i = 0; i < m; ++i) eb.add(u(p, i), u(p, i + 1), EdgeClass::extra);

  // connector paths from odd-indexed internal tree nodes
  std::size_t next = base_n;
  for (std::size_t l = 0; l < p; ++l) {
    for (std::size_t i = 1; i < (std::size_t{1} << l); i += 2) {
      NodeId prev = u(l, i);
      for (std::size_t k = 0; k < p - l; ++k) {
        auto c = static_cast<NodeId>(next++);
        eb.add(prev, c, EdgeClass::extra);
        prev = c;
      }
      eb.add(prev, u(p, i * (std::size_t{1} << (p - l)) + 1), EdgeClass::extra);
    }
  }

  const NodeId s = u(p, 0);
  eb.add(v(G - 2, m - 1), s, EdgeClass::extra);
  eb.add(v(G - 3, m), s, EdgeClass::extra);
  eb.add(v(G, m), u(0, 0), EdgeClass::extra);
  eb.add(s, v(G - 3, m - 1), EdgeClass::extra);
  for (std::size_t i = 0; i < 2 * b; ++i) eb.add(v(2 + 6 * i, 1), v(5 + 6 * i, 1), EdgeClass::extra);
  for (std::size_t i = 0; i + 1 < 2 * b; ++i) {
    eb.add(v(6 + 6 * i, m - 1), v(9 + 6 * i, m - 1), EdgeClass::extra);
    eb.add(v(6 + 6 * i, m - 1), v(8 + 6 * i, m), EdgeClass::extra);
    eb.add(v(5 + 6 * i, m), v(9 + 6 * i, m - 1), EdgeClass::extra);
  }
  eb.add(v(3, m - 1), v(1, m), EdgeClass::extra);
  return eb.finish(params, next, base_n, b);
}

}  // namespace dverify
