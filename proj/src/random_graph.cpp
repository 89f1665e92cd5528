#include <algorithm>
#include <random>
#include <unordered_set>

#include "dverify/graph.hpp"

namespace dverify {
namespace {

std::uint64_t key(NodeId a, NodeId b) {
  auto e = make_edge(a, b);
  return (static_cast<std::uint64_t>(e.u) << 32) | e.v;
}

}  // namespace

Graph generate_random(RandomKind kind, std::size_t n, std::size_t m, std::uint64_t seed) {
  if (n == 0) throw GraphError("n must be positive");
  const std::size_t max_m = n * (n - 1) / 2;
  if (m > max_m) throw GraphError("too many edges for n");
  if (kind == RandomKind::connected_gnm && m + 1 < n) throw GraphError("connected graph needs at least n-1 edges");

  std::mt19937_64 rng(seed);
  std::vector<Edge> edges;
  std::unordered_set<std::uint64_t> used;
  edges.reserve(m);

  if (kind == RandomKind::connected_gnm) {
    // random spanning tree: attach each node of a shuffled order to an earlier one
    std::vector<NodeId> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = static_cast<NodeId>(i);
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t i = 1; i < n; ++i) {
      std::uniform_int_distribution<std::size_t> pick(0, i - 1);
      NodeId a = order[i], b = order[pick(rng)];
      used.insert(key(a, b));
      edges.push_back(make_edge(a, b));
    }
  }

  if (2 * m > max_m) {
    // dense: sample from the list of remaining pairs
    std::vector<Edge> rest;
    for (NodeId a = 0; a < n; ++a)
      for (NodeId b = a + 1; b < n; ++b)
        if (!used.count(key(a, b))) rest.push_back({a, b});
    std::shuffle(rest.begin(), rest.end(), rng);
    rest.resize(m - edges.size());
    edges.insert(edges.end(), rest.begin(), rest.end());
  } else {
    std::uniform_int_distribution<NodeId> node(0, static_cast<NodeId>(n - 1));
    while (edges.size() < m) {
      NodeId a = node(rng), b = node(rng);
      if (a == b || !used.insert(key(a, b)).second) continue;
      edges.push_back(make_edge(a, b));
    }
  }
  return Graph(n, std::move(edges));
}

Graph with_random_weights(const Graph& g, Weight lo, Weight hi, std::uint64_t seed) {
  if (lo > hi) throw GraphError("empty weight range");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<Weight> dist(lo, hi);
  std::vector<Weight> w(g.edge_count());
  for (auto& x : w) x = dist(rng);
  return g.with_weights(std::move(w));
}

}  // namespace dverify
