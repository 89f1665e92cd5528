#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "dverify/graph.hpp"
#include "dverify/problems.hpp"

namespace dverify::oracle {

class UnionFind {
 public:
  explicit UnionFind(std::size_t n);
  std::size_t find(std::size_t x);
  bool unite(std::size_t a, std::size_t b);
  std::size_t components() const { return components_; }

 private:
  std::vector<std::size_t> parent_, rank_;
  std::size_t components_;
};

/// Edge order used everywhere an MST must be unique: (weight, min id, max id).
bool edge_less(const Graph& g, EdgeId a, EdgeId b);

struct SpanningForest {
  Weight total = 0;
  std::vector<EdgeId> edges;  // ascending EdgeId
  bool spanning = false;      // single tree covering every node
};

SpanningForest kruskal(const Graph& g);
/// Lazy Prim from every unvisited node; same tie-breaking, used for dual checks.
SpanningForest prim(const Graph& g);

/// Component label = minimum node id, over (V, H).
std::vector<NodeId> components_union_find(const Graph& g, const SubgraphIndicator& h);
std::vector<NodeId> components_bfs(const Graph& g, const SubgraphIndicator& h);

/// Predicate semantics used by the distributed verifiers. Traversal-based.
bool predicate(Problem p, const Graph& g, const SubgraphIndicator& h, const ExtraArgs& args);
/// Same predicates through union-find / counting arguments.
bool predicate_alt(Problem p, const Graph& g, const SubgraphIndicator& h, const ExtraArgs& args);

bool two_colorable_bfs(const Graph& g, const SubgraphIndicator& h);
bool two_colorable_parity_uf(const Graph& g, const SubgraphIndicator& h);

// Weighted optima ----------------------------------------------------------

inline constexpr Weight kInfinity = std::numeric_limits<Weight>::max();

std::vector<Weight> dijkstra(const Graph& g, NodeId src);
std::vector<Weight> bellman_ford(const Graph& g, NodeId src);
/// Minimum total weight of a shortest-path tree rooted at src (kInfinity if some node unreachable).
Weight shortest_path_tree_weight(const Graph& g, NodeId src);
/// Global min cut weight (0 if disconnected).
Weight stoer_wagner(const Graph& g);
Weight min_cut_brute_force(const Graph& g);  // n ≤ 20
Weight min_st_cut(const Graph& g, NodeId s, NodeId t);  // Edmonds–Karp
Weight min_st_cut_brute_force(const Graph& g, NodeId s, NodeId t);  // n ≤ 20
/// Minimum routing-cost spanning tree value (sum over unordered pairs of tree distance).
/// Exhaustive; throws GraphError unless n ≤ 10 and m ≤ 24.
Weight min_routing_cost_tree(const Graph& g);

// Least-element lists ------------------------------------------------------

using LeList = std::vector<std::pair<NodeId, Weight>>;  // (node, distance), ascending distance

/// LE-list of u: nodes v whose rank is the minimum among all nodes within distance d(u,v).
LeList le_list(const Graph& g, std::span<const std::uint64_t> rank, NodeId u);
LeList le_list_brute_force(const Graph& g, std::span<const std::uint64_t> rank, NodeId u);
bool le_list_matches(const Graph& g, std::span<const std::uint64_t> rank, NodeId u, LeList candidate);

// Two-party functions ------------------------------------------------------

bool disj(const std::vector<bool>& x, const std::vector<bool>& y);
bool eq(const std::vector<bool>& x, const std::vector<bool>& y);

}  // namespace dverify::oracle
