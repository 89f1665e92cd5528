#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace dverify {

using NodeId = std::uint32_t;
using EdgeId = std::uint32_t;
using Weight = std::uint64_t;

inline constexpr std::uint32_t kUnreachable = std::numeric_limits<std::uint32_t>::max();

/// Undirected edge with u < v.
struct Edge {
  NodeId u = 0;
  NodeId v = 0;

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

inline Edge make_edge(NodeId a, NodeId b) { return a < b ? Edge{a, b} : Edge{b, a}; }

class GraphError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Immutable undirected simple graph on nodes 0..n-1.
///
/// Edges are kept sorted by (u, v); EdgeId is the index in that order. Adjacency
/// is stored in CSR form with each node's neighbours sorted ascending, so the
/// k-th neighbour of a node is also its port k in the simulator.
class Graph {
 public:
  Graph() = default;
  Graph(std::size_t n, std::vector<Edge> edges);
  Graph(std::size_t n, std::vector<Edge> edges, std::vector<Weight> weights);

  std::size_t node_count() const { return n_; }
  std::size_t edge_count() const { return edges_.size(); }
  std::span<const Edge> edges() const { return edges_; }
  const Edge& edge(EdgeId e) const { return edges_[e]; }

  bool weighted() const { return !weights_.empty(); }
  Weight weight(EdgeId e) const { return weights_.empty() ? 1 : weights_[e]; }
  std::span<const Weight> weights() const { return weights_; }

  std::span<const NodeId> neighbors(NodeId v) const {
    return {adj_.data() + offsets_[v], adj_.data() + offsets_[v + 1]};
  }
  std::span<const EdgeId> incident_edges(NodeId v) const {
    return {adj_edge_.data() + offsets_[v], adj_edge_.data() + offsets_[v + 1]};
  }
  std::size_t degree(NodeId v) const { return offsets_[v + 1] - offsets_[v]; }
  /// Offset of node v's first incidence in the flat incidence array.
  std::size_t incidence_offset(NodeId v) const { return offsets_[v]; }
  std::size_t incidence_count() const { return adj_.size(); }

  std::optional<EdgeId> find_edge(NodeId a, NodeId b) const;
  /// Port of neighbour b at node a.
  std::optional<std::size_t> port_of(NodeId a, NodeId b) const;

  /// Hop diameter; kUnreachable if disconnected. Computed once and cached.
  std::uint32_t diameter() const;
  bool connected() const;

  Graph with_weights(std::vector<Weight> weights) const;
  Graph without_weights() const { return Graph(n_, edges_); }

  std::span<const std::string> node_labels() const { return labels_; }
  void set_node_labels(std::vector<std::string> labels);

 private:
  void build();

  std::size_t n_ = 0;
  std::vector<Edge> edges_;
  std::vector<Weight> weights_;
  std::vector<std::size_t> offsets_{0};
  std::vector<NodeId> adj_;
  std::vector<EdgeId> adj_edge_;
  std::vector<std::string> labels_;

  struct Cache;
  std::shared_ptr<Cache> cache_;
};

/// Hop distances from src (kUnreachable for unreachable nodes).
std::vector<std::uint32_t> bfs_distances(const Graph& g, NodeId src);

/// Membership flags Y_v(u) describing a subgraph H of a host graph.
///
/// Stored per host edge, so Y_v(u) = Y_u(v) holds by construction; the
/// per-incidence constructor is where inconsistent input gets rejected.
class SubgraphIndicator {
 public:
  SubgraphIndicator() = default;
  explicit SubgraphIndicator(const Graph& g) : flags_(g.edge_count(), 0) {}
  static SubgraphIndicator from_edges(const Graph& g, const std::vector<bool>& in_h);
  static SubgraphIndicator from_edge_list(const Graph& g, std::span<const Edge> edges);
  /// flags laid out like the host's CSR incidences; throws GraphError on Y_v(u) != Y_u(v).
  static SubgraphIndicator from_incidences(const Graph& g, std::span<const std::uint8_t> flags);
  static SubgraphIndicator all(const Graph& g);

  bool contains(EdgeId e) const { return flags_[e] != 0; }
  /// Y_v(u) for the neighbour u at the given port of v.
  bool at(const Graph& g, NodeId v, std::size_t port) const {
    return flags_[g.incident_edges(v)[port]] != 0;
  }
  void set(EdgeId e, bool value) { flags_[e] = value ? 1 : 0; }

  std::size_t domain_size() const { return flags_.size(); }
  std::size_t edge_count() const;
  std::vector<EdgeId> edge_ids() const;
  std::size_t degree(const Graph& g, NodeId v) const;
  SubgraphIndicator complement() const;
  /// Throws GraphError unless the domain is exactly g's edge set.
  void check_host(const Graph& g) const;

  friend bool operator==(const SubgraphIndicator&, const SubgraphIndicator&) = default;

 private:
  std::vector<std::uint8_t> flags_;
};

// Generators ---------------------------------------------------------------

enum class RandomKind { gnm, connected_gnm };

/// Deterministic for fixed seed. connected_gnm lays a random spanning tree first.
Graph generate_random(RandomKind kind, std::size_t n, std::size_t m, std::uint64_t seed);

/// Same topology with i.i.d. weights drawn uniformly from [lo, hi].
Graph with_random_weights(const Graph& g, Weight lo, Weight hi, std::uint64_t seed);

/// Relabels nodes: node v becomes perm[v].
Graph relabel(const Graph& g, std::span<const NodeId> perm);

// File I/O -----------------------------------------------------------------

Graph read_graph(const std::string& path);
void write_graph(const Graph& g, const std::string& path);
Graph parse_graph(const std::string& text);
std::string format_graph(const Graph& g);

SubgraphIndicator read_subgraph(const std::string& path, const Graph& host);
void write_subgraph(const SubgraphIndicator& h, const Graph& host, const std::string& path);
SubgraphIndicator parse_subgraph(const std::string& text, const Graph& host);
std::string format_subgraph(const SubgraphIndicator& h, const Graph& host);

}  // namespace dverify
