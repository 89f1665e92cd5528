#include "dverify/graph.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <numeric>
#include <thread>

namespace dverify {

struct Graph::Cache {
  std::once_flag once;
  std::uint32_t diameter = 0;
};

Graph::Graph(std::size_t n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)) { build(); }

Graph::Graph(std::size_t n, std::vector<Edge> edges, std::vector<Weight> weights)
    : n_(n), edges_(std::move(edges)), weights_(std::move(weights)) {
  if (weights_.size() != edges_.size()) throw GraphError("weight count does not match edge count");
  build();
}

void Graph::build() {
  if (n_ == 0) throw GraphError("graph must have at least one node");
  if (n_ > std::numeric_limits<NodeId>::max()) throw GraphError("too many nodes");
  for (auto& e : edges_) {
    if (e.u == e.v) throw GraphError("self-loop at node " + std::to_string(e.u));
    if (e.u >= n_ || e.v >= n_) throw GraphError("edge endpoint out of range");
    e = make_edge(e.u, e.v);
  }
  std::vector<std::size_t> order(edges_.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return edges_[a] < edges_[b]; });
  std::vector<Edge> sorted(edges_.size());
  std::vector<Weight> sorted_w(weights_.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    sorted[i] = edges_[order[i]];
    if (!weights_.empty()) sorted_w[i] = weights_[order[i]];
    if (i > 0 && sorted[i] == sorted[i - 1]) {
      throw GraphError("duplicate edge " + std::to_string(sorted[i].u) + " " + std::to_string(sorted[i].v));
    }
  }
  edges_ = std::move(sorted);
  weights_ = std::move(sorted_w);

  offsets_.assign(n_ + 1, 0);
  for (const auto& e : edges_) {
    ++offsets_[e.u + 1];
    ++offsets_[e.v + 1];
  }
  for (std::size_t v = 0; v < n_; ++v) offsets_[v + 1] += offsets_[v];
  adj_.resize(2 * edges_.size());
  adj_edge_.resize(2 * edges_.size());
  std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
  // Edges are sorted by (u, v), so pushing in order keeps each list sorted for
  // the u side; the v side needs an explicit sort.
  for (EdgeId id = 0; id < edges_.size(); ++id) {
    const auto& e = edges_[id];
    adj_[fill[e.u]] = e.v;
    adj_edge_[fill[e.u]++] = id;
    adj_[fill[e.v]] = e.u;
    adj_edge_[fill[e.v]++] = id;
  }
  for (std::size_t v = 0; v < n_; ++v) {
    std::vector<std::pair<NodeId, EdgeId>> tmp;
    tmp.reserve(offsets_[v + 1] - offsets_[v]);
    for (auto k = offsets_[v]; k < offsets_[v + 1]; ++k) tmp.emplace_back(adj_[k], adj_edge_[k]);
    std::sort(tmp.begin(), tmp.end());
    for (std::size_t k = 0; k < tmp.size(); ++k) {
      adj_[offsets_[v] + k] = tmp[k].first;
      adj_edge_[offsets_[v] + k] = tmp[k].second;
    }
  }
  cache_ = std::make_shared<Cache>();
}

std::optional<std::size_t> Graph::port_of(NodeId a, NodeId b) const {
  auto nb = neighbors(a);
  auto it = std::lower_bound(nb.begin(), nb.end(), b);
  if (it == nb.end() || *it != b) return std::nullopt;
  return static_cast<std::size_t>(it - nb.begin());
}

std::optional<EdgeId> Graph::find_edge(NodeId a, NodeId b) const {
  if (a >= n_ || b >= n_) return std::nullopt;
  auto p = port_of(a, b);
  if (!p) return std::nullopt;
  return incident_edges(a)[*p];
}

std::vector<std::uint32_t> bfs_distances(const Graph& g, NodeId src) {
  std::vector<std::uint32_t> dist(g.node_count(), kUnreachable);
  std::vector<NodeId> queue{src};
  dist[src] = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    NodeId v = queue[head];
    for (NodeId w : g.neighbors(v)) {
      if (dist[w] == kUnreachable) {
        dist[w] = dist[v] + 1;
        queue.push_back(w);
      }
    }
  }
  return dist;
}

std::uint32_t Graph::diameter() const {
  std::call_once(cache_->once, [this] {
    std::atomic<std::uint32_t> best{0};
    std::atomic<bool> disconnected{false};
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      std::uint32_t local = 0;
      for (std::size_t s; (s = next.fetch_add(1)) < n_;) {
        auto d = bfs_distances(*this, static_cast<NodeId>(s));
        for (auto x : d) {
          if (x == kUnreachable) {
            disconnected = true;
            return;
          }
          local = std::max(local, x);
        }
        if (disconnected) return;
      }
      std::uint32_t cur = best.load();
      while (local > cur && !best.compare_exchange_weak(cur, local)) {
      }
    };
    unsigned threads = n_ < 512 ? 1 : std::max(1u, std::min(8u, std::thread::hardware_concurrency()));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    cache_->diameter = disconnected ? kUnreachable : best.load();
  });
  return cache_->diameter;
}

bool Graph::connected() const {
  auto d = bfs_distances(*this, 0);
  return std::find(d.begin(), d.end(), kUnreachable) == d.end();
}

Graph Graph::with_weights(std::vector<Weight> weights) const {
  Graph g(n_, edges_, std::move(weights));
  g.labels_ = labels_;
  g.cache_ = cache_;  // same topology, same diameter
  return g;
}

void Graph::set_node_labels(std::vector<std::string> labels) {
  if (!labels.empty() && labels.size() != n_) throw GraphError("label count does not match node count");
  labels_ = std::move(labels);
}

Graph relabel(const Graph& g, std::span<const NodeId> perm) {
  if (perm.size() != g.node_count()) throw GraphError("permutation size mismatch");
  std::vector<Edge> edges;
  std::vector<Weight> w;
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    edges.push_back(make_edge(perm[g.edge(e).u], perm[g.edge(e).v]));
    if (g.weighted()) w.push_back(g.weight(e));
  }
  return g.weighted() ? Graph(g.node_count(), std::move(edges), std::move(w)) : Graph(g.node_count(), std::move(edges));
}

// SubgraphIndicator ----------------------------------------------------------

SubgraphIndicator SubgraphIndicator::from_edges(const Graph& g, const std::vector<bool>& in_h) {
  if (in_h.size() != g.edge_count()) throw GraphError("indicator size does not match host edge count");
  SubgraphIndicator h(g);
  for (std::size_t e = 0; e < in_h.size(); ++e) h.flags_[e] = in_h[e] ? 1 : 0;
  return h;
}

SubgraphIndicator SubgraphIndicator::from_edge_list(const Graph& g, std::span<const Edge> edges) {
  SubgraphIndicator h(g);
  for (const auto& e : edges) {
    auto id = g.find_edge(e.u, e.v);
    if (!id) throw GraphError("edge " + std::to_string(e.u) + " " + std::to_string(e.v) + " not in host graph");
    h.flags_[*id] = 1;
  }
  return h;
}

SubgraphIndicator SubgraphIndicator::from_incidences(const Graph& g, std::span<const std::uint8_t> flags) {
  if (flags.size() != g.incidence_count()) throw GraphError("incidence flag count mismatch");
  SubgraphIndicator h(g);
  std::vector<int> seen(g.edge_count(), -1);
  for (NodeId v = 0; v < g.node_count(); ++v) {
    auto inc = g.incident_edges(v);
    for (std::size_t k = 0; k < inc.size(); ++k) {
      int f = flags[g.incidence_offset(v) + k] ? 1 : 0;
      if (seen[inc[k]] >= 0 && seen[inc[k]] != f) {
        throw GraphError("inconsistent indicator on edge " + std::to_string(g.edge(inc[k]).u) + " " +
                         std::to_string(g.edge(inc[k]).v));
      }
      seen[inc[k]] = f;
      h.flags_[inc[k]] = static_cast<std::uint8_t>(f);
    }
  }
  return h;
}

SubgraphIndicator SubgraphIndicator::all(const Graph& g) {
  SubgraphIndicator h(g);
  std::fill(h.flags_.begin(), h.flags_.end(), 1);
  return h;
}

std::size_t SubgraphIndicator::edge_count() const {
  return static_cast<std::size_t>(std::count(flags_.begin(), flags_.end(), 1));
}

std::vector<EdgeId> SubgraphIndicator::edge_ids() const {
  std::vector<EdgeId> out;
  for (EdgeId e = 0; e < flags_.size(); ++e)
    if (flags_[e]) out.push_back(e);
  return out;
}

std::size_t SubgraphIndicator::degree(const Graph& g, NodeId v) const {
  std::size_t d = 0;
  for (EdgeId e : g.incident_edges(v)) d += flags_[e];
  return d;
}

SubgraphIndicator SubgraphIndicator::complement() const {
  SubgraphIndicator h = *this;
  for (auto& f : h.flags_) f = f ? 0 : 1;
  return h;
}

void SubgraphIndicator::check_host(const Graph& g) const {
  if (flags_.size() != g.edge_count()) throw GraphError("subgraph indicator does not match host graph");
}

}  // namespace dverify
