#include "dverify/oracles.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <queue>
#include <tuple>

namespace dverify::oracle {

UnionFind::UnionFind(std::size_t n) : parent_(n), rank_(n, 0), components_(n) {
  std::iota(parent_.begin(), parent_.end(), 0);
}

std::size_t UnionFind::find(std::size_t x) {
  while (parent_[x] != x) {
    parent_[x] = parent_[parent_[x]];
    x = parent_[x];
  }
  return x;
}

bool UnionFind::unite(std::size_t a, std::size_t b) {
  a = find(a);
  b = find(b);
  if (a == b) return false;
  if (rank_[a] < rank_[b]) std::swap(a, b);
  parent_[b] = a;
  if (rank_[a] == rank_[b]) ++rank_[a];
  --components_;
  return true;
}

bool edge_less(const Graph& g, EdgeId a, EdgeId b) {
  return std::make_tuple(g.weight(a), g.edge(a).u, g.edge(a).v) < std::make_tuple(g.weight(b), g.edge(b).u, g.edge(b).v);
}

SpanningForest kruskal(const Graph& g) {
  std::vector<EdgeId> order(g.edge_count());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](EdgeId a, EdgeId b) { return edge_less(g, a, b); });
  UnionFind uf(g.node_count());
  SpanningForest f;
  for (EdgeId e : order) {
    if (!uf.unite(g.edge(e).u, g.edge(e).v)) continue;
    f.edges.push_back(e);
    f.total += g.weight(e);
  }
  std::sort(f.edges.begin(), f.edges.end());
  f.spanning = uf.components() == 1;
  return f;
}

SpanningForest prim(const Graph& g) {
  using Key = std::tuple<Weight, NodeId, NodeId, EdgeId>;
  std::vector<std::uint8_t> in(g.node_count(), 0);
  SpanningForest f;
  std::size_t trees = 0;
  for (NodeId root = 0; root < g.node_count(); ++root) {
    if (in[root]) continue;
    ++trees;
    std::priority_queue<Key, std::vector<Key>, std::greater<>> pq;
    auto visit = [&](NodeId v) {
      in[v] = 1;
      for (EdgeId e : g.incident_edges(v)) {
        const auto& ed = g.edge(e);
        if (!in[ed.u] || !in[ed.v]) pq.emplace(g.weight(e), ed.u, ed.v, e);
      }
    };
    visit(root);
    while (!pq.empty()) {
      auto [w, a, b, e] = pq.top();
      pq.pop();
      if (in[a] && in[b]) continue;
      f.edges.push_back(e);
      f.total += w;
      visit(in[a] ? b : a);
    }
  }
  std::sort(f.edges.begin(), f.edges.end());
  f.spanning = trees == 1;
  return f;
}

namespace {

// BFS over edges accepted by `use`; returns reached flags.
template <class Use>
std::vector<std::uint8_t> reach(const Graph& g, NodeId src, Use use) {
  std::vector<std::uint8_t> seen(g.node_count(), 0);
  std::vector<NodeId> queue{src};
  seen[src] = 1;
  for (std::size_t i = 0; i < queue.size(); ++i) {
    NodeId v = queue[i];
    auto nb = g.neighbors(v);
    auto inc = g.incident_edges(v);
    for (std::size_t k = 0; k < nb.size(); ++k) {
      if (seen[nb[k]] || !use(inc[k])) continue;
      seen[nb[k]] = 1;
      queue.push_back(nb[k]);
    }
  }
  return seen;
}

bool all_set(const std::vector<std::uint8_t>& v) {
  return std::all_of(v.begin(), v.end(), [](auto x) { return x != 0; });
}

std::optional<EdgeId> designated(const Graph& g, const ExtraArgs& a) {
  if (a.e.u >= g.node_count() || a.e.v >= g.node_count()) return std::nullopt;
  return g.find_edge(a.e.u, a.e.v);
}

bool has_cycle_dfs(const Graph& g, const SubgraphIndicator& h) {
  std::vector<std::uint8_t> seen(g.node_count(), 0);
  for (NodeId root = 0; root < g.node_count(); ++root) {
    if (seen[root]) continue;
    // stack of (node, edge used to enter)
    std::vector<std::pair<NodeId, std::optional<EdgeId>>> stack{{root, std::nullopt}};
    while (!stack.empty()) {
      auto [v, via] = stack.back();
      stack.pop_back();
      if (seen[v]) return true;
      seen[v] = 1;
      auto nb = g.neighbors(v);
      auto inc = g.incident_edges(v);
      for (std::size_t k = 0; k < nb.size(); ++k) {
        if (!h.contains(inc[k]) || (via && *via == inc[k])) continue;
        if (seen[nb[k]]) return true;
        stack.push_back({nb[k], inc[k]});
      }
    }
  }
  return false;
}

std::vector<std::size_t> h_degrees(const Graph& g, const SubgraphIndicator& h) {
  std::vector<std::size_t> deg(g.node_count(), 0);
  for (EdgeId e : h.edge_ids()) {
    ++deg[g.edge(e).u];
    ++deg[g.edge(e).v];
  }
  return deg;
}

}  // namespace

std::vector<NodeId> components_union_find(const Graph& g, const SubgraphIndicator& h) {
  UnionFind uf(g.node_count());
  for (EdgeId e : h.edge_ids()) uf.unite(g.edge(e).u, g.edge(e).v);
  std::vector<NodeId> min_of(g.node_count(), std::numeric_limits<NodeId>::max());
  for (NodeId v = 0; v < g.node_count(); ++v) min_of[uf.find(v)] = std::min(min_of[uf.find(v)], v);
  std::vector<NodeId> label(g.node_count());
  for (NodeId v = 0; v < g.node_count(); ++v) label[v] = min_of[uf.find(v)];
  return label;
}

std::vector<NodeId> components_bfs(const Graph& g, const SubgraphIndicator& h) {
  std::vector<NodeId> label(g.node_count(), std::numeric_limits<NodeId>::max());
  for (NodeId v = 0; v < g.node_count(); ++v) {
    if (label[v] != std::numeric_limits<NodeId>::max()) continue;
    auto seen = reach(g, v, [&](EdgeId e) { return h.contains(e); });
    for (NodeId w = 0; w < g.node_count(); ++w)
      if (seen[w]) label[w] = v;  // v is the smallest id of its class: smaller ids were labelled earlier
  }
  return label;
}

bool two_colorable_bfs(const Graph& g, const SubgraphIndicator& h) {
  std::vector<int> color(g.node_count(), -1);
  for (NodeId root = 0; root < g.node_count(); ++root) {
    if (color[root] >= 0) continue;
    color[root] = 0;
    std::vector<NodeId> queue{root};
    for (std::size_t i = 0; i < queue.size(); ++i) {
      NodeId v = queue[i];
      auto nb = g.neighbors(v);
      auto inc = g.incident_edges(v);
      for (std::size_t k = 0; k < nb.size(); ++k) {
        if (!h.contains(inc[k])) continue;
        if (color[nb[k]] < 0) {
          color[nb[k]] = 1 - color[v];
          queue.push_back(nb[k]);
        } else if (color[nb[k]] == color[v]) {
          return false;
        }
      }
    }
  }
  return true;
}

bool two_colorable_parity_uf(const Graph& g, const SubgraphIndicator& h) {
  // node 2v = "v colored 0", 2v+1 = "v colored 1"; an edge joins opposite colors
  UnionFind uf(2 * g.node_count());
  for (EdgeId e : h.edge_ids()) {
    auto [a, b] = g.edge(e);
    uf.unite(2 * a, 2 * b + 1);
    uf.unite(2 * a + 1, 2 * b);
  }
  for (NodeId v = 0; v < g.node_count(); ++v)
    if (uf.find(2 * v) == uf.find(2 * v + 1)) return false;
  return true;
}

bool predicate(Problem p, const Graph& g, const SubgraphIndicator& h, const ExtraArgs& a) {
  h.check_host(g);
  auto in_h = [&](EdgeId e) { return h.contains(e); };
  auto not_h = [&](EdgeId e) { return !h.contains(e); };
  switch (p) {
    case Problem::scs:
      return all_set(reach(g, 0, in_h));
    case Problem::spt:
      return all_set(reach(g, 0, in_h)) && h.edge_count() + 1 == g.node_count();
    case Problem::cycle:
      return has_cycle_dfs(g, h);
    case Problem::conn: {
      auto deg = h_degrees(g, h);
      auto first = std::find_if(deg.begin(), deg.end(), [](auto d) { return d > 0; });
      if (first == deg.end()) return false;
      auto seen = reach(g, static_cast<NodeId>(first - deg.begin()), in_h);
      for (NodeId v = 0; v < g.node_count(); ++v)
        if (deg[v] > 0 && !seen[v]) return false;
      return true;
    }
    case Problem::cut:
      return !all_set(reach(g, 0, not_h));
    case Problem::stconn:
      return reach(g, a.s, in_h)[a.t] != 0;
    case Problem::stcut:
      return reach(g, a.s, not_h)[a.t] == 0;
    case Problem::eap: {
      auto e = designated(g, a);
      return reach(g, a.s, [&](EdgeId x) { return h.contains(x) && (!e || x != *e); })[a.t] == 0;
    }
    case Problem::ecycle: {
      auto e = designated(g, a);
      if (!e || !h.contains(*e)) return false;
      return reach(g, a.e.u, [&](EdgeId x) { return h.contains(x) && x != *e; })[a.e.v] != 0;
    }
    case Problem::bip:
      return two_colorable_bfs(g, h);
    case Problem::path: {
      auto deg = h_degrees(g, h);
      std::size_t ends = 0;
      NodeId end = 0;
      for (NodeId v = 0; v < g.node_count(); ++v) {
        if (deg[v] > 2) return false;
        if (deg[v] == 1) {
          ++ends;
          end = v;
        }
      }
      if (ends != 2 || has_cycle_dfs(g, h)) return false;
      auto seen = reach(g, end, in_h);
      for (NodeId v = 0; v < g.node_count(); ++v)
        if (deg[v] > 0 && !seen[v]) return false;
      return true;
    }
    case Problem::ham: {
      auto deg = h_degrees(g, h);
      if (std::any_of(deg.begin(), deg.end(), [](auto d) { return d != 2; })) return false;
      return all_set(reach(g, 0, in_h));
    }
  }
  return false;
}

bool predicate_alt(Problem p, const Graph& g, const SubgraphIndicator& h, const ExtraArgs& a) {
  h.check_host(g);
  const std::size_t n = g.node_count();
  auto uf_over = [&](auto use) {
    UnionFind uf(n);
    for (EdgeId e = 0; e < g.edge_count(); ++e)
      if (use(e)) uf.unite(g.edge(e).u, g.edge(e).v);
    return uf;
  };
  auto in_h = [&](EdgeId e) { return h.contains(e); };
  auto deg = h_degrees(g, h);
  const std::size_t isolated = static_cast<std::size_t>(std::count(deg.begin(), deg.end(), 0));
  const std::size_t eh = h.edge_count();
  switch (p) {
    case Problem::scs:
      return uf_over(in_h).components() == 1;
    case Problem::spt:
      return eh + 1 == n && uf_over(in_h).components() == 1;
    case Problem::cycle:
      return eh + uf_over(in_h).components() > n;
    case Problem::conn:
      return isolated < n && uf_over(in_h).components() - isolated == 1;
    case Problem::cut:
      return uf_over([&](EdgeId e) { return !h.contains(e); }).components() > 1;
    case Problem::stconn: {
      auto uf = uf_over(in_h);
      return uf.find(a.s) == uf.find(a.t);
    }
    case Problem::stcut: {
      auto uf = uf_over([&](EdgeId e) { return !h.contains(e); });
      return uf.find(a.s) != uf.find(a.t);
    }
    case Problem::eap: {
      auto e = designated(g, a);
      auto uf = uf_over([&](EdgeId x) { return h.contains(x) && (!e || x != *e); });
      return uf.find(a.s) != uf.find(a.t);
    }
    case Problem::ecycle: {
      auto e = designated(g, a);
      if (!e || !h.contains(*e)) return false;
      auto uf = uf_over([&](EdgeId x) { return h.contains(x) && x != *e; });
      return uf.find(a.e.u) == uf.find(a.e.v);
    }
    case Problem::bip:
      return two_colorable_parity_uf(g, h);
    case Problem::path: {
      std::size_t ones = 0;
      for (auto d : deg) {
        if (d > 2) return false;
        ones += d == 1;
      }
      const std::size_t vh = n - isolated;
      // a forest with one component on V(H) and two leaves is a path
      return ones == 2 && eh + 1 == vh && uf_over(in_h).components() - isolated == 1;
    }
    case Problem::ham:
      return std::all_of(deg.begin(), deg.end(), [](auto d) { return d == 2; }) && eh == n &&
             uf_over(in_h).components() == 1;
  }
  return false;
}

// Weighted optima ------------------------------------------------------------

std::vector<Weight> dijkstra(const Graph& g, NodeId src) {
  std::vector<Weight> dist(g.node_count(), kInfinity);
  using Item = std::pair<Weight, NodeId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  dist[src] = 0;
  pq.emplace(0, src);
  while (!pq.empty()) {
    auto [d, v] = pq.top();
    pq.pop();
    if (d != dist[v]) continue;
    auto nb = g.neighbors(v);
    auto inc = g.incident_edges(v);
    for (std::size_t k = 0; k < nb.size(); ++k) {
      Weight nd = d + g.weight(inc[k]);
      if (nd < dist[nb[k]]) {
        dist[nb[k]] = nd;
        pq.emplace(nd, nb[k]);
      }
    }
  }
  return dist;
}

std::vector<Weight> bellman_ford(const Graph& g, NodeId src) {
  std::vector<Weight> dist(g.node_count(), kInfinity);
  dist[src] = 0;
  for (std::size_t round = 0; round + 1 < g.node_count(); ++round) {
    bool changed = false;
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
      auto [a, b] = g.edge(e);
      Weight w = g.weight(e);
      if (dist[a] != kInfinity && dist[a] + w < dist[b]) dist[b] = dist[a] + w, changed = true;
      if (dist[b] != kInfinity && dist[b] + w < dist[a]) dist[a] = dist[b] + w, changed = true;
    }
    if (!changed) break;
  }
  return dist;
}

Weight shortest_path_tree_weight(const Graph& g, NodeId src) {
  auto dist = dijkstra(g, src);
  Weight total = 0;
  for (NodeId v = 0; v < g.node_count(); ++v) {
    if (dist[v] == kInfinity) return kInfinity;
    if (v == src) continue;
    Weight best = kInfinity;
    auto nb = g.neighbors(v);
    auto inc = g.incident_edges(v);
    for (std::size_t k = 0; k < nb.size(); ++k) {
      Weight w = g.weight(inc[k]);
      if (w == 0) throw GraphError("shortest-path tree weight needs positive weights");
      if (dist[nb[k]] != kInfinity && dist[nb[k]] + w == dist[v]) best = std::min(best, w);
    }
    total += best;
  }
  return total;
}

Weight stoer_wagner(const Graph& g) {
  const std::size_t n = g.node_count();
  if (n < 2) return 0;
  std::vector<std::vector<Weight>> w(n, std::vector<Weight>(n, 0));
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    auto [a, b] = g.edge(e);
    w[a][b] += g.weight(e);
    w[b][a] += g.weight(e);
  }
  std::vector<std::size_t> alive(n);
  std::iota(alive.begin(), alive.end(), 0);
  Weight best = kInfinity;
  while (alive.size() > 1) {
    std::vector<Weight> key(n, 0);
    std::vector<std::uint8_t> added(n, 0);
    std::size_t prev = alive[0], last = alive[0];
    for (std::size_t it = 0; it < alive.size(); ++it) {
      std::size_t pick = n;
      for (auto v : alive)
        if (!added[v] && (pick == n || key[v] > key[pick])) pick = v;
      added[pick] = 1;
      prev = last;
      last = pick;
      if (it + 1 == alive.size()) best = std::min(best, key[pick]);
      for (auto v : alive)
        if (!added[v]) key[v] += w[pick][v];
    }
    // merge last into prev
    for (auto v : alive) {
      w[prev][v] += w[last][v];
      w[v][prev] = w[prev][v];
    }
    alive.erase(std::find(alive.begin(), alive.end(), last));
  }
  return best;
}

Weight min_cut_brute_force(const Graph& g) {
  const std::size_t n = g.node_count();
  if (n > 20) throw GraphError("brute-force min cut limited to 20 nodes");
  if (n < 2) return 0;
  Weight best = kInfinity;
  // node n-1 always on side 0
  for (std::uint32_t mask = 1; mask < (1u << (n - 1)); ++mask) {
    Weight c = 0;
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
      auto [a, b] = g.edge(e);
      bool sa = (mask >> a) & 1, sb = (mask >> b) & 1;
      if (sa != sb) c += g.weight(e);
    }
    best = std::min(best, c);
  }
  return best;
}

Weight min_st_cut(const Graph& g, NodeId s, NodeId t) {
  if (s == t) throw GraphError("s-t cut needs distinct terminals");
  const std::size_t n = g.node_count();
  // residual capacity per incidence; an undirected edge is two opposite arcs
  std::vector<Weight> cap(g.incidence_count());
  std::vector<std::size_t> rev(g.incidence_count());
  for (NodeId v = 0; v < n; ++v) {
    auto nb = g.neighbors(v);
    auto inc = g.incident_edges(v);
    for (std::size_t k = 0; k < nb.size(); ++k) {
      cap[g.incidence_offset(v) + k] = g.weight(inc[k]);
      rev[g.incidence_offset(v) + k] = g.incidence_offset(nb[k]) + *g.port_of(nb[k], v);
    }
  }
  Weight flow = 0;
  while (true) {
    std::vector<std::size_t> via(n, std::numeric_limits<std::size_t>::max());
    std::vector<std::uint8_t> seen(n, 0);
    std::vector<NodeId> queue{s};
    seen[s] = 1;
    for (std::size_t i = 0; i < queue.size() && !seen[t]; ++i) {
      NodeId v = queue[i];
      auto nb = g.neighbors(v);
      for (std::size_t k = 0; k < nb.size(); ++k) {
        auto slot = g.incidence_offset(v) + k;
        if (seen[nb[k]] || cap[slot] == 0) continue;
        seen[nb[k]] = 1;
        via[nb[k]] = slot;
        queue.push_back(nb[k]);
      }
    }
    if (!seen[t]) return flow;
    Weight push = kInfinity;
    for (NodeId v = t; v != s;) {
      auto slot = via[v];
      push = std::min(push, cap[slot]);
      v = g.neighbors(v)[rev[slot] - g.incidence_offset(v)];
    }
    for (NodeId v = t; v != s;) {
      auto slot = via[v];
      cap[slot] -= push;
      cap[rev[slot]] += push;
      v = g.neighbors(v)[rev[slot] - g.incidence_offset(v)];
    }
    flow += push;
  }
}

Weight min_st_cut_brute_force(const Graph& g, NodeId s, NodeId t) {
  const std::size_t n = g.node_count();
  if (n > 20) throw GraphError("brute-force s-t cut limited to 20 nodes");
  if (s == t) throw GraphError("s-t cut needs distinct terminals");
  Weight best = kInfinity;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    if (!((mask >> s) & 1) || ((mask >> t) & 1)) continue;
    Weight c = 0;
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
      auto [a, b] = g.edge(e);
      if (((mask >> a) & 1) != ((mask >> b) & 1)) c += g.weight(e);
    }
    best = std::min(best, c);
  }
  return best;
}

Weight min_routing_cost_tree(const Graph& g) {
  const std::size_t n = g.node_count();
  if (n > 10 || g.edge_count() > 24) throw GraphError("routing-cost oracle limited to n <= 10, m <= 24");
  if (n == 1) return 0;
  Weight best = kInfinity;
  std::vector<EdgeId> chosen;
  // routing cost of a tree = Σ_e w(e)·|S_e|·(n-|S_e|), S_e one side of e
  auto cost = [&] {
    Weight total = 0;
    for (std::size_t i = 0; i < chosen.size(); ++i) {
      UnionFind uf(n);
      for (std::size_t j = 0; j < chosen.size(); ++j)
        if (j != i) uf.unite(g.edge(chosen[j]).u, g.edge(chosen[j]).v);
      std::size_t side = 0;
      auto root = uf.find(g.edge(chosen[i]).u);
      for (NodeId v = 0; v < n; ++v) side += uf.find(v) == root;
      total += g.weight(chosen[i]) * side * (n - side);
    }
    return total;
  };
  std::function<void(EdgeId)> rec = [&](EdgeId next) {
    if (chosen.size() + 1 == n) {
      best = std::min(best, cost());
      return;
    }
    if (next >= g.edge_count() || g.edge_count() - next < n - 1 - chosen.size()) return;
    UnionFind uf(n);
    for (EdgeId e : chosen) uf.unite(g.edge(e).u, g.edge(e).v);
    if (uf.find(g.edge(next).u) != uf.find(g.edge(next).v)) {
      chosen.push_back(next);
      rec(next + 1);
      chosen.pop_back();
    }
    rec(next + 1);
  };
  rec(0);
  return best;
}

// LE lists --------------------------------------------------------------------

LeList le_list(const Graph& g, std::span<const std::uint64_t> rank, NodeId u) {
  auto dist = dijkstra(g, u);
  std::vector<NodeId> order;
  for (NodeId v = 0; v < g.node_count(); ++v)
    if (dist[v] != kInfinity) order.push_back(v);
  std::sort(order.begin(), order.end(), [&](NodeId a, NodeId b) {
    return std::make_pair(dist[a], rank[a]) < std::make_pair(dist[b], rank[b]);
  });
  LeList out;
  std::uint64_t best = std::numeric_limits<std::uint64_t>::max();
  for (std::size_t i = 0; i < order.size();) {
    // nodes at equal distance form one group; only the group's minimum can qualify
    std::size_t j = i;
    while (j < order.size() && dist[order[j]] == dist[order[i]]) ++j;
    NodeId cand = order[i];
    if (rank[cand] < best) {
      out.emplace_back(cand, dist[cand]);
      best = rank[cand];
    }
    i = j;
  }
  return out;
}

LeList le_list_brute_force(const Graph& g, std::span<const std::uint64_t> rank, NodeId u) {
  auto dist = bellman_ford(g, u);
  LeList out;
  for (NodeId v = 0; v < g.node_count(); ++v) {
    if (dist[v] == kInfinity) continue;
    bool least = true;
    for (NodeId w = 0; w < g.node_count() && least; ++w)
      if (w != v && dist[w] <= dist[v] && rank[w] <= rank[v]) least = false;
    if (least) out.emplace_back(v, dist[v]);
  }
  std::sort(out.begin(), out.end(), [](auto a, auto b) { return std::tie(a.second, a.first) < std::tie(b.second, b.first); });
  return out;
}

bool le_list_matches(const Graph& g, std::span<const std::uint64_t> rank, NodeId u, LeList candidate) {
  auto truth = le_list(g, rank, u);
  std::sort(candidate.begin(), candidate.end());
  std::sort(truth.begin(), truth.end());
  return candidate == truth;
}

bool disj(const std::vector<bool>& x, const std::vector<bool>& y) {
  for (std::size_t i = 0; i < std::min(x.size(), y.size()); ++i)
    if (x[i] && y[i]) return false;
  return true;
}

bool eq(const std::vector<bool>& x, const std::vector<bool>& y) { return x == y; }

}  // namespace dverify::oracle
