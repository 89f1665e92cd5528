#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <set>

#include "doctest.h"
#include "dverify/family.hpp"
#include "dverify/graph.hpp"

using namespace dverify;

namespace {

std::uint32_t brute_diameter(const Graph& g) {
  std::uint32_t best = 0;
  for (NodeId s = 0; s < g.node_count(); ++s)
    for (auto d : bfs_distances(g, s)) best = std::max(best, d);
  return best;
}

bool acyclic(const Graph& g) {
  std::vector<NodeId> parent(g.node_count());
  for (NodeId v = 0; v < g.node_count(); ++v) parent[v] = v;
  auto find = [&](NodeId x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& e : g.edges()) {
    auto a = find(e.u), b = find(e.v);
    if (a == b) return false;
    parent[a] = b;
  }
  return true;
}

std::string temp_path(const char* name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_CASE("graph rejects self loops and duplicates") {
  CHECK_THROWS_AS(Graph(3, {{1, 1}}), GraphError);
  CHECK_THROWS_AS(Graph(3, {{0, 1}, {1, 0}}), GraphError);
  CHECK_THROWS_AS(Graph(3, {{0, 3}}), GraphError);
  CHECK_THROWS_AS(Graph(3, {{0, 1}}, {}), GraphError);
}

TEST_CASE("ports are sorted neighbour ranks") {
  Graph g(5, {{4, 0}, {0, 2}, {3, 0}, {1, 2}});
  auto nb = g.neighbors(0);
  CHECK(std::vector<NodeId>(nb.begin(), nb.end()) == std::vector<NodeId>{2, 3, 4});
  CHECK(*g.port_of(0, 3) == 1);
  CHECK(!g.port_of(0, 1));
  for (NodeId v = 0; v < 5; ++v)
    for (std::size_t k = 0; k < g.degree(v); ++k) {
      const auto& e = g.edge(g.incident_edges(v)[k]);
      CHECK((e.u == v ? e.v : e.u) == g.neighbors(v)[k]);
    }
}

TEST_CASE("diameter") {
  CHECK(Graph(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}}).diameter() == 4);
  CHECK(Graph(3, {{0, 1}}).diameter() == kUnreachable);
  CHECK(Graph(1, {}).diameter() == 0);
}

TEST_CASE("subgraph indicator consistency") {
  Graph g(3, {{0, 1}, {1, 2}, {0, 2}});
  // incidence layout: 0:[1,2] 1:[0,2] 2:[0,1]
  std::vector<std::uint8_t> ok{1, 0, 1, 1, 0, 1};
  auto h = SubgraphIndicator::from_incidences(g, ok);
  CHECK(h.edge_count() == 2);
  CHECK(h.at(g, 2, 1));
  CHECK_FALSE(h.at(g, 0, 1));
  std::vector<std::uint8_t> bad{1, 0, 0, 1, 0, 1};
  CHECK_THROWS_AS(SubgraphIndicator::from_incidences(g, bad), GraphError);
  CHECK(h.complement().edge_count() == 1);
}

TEST_CASE("file round trips") {
  Graph k3(3, {{0, 1}, {1, 2}, {0, 2}});
  auto path = temp_path("dverify_k3.txt");
  write_graph(k3, path);
  auto back = read_graph(path);
  CHECK(std::ranges::equal(back.edges(), k3.edges()));

  Graph w(4, {{0, 1}, {1, 2}, {2, 3}}, {7, 0, 18446744073709551615ull});
  auto back_w = parse_graph(format_graph(w));
  CHECK(back_w.weighted());
  CHECK(std::ranges::equal(back_w.weights(), w.weights()));

  auto h = SubgraphIndicator::from_edge_list(k3, std::vector<Edge>{{0, 2}});
  write_subgraph(h, k3, path);
  CHECK(read_subgraph(path, k3) == h);
  std::remove(path.c_str());

  Graph p3(3, {{0, 1}, {1, 2}});
  CHECK_THROWS_AS(parse_subgraph("0 2\n", p3), GraphError);
  CHECK_THROWS_AS(parse_graph("3 1\n0 x\n"), GraphError);
  CHECK_THROWS_AS(parse_graph("3 2\n0 1\n"), GraphError);
}

TEST_CASE("random generators") {
  auto k4 = generate_random(RandomKind::gnm, 4, 6, 1);
  CHECK(k4.edge_count() == 6);
  auto tree = generate_random(RandomKind::connected_gnm, 100, 99, 7);
  CHECK(tree.connected());
  CHECK(acyclic(tree));
  auto a = generate_random(RandomKind::gnm, 50, 100, 3);
  auto b = generate_random(RandomKind::gnm, 50, 100, 3);
  CHECK(std::ranges::equal(a.edges(), b.edges()));
  CHECK_THROWS_AS(generate_random(RandomKind::gnm, 4, 7, 1), GraphError);
  CHECK_THROWS_AS(generate_random(RandomKind::connected_gnm, 10, 8, 1), GraphError);
}

TEST_CASE("family graph structure") {
  auto fg = generate_family({4, 2, 2});
  CHECK(fg.graph.node_count() == 23);
  // paths of length 3 shortcut the tree route, so 5 rather than 2p+2
  CHECK(fg.graph.diameter() == 5);
  CHECK(fg.graph.diameter() == brute_diameter(fg.graph));
  CHECK(fg.tree_node(0, 0) == 0);
  CHECK(fg.s() == fg.tree_node(2, 0));
  CHECK(fg.r() == fg.tree_node(2, 3));
  for (std::size_t l = 1; l <= 4; ++l)
    for (std::size_t j = 0; j < 4; ++j) CHECK(fg.graph.find_edge(fg.tree_node(2, j), fg.path_node(l, j)));

  auto tiny = generate_family({1, 2, 1});
  CHECK(tiny.graph.node_count() == 5);
  CHECK(tiny.s() == 1);
  CHECK(tiny.r() == 2);

  auto f332 = generate_family({3, 3, 2});
  CHECK(f332.graph.diameter() == brute_diameter(f332.graph));
  CHECK(f332.graph.diameter() == 6);

  CHECK_THROWS_AS(generate_family({1, 2, 64}), GraphError);
  CHECK_THROWS_AS(generate_family({1, 1, 2}), GraphError);
}

TEST_CASE("hamiltonian family variant") {
  auto fg = generate_family_ham(1, 2);
  CHECK(fg.params.gamma == 14);
  const auto m = fg.params.m();
  for (std::size_t i = 1; i <= 14; ++i)
    for (std::size_t j = i + 1; j <= 14; ++j) {
      CHECK(fg.graph.find_edge(fg.path_node(i, 0), fg.path_node(j, 0)));
      CHECK(fg.graph.find_edge(fg.path_node(i, m), fg.path_node(j, m)));
    }

  auto f3 = generate_family_ham(1, 3);
  for (std::size_t i = 0; i + 1 <= f3.params.m(); ++i)
    CHECK(f3.graph.find_edge(f3.tree_node(3, i), f3.tree_node(3, i + 1)));

  // connector from u_1^1 reaches u_5^3 through two fresh nodes
  auto f = generate_family_ham(2, 3);
  NodeId start = f.tree_node(1, 1), goal = f.tree_node(3, 5);
  std::vector<int> dist(f.graph.node_count(), -1);
  std::vector<NodeId> queue{start};
  dist[start] = 0;
  for (std::size_t h = 0; h < queue.size(); ++h)
    for (NodeId w : f.graph.neighbors(queue[h])) {
      if (dist[w] >= 0) continue;
      if (w != goal && !f.is_extra_node(w)) continue;
      dist[w] = dist[queue[h]] + 1;
      if (w != goal) queue.push_back(w);
    }
  CHECK(dist[goal] == 3);

  CHECK_THROWS_AS(generate_family_ham(0, 2), GraphError);
  for (std::size_t e = 0; e < fg.graph.edge_count(); ++e) {
    if (fg.edge_class[e] != EdgeClass::extra) {
      const auto& ed = fg.graph.edge(e);
      CHECK_FALSE(fg.is_extra_node(ed.u));
      CHECK_FALSE(fg.is_extra_node(ed.v));
    }
  }
}
