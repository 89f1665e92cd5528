#include <random>

#include "doctest.h"
#include "dverify/mst.hpp"
#include "dverify/oracles.hpp"

using namespace dverify;
namespace o = dverify::oracle;

namespace {

SubgraphIndicator random_subgraph(const Graph& g, double p, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(p);
  std::vector<bool> in(g.edge_count());
  for (std::size_t e = 0; e < in.size(); ++e) in[e] = coin(rng);
  return SubgraphIndicator::from_edges(g, in);
}

}  // namespace

TEST_CASE("distributed MST matches Kruskal") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t n = 1 + rng() % 60;
    std::size_t m = std::min(n * (n - 1) / 2, n - 1 + rng() % (3 * n));
    Weight hi = trial % 3 == 0 ? 3 : 1000;  // many ties on the first kind
    auto g = with_random_weights(generate_random(RandomKind::connected_gnm, n, m, rng()), 1, hi, rng());
    SimConfig cfg;
    cfg.seed = trial;
    if (trial % 4 == 1) {
      cfg.bandwidth = 3;  // every message spans many frames
      cfg.max_rounds = 1000000;
    }
    auto [res, stats] = distributed_mst(g, cfg);
    auto ref = o::kruskal(g);
    INFO("trial " << trial << " n=" << n << " m=" << m);
    REQUIRE(res.edges.edge_ids() == ref.edges);
    CHECK(res.total_weight == ref.total);
    CHECK(res.spanning);
    for (Weight t : res.weight_seen) CHECK(t == ref.total);
    CHECK(stats.max_message_bits <= stats.bandwidth);
  }
}

TEST_CASE("distributed MST on a disconnected graph yields the spanning forest") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    std::size_t n = 2 + rng() % 40;
    auto g = with_random_weights(generate_random(RandomKind::gnm, n, rng() % n, rng()), 1, 50, rng());
    SimConfig cfg;
    cfg.max_rounds = 100000;
    auto [res, stats] = distributed_mst(g, cfg);
    auto ref = o::kruskal(g);
    REQUIRE(res.edges.edge_ids() == ref.edges);
    CHECK(res.spanning == ref.spanning);
  }
}

TEST_CASE("component labels and forest coloring") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 150; ++trial) {
    std::size_t n = 1 + rng() % 50;
    std::size_t m = std::min(n * (n - 1) / 2, n - 1 + rng() % (2 * n));
    auto g = generate_random(RandomKind::connected_gnm, n, m, rng());
    auto h = random_subgraph(g, 0.15 + 0.8 * (rng() % 100) / 100.0, rng);
    SimConfig cfg;
    if (trial % 3 == 0) {
      cfg.bandwidth = 4;
      cfg.max_rounds = 1000000;
    }
    auto [lab, stats] = distributed_components(g, h, cfg);
    INFO("trial " << trial);
    REQUIRE(lab.label == o::components_union_find(g, h));
    if (o::two_colorable_bfs(g, h)) {
      for (EdgeId e : h.edge_ids()) CHECK(lab.color[g.edge(e).u] != lab.color[g.edge(e).v]);
    }
  }
}

TEST_CASE("rooted forest levels") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    std::size_t n = 2 + rng() % 40;
    std::size_t m = std::min(n * (n - 1) / 2, n - 1 + rng() % (2 * n));
    auto g = generate_random(RandomKind::connected_gnm, n, m, rng());
    auto h = random_subgraph(g, 0.5, rng);
    auto [lv, stats] = rooted_forest_levels(g, h, SimConfig{});
    auto comp = o::components_union_find(g, h);
    REQUIRE(lv.root == comp);
    std::vector<int> tree_edges(n, 0);
    for (NodeId v = 0; v < n; ++v) {
      if (lv.root[v] == v) {
        CHECK(lv.depth[v] == 0);
        CHECK_FALSE(lv.parent[v].has_value());
        continue;
      }
      REQUIRE(lv.parent[v].has_value());
      NodeId p = *lv.parent[v];
      CHECK(h.contains(*g.find_edge(v, p)));
      CHECK(lv.depth[v] == lv.depth[p] + 1);
    }
  }
}

TEST_CASE("pipeline on tiny graphs") {
  Graph one(1, {});
  auto [r1, s1] = distributed_mst(one, SimConfig{});
  CHECK(r1.spanning);
  CHECK(s1.rounds_used == 1);
  Graph two(2, {{0, 1}}, {7});
  auto [r2, s2] = distributed_mst(two, SimConfig{});
  CHECK(r2.total_weight == 7);
  CHECK(r2.spanning);
}

TEST_CASE("pipeline round counts") {
  std::vector<Edge> path;
  for (NodeId i = 0; i + 1 < 200; ++i) path.push_back({i, i + 1});
  Graph p(200, path);
  auto [res, stats] = distributed_mst(p, SimConfig{});
  CHECK(res.spanning);
  CHECK(stats.rounds_used <= 15 * 200);
  auto g = with_random_weights(generate_random(RandomKind::connected_gnm, 1024, 4096, 4), 1, 1000, 5);
  auto [res2, stats2] = distributed_mst(g, SimConfig{});
  CHECK(res2.spanning);
  CHECK(stats2.rounds_used <= 8 * (g.diameter() + 1) * id_bits(1024));
}

TEST_CASE("pipeline is identical under parallel stepping") {
  auto g = with_random_weights(generate_random(RandomKind::connected_gnm, 300, 900, 6), 1, 9, 7);
  SimConfig seq, par;
  par.threads = 4;
  auto a = distributed_mst(g, seq);
  auto b = distributed_mst(g, par);
  CHECK(a.second == b.second);
  CHECK(a.first.edges == b.first.edges);
}

TEST_CASE("component and level examples") {
  Graph g(4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}});
  auto [all, s1] = distributed_components(g, SubgraphIndicator::all(g), {});
  CHECK(all.label == std::vector<NodeId>{0, 0, 0, 0});
  auto [none, s2] = distributed_components(g, SubgraphIndicator(g), {});
  CHECK(none.label == std::vector<NodeId>{0, 1, 2, 3});
  auto path = SubgraphIndicator::from_edge_list(g, std::vector<Edge>{{0, 1}, {1, 2}});
  auto [lv, s3] = rooted_forest_levels(g, path, {});
  CHECK(lv.depth == std::vector<std::uint32_t>{0, 1, 2, 0});
  CHECK(lv.root == std::vector<NodeId>{0, 0, 0, 3});
  auto [flat, s4] = rooted_forest_levels(g, SubgraphIndicator(g), {});
  CHECK(flat.depth == std::vector<std::uint32_t>{0, 0, 0, 0});
}
