#include <random>

#include "doctest.h"
#include "dverify/oracles.hpp"
#include "dverify/verifiers.hpp"
#include "instances.hpp"

using namespace dverify;
namespace o = dverify::oracle;
using namespace dverify::testing;

TEST_CASE("verifiers agree with the centralized oracles") {
  std::mt19937_64 rng(42);
  for (Problem p : kAllProblems) {
    int accepted = 0, total = 0;
    for (int trial = 0; trial < 500; ++trial) {
      auto inst = make_instance(rng);
      SimConfig cfg;
      cfg.seed = trial;
      auto [verdict, stats] = verify(p, inst.g, inst.h, inst.args, cfg);
      bool expect = o::predicate(p, inst.g, inst.h, inst.args);
      INFO(problem_name(p) << " trial " << trial << " n=" << inst.g.node_count());
      REQUIRE(verdict.accepted == expect);
      REQUIRE(verdict.agreement);
      CHECK(stats.max_message_bits <= stats.bandwidth);
      accepted += verdict.accepted;
      ++total;
    }
    INFO(problem_name(p) << " accepted " << accepted << "/" << total);
    CHECK(accepted >= 25);
    CHECK(total - accepted >= 25);
  }
}

TEST_CASE("verifier textbook cases") {
  Graph c4(4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}, {0, 2}});
  SimConfig cfg;
  auto all = SubgraphIndicator::all(c4);
  auto ring = SubgraphIndicator::from_edge_list(c4, std::vector<Edge>{{0, 1}, {1, 2}, {2, 3}, {0, 3}});
  auto tri = SubgraphIndicator::from_edge_list(c4, std::vector<Edge>{{0, 1}, {1, 2}, {0, 2}});
  auto path = SubgraphIndicator::from_edge_list(c4, std::vector<Edge>{{0, 1}, {1, 2}, {2, 3}});
  auto empty = SubgraphIndicator(c4);
  CHECK(verify_spanning_connected_subgraph(c4, all, cfg).first.accepted);
  CHECK_FALSE(verify_spanning_connected_subgraph(c4, tri, cfg).first.accepted);
  CHECK(verify_spanning_tree(c4, path, cfg).first.accepted);
  CHECK_FALSE(verify_spanning_tree(c4, ring, cfg).first.accepted);
  CHECK(verify_cycle_containment(c4, tri, cfg).first.accepted);
  CHECK_FALSE(verify_cycle_containment(c4, empty, cfg).first.accepted);
  CHECK(verify_connectivity(c4, SubgraphIndicator::from_edge_list(c4, std::vector<Edge>{{2, 3}}), cfg).first.accepted);
  CHECK_FALSE(
      verify_connectivity(c4, SubgraphIndicator::from_edge_list(c4, std::vector<Edge>{{0, 1}, {2, 3}}), cfg).first.accepted);
  CHECK(verify_cut(c4, SubgraphIndicator::from_edge_list(c4, std::vector<Edge>{{0, 1}, {1, 2}}), cfg).first.accepted);
  CHECK_FALSE(verify_cut(c4, empty, cfg).first.accepted);
  CHECK(verify_st_connectivity(c4, empty, 2, 2, cfg).first.accepted);
  CHECK_FALSE(verify_st_connectivity(c4, empty, 1, 2, cfg).first.accepted);
  CHECK(verify_st_cut(c4, SubgraphIndicator::from_edge_list(c4, std::vector<Edge>{{0, 1}, {1, 2}}), 1, 3, cfg)
            .first.accepted);
  CHECK(verify_edge_on_all_paths(c4, path, 0, 3, {1, 2}, cfg).first.accepted);
  CHECK_FALSE(verify_edge_on_all_paths(c4, ring, 0, 2, {1, 2}, cfg).first.accepted);
  CHECK(verify_e_cycle(c4, tri, {0, 2}, cfg).first.accepted);
  CHECK_FALSE(verify_e_cycle(c4, path, {1, 2}, cfg).first.accepted);
  CHECK(verify_bipartiteness(c4, ring, cfg).first.accepted);
  CHECK_FALSE(verify_bipartiteness(c4, tri, cfg).first.accepted);
  CHECK(verify_simple_path(c4, path, cfg).first.accepted);
  CHECK_FALSE(verify_simple_path(c4, ring, cfg).first.accepted);
  CHECK(verify_hamiltonian_cycle(c4, ring, cfg).first.accepted);
  CHECK_FALSE(verify_hamiltonian_cycle(c4, tri, cfg).first.accepted);
}

TEST_CASE("adding H-edges inside V(H) never breaks connectivity") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 60; ++trial) {
    auto inst = make_instance(rng);
    auto before = verify_connectivity(inst.g, inst.h, {}).first.accepted;
    auto h = inst.h;
    auto deg = [&](NodeId v) { return h.degree(inst.g, v); };
    for (EdgeId e = 0; e < inst.g.edge_count(); ++e)
      if (!h.contains(e) && deg(inst.g.edge(e).u) > 0 && deg(inst.g.edge(e).v) > 0) {
        h.set(e, true);
        break;
      }
    if (before) CHECK(verify_connectivity(inst.g, h, {}).first.accepted);
  }
}

TEST_CASE("verifier rounds stay within MST rounds plus 5D") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 30; ++trial) {
    std::size_t n = 16 + rng() % 200;
    auto g = generate_random(RandomKind::connected_gnm, n, (1 + rng() % 5) * n, rng());
    std::vector<bool> in(g.edge_count());
    for (std::size_t e = 0; e < in.size(); ++e) in[e] = rng() % 4 != 0;
    auto h = SubgraphIndicator::from_edges(g, in);
    ExtraArgs a{0, static_cast<NodeId>(n - 1), g.edge(0)};
    std::vector<Weight> light_h(g.edge_count()), light_rest(g.edge_count());
    for (std::size_t e = 0; e < in.size(); ++e) {
      light_h[e] = in[e] ? 0 : 1;
      light_rest[e] = in[e] ? 1 : 0;
    }
    auto mst_h = distributed_mst(g.with_weights(light_h), {}).second.rounds_used;
    auto mst_rest = distributed_mst(g.with_weights(light_rest), {}).second.rounds_used;
    for (Problem p : kAllProblems) {
      auto base = p == Problem::cut || p == Problem::stcut ? mst_rest : mst_h;
      auto rounds = verify(p, g, h, a, {}).first.rounds;
      INFO(problem_name(p) << " n=" << n << " D=" << g.diameter());
      CHECK(rounds <= base + 5 * g.diameter());
    }
  }
}
