#include <algorithm>
#include <random>

#include "doctest.h"
#include "dverify/gadgets.hpp"
#include "dverify/oracles.hpp"

using namespace dverify;
namespace o = dverify::oracle;

namespace {

bool brute_disj(const InputPair& in) { return o::disj(in.x, in.y); }

SimConfig small_config() {
  SimConfig c;
  c.bandwidth = 8;
  return c;
}

// Every node halts at step 1; s outputs x_1 and r outputs y_1.
class FirstBitNode final : public NodeProgram {
 public:
  explicit FirstBitNode(const NodeContext& ctx) : bit_(!ctx.input.empty() && ctx.input.bit(0)) {}
  StepStatus step(std::uint64_t, std::span<const Message>, std::span<Message>) override {
    return StepStatus::halt(bit_);
  }

 private:
  bool bit_;
};

// A random spanning tree plus extra edges, the same with one tree edge dropped, or a sparse random subset.
SubgraphIndicator random_h(const Graph& g, std::mt19937_64& rng) {
  SubgraphIndicator h(g);
  const auto mode = rng() % 3;
  if (mode == 2) {
    for (EdgeId e = 0; e < g.edge_count(); ++e) h.set(e, rng() % 4 == 0);
    return h;
  }
  auto tree = o::kruskal(with_random_weights(g, 1, 1000, rng())).edges;
  for (EdgeId e : tree) h.set(e, true);
  for (EdgeId e = 0; e < g.edge_count(); ++e)
    if (rng() % 5 == 0) h.set(e, true);
  if (mode == 1) h.set(tree[rng() % tree.size()], false);
  return h;
}

}  // namespace

TEST_CASE("input pairs and centralized disj / eq") {
  auto in = InputPair::parse("0101", "1010");
  CHECK(eval_disj(in));
  CHECK_FALSE(eval_eq(in));
  CHECK(eval_eq(InputPair::parse("0110", "0110")));
  CHECK_THROWS_AS(InputPair::parse("01", "0"), std::invalid_argument);
  CHECK_THROWS_AS(InputPair::parse("0a", "01"), std::invalid_argument);
  for (std::uint64_t code = 0; code < 256; ++code) {
    auto p = InputPair::enumerate(4, code);
    CHECK(eval_disj(p) == brute_disj(p));
    CHECK(eval_eq(p) == o::eq(p.x, p.y));
  }
}

TEST_CASE("family gadgets match their target predicate on every pair") {
  auto f = generate_family({4, 2, 2});
  struct Want {
    Problem p;
    bool equals_disj;
  };
  for (auto [p, equals_disj] : {Want{Problem::scs, true}, Want{Problem::stconn, false}, Want{Problem::cycle, false},
                                Want{Problem::ecycle, false}, Want{Problem::bip, true}}) {
    CAPTURE(problem_name(p));
    std::size_t ok = 0;
    for (std::uint64_t code = 0; code < 256; ++code) {
      auto in = InputPair::enumerate(4, code);
      auto gadget = build_gadget(p, f, in);
      bool want = equals_disj == brute_disj(in);
      bool central = o::predicate(p, f.graph, gadget.h, gadget.args);
      if (p == Problem::bip) central = central && o::two_colorable_bfs(gadget.split->graph, gadget.h_split);
      auto v = run_gadget(f, gadget, {});
      ok += central == want && v.accepted == want && v.agreement;
    }
    CHECK(ok == 256);
  }
}

TEST_CASE("gadget examples") {
  auto f = generate_family({4, 2, 2});
  auto all_zero = build_gadget(Problem::scs, f, InputPair::parse("0000", "0000"));
  for (std::size_t i = 1; i <= 4; ++i) {
    CHECK(all_zero.h.contains(*f.graph.find_edge(f.s(), f.path_node(i, 0))));
    CHECK(all_zero.h.contains(*f.graph.find_edge(f.r(), f.path_node(i, f.params.m()))));
  }
  CHECK(run_gadget(f, all_zero, {}).accepted);
  CHECK_FALSE(run_gadget(f, build_gadget(Problem::scs, f, InputPair::parse("1000", "1000")), {}).accepted);

  auto e = build_gadget(Problem::ecycle, f, InputPair::parse("0010", "0010"));
  CHECK(e.args.e == make_edge(f.s(), f.tree_parent(f.s())));
  CHECK(run_gadget(f, e, {}).accepted);

  // Short inputs pad with zeros.
  auto short_in = build_gadget(Problem::stconn, f, InputPair::parse("01", "01"));
  CHECK(run_gadget(f, short_in, {}).accepted);
  CHECK_THROWS_AS(build_gadget(Problem::scs, f, InputPair::parse("00000", "00000")), std::invalid_argument);
  CHECK_THROWS_AS(build_gadget(Problem::ham, f, InputPair::parse("0", "0")), std::invalid_argument);
}

TEST_CASE("bip split variant: odd d^p puts the odd cycle in H'") {
  auto f = generate_family({3, 3, 1});  // d^p = 3
  std::size_t ok = 0, h_only = 0, split_only = 0;
  for (std::uint64_t code = 0; code < 64; ++code) {
    auto in = InputPair::enumerate(3, code);
    auto g = build_gadget(Problem::bip, f, in);
    bool h_bip = o::two_colorable_bfs(f.graph, g.h);
    bool split_bip = o::two_colorable_bfs(g.split->graph, g.h_split);
    h_only += !h_bip;
    split_only += !split_bip;
    ok += run_gadget(f, g, {}).accepted == eval_disj(in);
  }
  CHECK(ok == 64);
  CHECK(h_only == 0);
  CHECK(split_only > 0);
}

TEST_CASE("hosted run equals the direct run on the virtual graph") {
  auto f = generate_family({2, 2, 2});
  for (std::uint64_t code : {0u, 5u, 9u, 15u}) {
    auto g = build_gadget(Problem::bip, f, InputPair::enumerate(2, code));
    const Graph& vg = g.split->graph;
    SimConfig c;
    c.bandwidth = 4 * id_bits(vg.node_count());
    auto direct = verify(Problem::bip, vg, g.h_split, g.args, c).first;
    VerifierPlan plan(Problem::bip, vg.node_count(), g.args);
    auto cfg = pipeline_config(f.graph, c);
    auto hosted = verdict_of(run(f.graph, hosted_factory(f.graph, g.split, plan.factory(vg, g.h_split), c.bandwidth),
                                 {}, cfg));
    CHECK(direct.accepted == hosted.accepted);
    CHECK(hosted.agreement);
  }
  VirtualGraph bad{Graph(3, {{0, 1}, {0, 2}}), {0, 1, 1}};  // both ride edge 0-1
  CHECK_THROWS_AS(bad.validate(Graph(2, {{0, 1}})), GraphError);
}

TEST_CASE("Hamiltonian gadget: a Hamiltonian cycle iff x = y") {
  CHECK(ham_pattern({false}).size() == 14);
  CHECK(ham_pattern({true, false}) == std::vector<bool>{1, 1, 0, 1, 1, 0, 1, 0, 0, 1, 0, 0, 1, 0, 0, 1,
                                                         0, 0, 1, 1, 0, 1, 1, 0, 1, 0});
  for (std::size_t b : {1u, 2u}) {
    auto f = generate_family_ham(b, 2);
    std::size_t ok = 0, total = std::size_t{1} << (2 * b);
    for (std::uint64_t code = 0; code < total; ++code) {
      auto in = InputPair::enumerate(b, code);
      auto h = build_hamiltonian_gadget(f, in);
      ok += o::predicate(Problem::ham, f.graph, h, {}) == eval_eq(in);
    }
    CHECK(ok == total);
  }
  auto f = generate_family_ham(1, 2);
  CHECK(verify_hamiltonian_cycle(f.graph, build_hamiltonian_gadget(f, InputPair::parse("0", "0")), {}).first.accepted);
  CHECK_FALSE(
      verify_hamiltonian_cycle(f.graph, build_hamiltonian_gadget(f, InputPair::parse("0", "1")), {}).first.accepted);
  CHECK_THROWS_AS(build_hamiltonian_gadget(f, InputPair::parse("01", "01")), std::invalid_argument);
}

TEST_CASE("least-element list instance") {
  std::mt19937_64 rng(11);
  std::size_t valid = 0;
  for (int it = 0; it < 200; ++it) {
    std::size_t n = 4 + rng() % 30;
    Graph g = generate_random(RandomKind::connected_gnm, n, std::min(n * (n - 1) / 2, n + rng() % (2 * n)), rng());
    SubgraphIndicator h(g);
    for (EdgeId e = 0; e < g.edge_count(); ++e) h.set(e, rng() % 3 == 0);
    NodeId s = rng() % n, t = (s + 1 + rng() % (n - 1)) % n;
    auto inst = build_le_list_instance(g, h, s, t);
    CHECK(inst.rank[s] == 0);
    bool connected = o::predicate(Problem::stconn, g, h, {s, t, {}});
    bool matches = o::le_list_matches(inst.weighted, inst.rank, t, inst.candidate);
    CHECK(matches == connected);
    CHECK(matches == (o::le_list_brute_force(inst.weighted, inst.rank, t) == inst.candidate));
    valid += matches;
  }
  CHECK(valid > 20);
  Graph edge(2, {{0, 1}});
  auto inst = build_le_list_instance(edge, SubgraphIndicator(edge), 0, 1);
  CHECK_FALSE(o::le_list_matches(inst.weighted, inst.rank, 1, inst.candidate));
}

TEST_CASE("distributed disj and eq agree with the centralized functions") {
  auto f = generate_family({4, 2, 2});
  auto disj_scs = disj_program(f, 4);
  auto disj_relay = tree_relay_program(f, 4, TwoPartyFunction::disj);
  auto eq = eq_program(f, 4);
  std::size_t ok = 0;
  for (std::uint64_t code = 0; code < 256; ++code) {
    auto in = InputPair::enumerate(4, code);
    auto inputs = family_inputs(f, in);
    auto a = verdict_of(run(f.graph, disj_scs, inputs, pipeline_config(f.graph, small_config())));
    auto b = verdict_of(run(f.graph, disj_relay, inputs, small_config()));
    auto c = verdict_of(run(f.graph, eq, inputs, small_config()));
    ok += a.agreement && a.accepted == brute_disj(in) && b.agreement && b.accepted == brute_disj(in) &&
          c.agreement && c.accepted == o::eq(in.x, in.y);
  }
  CHECK(ok == 256);
  auto stats = run(f.graph, disj_relay, family_inputs(f, InputPair::parse("1000", "0001")), small_config());
  CHECK(stats.rounds_used == 2 * 2 + 1);
}

TEST_CASE("frontier sets") {
  auto f = generate_family({3, 2, 3});
  auto cf = CutFrontier::build(f, 3);
  CHECK_FALSE(cf.left[0][f.r()]);
  CHECK_FALSE(cf.right[0][f.s()]);
  for (std::size_t t = 1; t <= 3; ++t) {
    CHECK(cf.left[t][f.s()]);
    CHECK(cf.right[t][f.r()]);
    CHECK(cf.left[t][0]);
    CHECK(cf.right[t][0]);
    CHECK_FALSE(cf.left[t][f.path_node(1, f.params.m() - t + 1)]);
    CHECK(cf.right[t][f.path_node(2, t)]);
    CHECK_FALSE(cf.right[t][f.path_node(2, t - 1)]);
    for (NodeId v = 0; v < f.graph.node_count(); ++v) {
      CHECK(cf.left[t][v] <= cf.left[t - 1][v]);
      CHECK(cf.right[t][v] <= cf.right[t - 1][v]);
    }
  }
}

TEST_CASE("two-party simulation") {
  SUBCASE("trivial one-round program") {
    auto f = generate_family({1, 2, 2});
    ProgramFactory first_bit = [](const NodeContext& c) { return std::make_unique<FirstBitNode>(c); };
    for (std::uint64_t code = 0; code < 16; ++code) {
      auto in = InputPair::enumerate(2, code);
      auto t = two_party_simulate(f, first_bit, in, small_config());
      CHECK(t.rounds == 1);
      CHECK(t.alice_output == in.x[0]);
      CHECK(t.bob_output == in.y[0]);
      CHECK(t.total_bits() <= 2 * 2 * 2 * 8);
    }
  }
  SUBCASE("tree relay on a long-path family") {
    auto f = generate_family({4, 2, 6});
    auto prog = tree_relay_program(f, 4, TwoPartyFunction::disj);
    std::size_t ok = 0, messages = 0;
    for (std::uint64_t code = 0; code < 256; ++code) {
      auto in = InputPair::enumerate(4, code);
      auto t = two_party_simulate(f, prog, in, small_config());
      ok += t.alice_output == t.direct_s && t.bob_output == t.direct_r && t.alice_output == brute_disj(in) &&
            t.total_bits() <= t.bound && t.max_frontier_edges <= 2 * 6;
      messages += t.log.size();
    }
    CHECK(ok == 256);
    CHECK(messages > 0);
    auto t = two_party_simulate(f, prog, InputPair::parse("1111", "1111"), small_config());
    CHECK(format_transcript(t).find("B->A") != std::string::npos);
  }
  SUBCASE("refuses when the program is too slow for the family") {
    auto f = generate_family({4, 2, 2});
    CHECK_THROWS_AS(two_party_simulate(f, disj_program(f, 4), InputPair::parse("0000", "0000"), small_config()),
                    SimulationRefused);
    SimConfig chunked = small_config();
    chunked.strict_bits = false;
    CHECK_THROWS_AS(two_party_simulate(f, disj_program(f, 4), InputPair::parse("0000", "0000"), chunked),
                    std::invalid_argument);
  }
}

TEST_CASE("weight gap examples") {
  Graph g = generate_random(RandomKind::connected_gnm, 23, 60, 5);
  auto tree = o::kruskal(g).edges;
  SubgraphIndicator h(g);
  for (EdgeId e : tree) h.set(e, true);
  auto gap = build_weight_gap(GapProblem::mst, g, h, {10, 1}, {});
  CHECK(gap.theta == 230);
  CHECK(gap_optimum(GapProblem::mst, gap.weighted, {}) == 22);
  h.set(tree[0], false);
  gap = build_weight_gap(GapProblem::mst, g, h, {10, 1}, {});
  CHECK(gap_optimum(GapProblem::mst, gap.weighted, {}) >= 230);

  CHECK(build_weight_gap(GapProblem::mrcst, g, h, {3, 2}, {}).theta == 23ull * 23 * 23 * 3 / 2 + 1);
  CHECK_THROWS_AS(build_weight_gap(GapProblem::mst, g, h, {1, 2}, {}), std::invalid_argument);
  CHECK_THROWS_AS(build_weight_gap(GapProblem::mst, g, h, {~0ull, 1}, {}), std::overflow_error);
  CHECK_THROWS_AS(gap_optimum(GapProblem::gsf, gap.weighted, {}), std::invalid_argument);
  CHECK(parse_gap_problem("minstcut") == GapProblem::minstcut);
  CHECK_FALSE(parse_gap_problem("steiner"));
}

TEST_CASE("weight gap separation on random instances") {
  std::mt19937_64 rng(3);
  for (GapProblem p : {GapProblem::mst, GapProblem::sdist, GapProblem::sptree, GapProblem::stpath, GapProblem::mincut,
                       GapProblem::minstcut}) {
    CAPTURE(gap_problem_name(p));
    std::size_t ok = 0, yes = 0;
    for (int it = 0; it < 60; ++it) {
      std::size_t n = 3 + rng() % 20;
      Graph g = generate_random(RandomKind::connected_gnm, n, std::min(n * (n - 1) / 2, n - 1 + rng() % (2 * n)), rng());
      auto h = random_h(g, rng);
      NodeId s = rng() % n, t = (s + 1 + rng() % (n - 1)) % n;
      ExtraArgs args{s, t, {}};
      auto gap = build_weight_gap(p, g, h, {1 + rng() % 10, 1}, args);
      bool holds = o::predicate(gap_source(p), g, gap.source_h, args);
      ok += (gap_optimum(p, gap.weighted, args) < gap.theta) == holds;
      yes += holds;
    }
    CHECK(ok == 60);
    CHECK(yes > 5);
    CHECK(yes < 55);
  }
}
