#include "dverify/gadgets.hpp"

#include <algorithm>
#include <functional>
#include <limits>

namespace dverify {

void InputPair::validate() const {
  if (x.empty() || x.size() != y.size()) throw std::invalid_argument("input pair: need |x| = |y| >= 1");
}

InputPair InputPair::parse(const std::string& xs, const std::string& ys) {
  auto bits = [](const std::string& s) {
    std::vector<bool> out;
    for (char c : s) {
      if (c != '0' && c != '1') throw std::invalid_argument("input pair: bit strings use 0 and 1 only");
      out.push_back(c == '1');
    }
    return out;
  };
  InputPair in{bits(xs), bits(ys)};
  in.validate();
  return in;
}

InputPair InputPair::enumerate(std::size_t b, std::uint64_t code) {
  InputPair in;
  for (std::size_t i = 0; i < b; ++i) {
    in.x.push_back((code >> i) & 1);
    in.y.push_back((code >> (b + i)) & 1);
  }
  in.validate();
  return in;
}

bool eval_disj(const InputPair& in) {
  in.validate();
  for (std::size_t i = 0; i < in.b(); ++i)
    if (in.x[i] && in.y[i]) return false;
  return true;
}

bool eval_eq(const InputPair& in) {
  in.validate();
  return in.x == in.y;
}

namespace {

void require_plain_family(const FamilyGraph& f) {
  if (f.ham_b != 0 || f.extra_node_begin != f.graph.node_count())
    throw std::invalid_argument("gadget: expected a plain G(Γ,d,p)");
}

bool bit_or_zero(const std::vector<bool>& v, std::size_t i) { return i < v.size() && v[i]; }

EdgeId edge_between(const Graph& g, NodeId a, NodeId b) {
  auto e = g.find_edge(a, b);
  if (!e) throw std::logic_error("gadget: missing edge " + std::to_string(a) + "-" + std::to_string(b));
  return *e;
}

}  // namespace

Gadget build_gadget(Problem p, const FamilyGraph& f, const InputPair& in) {
  in.validate();
  require_plain_family(f);
  const auto& pr = f.params;
  if (in.b() > pr.gamma) throw std::invalid_argument("gadget: b exceeds Γ");
  const Graph& g = f.graph;
  const NodeId s = f.s(), r = f.r();

  Gadget out;
  out.problem = p;
  out.h = SubgraphIndicator(g);
  auto spoke_in = [&](EdgeId e, std::size_t path) {
    Edge ed = g.edge(e);
    bool at_s = ed.u == s || ed.v == s, at_r = ed.u == r || ed.v == r;
    bool x = bit_or_zero(in.x, path - 1), y = bit_or_zero(in.y, path - 1);
    if (p == Problem::scs) return (at_s && !x) || (at_r && !y);
    return (at_s && x) || (at_r && y);
  };

  switch (p) {
    case Problem::scs:
    case Problem::stconn:
    case Problem::cycle:
    case Problem::ecycle:
    case Problem::bip:
      break;
    default:
      throw std::invalid_argument("gadget: no construction for " + std::string(problem_name(p)));
  }
  const bool tree_edges = p == Problem::scs || p == Problem::cycle || p == Problem::ecycle || p == Problem::bip;
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    switch (f.edge_class[e]) {
      case EdgeClass::path:
        out.h.set(e, true);
        break;
      case EdgeClass::tree:
        out.h.set(e, tree_edges);
        break;
      case EdgeClass::spoke: {
        Edge ed = g.edge(e);
        NodeId pv = f.is_tree_node(ed.u) ? ed.v : ed.u;
        std::size_t path = (pv - pr.tree_size()) / pr.leaves() + 1;
        out.h.set(e, spoke_in(e, path));
        break;
      }
      case EdgeClass::extra:
        break;
    }
  }

  if (p == Problem::stconn) out.args = {s, r, {}};
  if (p == Problem::ecycle || p == Problem::bip) out.args = {s, r, make_edge(s, f.tree_parent(s))};

  if (p == Problem::bip) {
    // Subdivide e = (s, parent) by v′ = n, simulated inside s.
    const NodeId parent = f.tree_parent(s), vprime = static_cast<NodeId>(g.node_count());
    std::vector<Edge> edges, marked;
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
      if (g.edge(e) == out.args.e) continue;
      edges.push_back(g.edge(e));
      if (out.h.contains(e)) marked.push_back(g.edge(e));
    }
    edges.push_back(make_edge(s, vprime));
    edges.push_back(make_edge(vprime, parent));
    marked.push_back(make_edge(s, vprime));
    marked.push_back(make_edge(vprime, parent));
    auto vg = std::make_shared<VirtualGraph>();
    vg->graph = Graph(g.node_count() + 1, std::move(edges));
    vg->host.resize(g.node_count() + 1);
    for (NodeId v = 0; v < g.node_count(); ++v) vg->host[v] = v;
    vg->host[vprime] = s;
    vg->validate(g);
    out.h_split = SubgraphIndicator::from_edge_list(vg->graph, marked);
    out.split = std::move(vg);
  }
  return out;
}

Verdict run_gadget(const FamilyGraph& f, const Gadget& gadget, const SimConfig& config) {
  const Graph& g = f.graph;
  auto [verdict, stats] = verify(gadget.problem, g, gadget.h, gadget.args, config);
  if (!gadget.split) return verdict;

  const auto cfg = pipeline_config(g, config);
  const auto& vg = *gadget.split;
  VerifierPlan plan(gadget.problem, vg.graph.node_count(), gadget.args);
  auto inner = plan.factory(vg.graph, gadget.h_split);
  auto split_stats = run(g, hosted_factory(g, gadget.split, inner, cfg.effective_bandwidth(g)), {}, cfg);
  Verdict second = verdict_of(split_stats);
  Verdict both;
  both.accepted = verdict.accepted && second.accepted;
  both.agreement = verdict.agreement && second.agreement;
  both.rounds = std::max(verdict.rounds, second.rounds);
  return both;
}

// Hamiltonian gadget -----------------------------------------------------------

std::vector<bool> ham_pattern(const std::vector<bool>& x) {
  std::vector<bool> syms;
  for (bool xi : x) syms.insert(syms.end(), {xi, xi});
  for (bool xi : x) syms.insert(syms.end(), {!xi, !xi});
  std::vector<bool> out{true};
  for (bool sy : syms) out.insert(out.end(), {sy, false, true});
  out.push_back(false);
  return out;
}

namespace {

// Hamiltonian path from `from` to `to` through exactly the nodes in `allowed`,
// by DFS in ascending neighbor order.
std::vector<NodeId> hamiltonian_path(const Graph& g, const std::vector<std::uint8_t>& allowed, NodeId from, NodeId to) {
  const std::size_t need = static_cast<std::size_t>(std::count(allowed.begin(), allowed.end(), 1));
  std::vector<NodeId> path{from};
  std::vector<std::uint8_t> seen(g.node_count(), 0);
  seen[from] = 1;
  std::function<bool(NodeId)> rec = [&](NodeId v) {
    if (path.size() == need) return v == to;
    for (NodeId w : g.neighbors(v)) {
      if (!allowed[w] || seen[w] || (w == to && path.size() + 1 < need)) continue;
      seen[w] = 1;
      path.push_back(w);
      if (rec(w)) return true;
      seen[w] = 0;
      path.pop_back();
    }
    return false;
  };
  if (!rec(from)) throw std::logic_error("ham gadget: no Hamiltonian path through the tree");
  return path;
}

}  // namespace

SubgraphIndicator build_hamiltonian_gadget(const FamilyGraph& f, const InputPair& in) {
  in.validate();
  const std::size_t b = f.ham_b;
  if (b == 0 || in.b() != b || f.params.d != 2) throw std::invalid_argument("ham gadget: family/pair mismatch");
  const Graph& g = f.graph;
  const std::size_t G = f.params.gamma, m = f.params.m(), p = f.params.p;
  auto v = [&](std::size_t path, std::size_t j) { return f.path_node(path, j); };
  auto u = [&](std::size_t level, std::size_t i) { return f.tree_node(level, i); };
  const auto X = ham_pattern(in.x), Y = ham_pattern(in.y);
  auto xp = [&](std::size_t i) { return X[i - 1]; };
  auto yp = [&](std::size_t i) { return Y[i - 1]; };

  SubgraphIndicator h(g);
  auto add = [&](NodeId a, NodeId c) { h.set(edge_between(g, a, c), true); };

  // Stage 1: line segments v_1..v_{m-1} on every path, plus both ends of P^1.
  for (std::size_t L = 1; L <= G; ++L)
    for (std::size_t j = 1; j + 1 < m; ++j) add(v(L, j), v(L, j + 1));
  add(v(1, 0), v(1, 1));
  add(v(1, m - 1), v(1, m));

  // Stage 2: clique edges on the v_0 and v_m columns, and the end edges where the pattern changes.
  for (std::size_t i = 1; i < G; ++i) {
    if (xp(i)) add(v(i, 0), v(i + 1, 0));
    if (!yp(i)) add(v(i, m), v(i + 1, m));
  }
  for (std::size_t i = 2; i <= G; ++i) {
    if (xp(i - 1) != xp(i)) add(v(i, 0), v(i, 1));
    if (yp(i - 1) != yp(i)) add(v(i, m - 1), v(i, m));
  }

  // Stage 3: one block per pair of x′ symbols, then the right-side joins.
  for (std::size_t i = 0; i < 2 * b; ++i) {
    if (!xp(2 + 6 * i)) {
      add(v(3 + 6 * i, 1), v(3 + 6 * i, 0));
      add(v(3 + 6 * i, 0), v(6 + 6 * i, 0));
      add(v(6 + 6 * i, 0), v(6 + 6 * i, 1));
    } else {
      add(v(2 + 6 * i, m), v(2 + 6 * i, m - 1));
      add(v(2 + 6 * i, 1), v(5 + 6 * i, 1));
      add(v(5 + 6 * i, m - 1), v(5 + 6 * i, m));
    }
  }
  for (std::size_t i = 0; i + 1 < 2 * b; ++i) {
    NodeId a = !yp(5 + 6 * i) ? v(6 + 6 * i, m - 1) : v(5 + 6 * i, m);
    NodeId c = !yp(8 + 6 * i) ? v(9 + 6 * i, m - 1) : v(8 + 6 * i, m);
    add(a, c);
  }
  add(!yp(2) ? v(3, m - 1) : v(2, m), v(1, m));

  // Stage 4: a path through the whole tree and its connectors, from s to the root.
  std::vector<std::uint8_t> tree(g.node_count(), 0);
  for (NodeId w = 0; w < g.node_count(); ++w) tree[w] = f.is_tree_node(w) || f.is_extra_node(w);
  auto s3 = hamiltonian_path(g, tree, u(p, 0), u(0, 0));
  for (std::size_t k = 0; k + 1 < s3.size(); ++k) add(s3[k], s3[k + 1]);

  // Stage 5: close the cycle at both tree ends.
  add(u(0, 0), v(G, m));
  add(!xp(G - 3) ? v(G - 2, m - 1) : v(G - 3, m), u(p, 0));
  return h;
}

// LE lists ----------------------------------------------------------------------

LeListInstance build_le_list_instance(const Graph& g, const SubgraphIndicator& h, NodeId s, NodeId t) {
  h.check_host(g);
  if (s == t || s >= g.node_count() || t >= g.node_count()) throw std::invalid_argument("le list: need s != t in range");
  LeListInstance out;
  out.rank.resize(g.node_count());
  std::uint64_t next = 1;
  for (NodeId v = 0; v < g.node_count(); ++v) out.rank[v] = v == s ? 0 : next++;
  std::vector<Weight> w(g.edge_count());
  for (EdgeId e = 0; e < g.edge_count(); ++e) w[e] = h.contains(e) ? 0 : 1;
  out.weighted = g.with_weights(std::move(w));
  out.candidate = {{s, 0}};
  return out;
}

// Weight gaps -------------------------------------------------------------------

namespace {

constexpr std::string_view kGapNames[] = {"mst", "slt", "sdist", "sptree", "mrcst", "mincut", "minstcut", "stpath", "gsf"};

Weight ceil_times(std::uint64_t k, Rational a) {
  unsigned __int128 num = static_cast<unsigned __int128>(k) * a.num;
  unsigned __int128 q = (num + a.den - 1) / a.den;
  if (q > std::numeric_limits<Weight>::max()) throw std::overflow_error("weight gap: weight does not fit 64 bits");
  return static_cast<Weight>(q);
}

std::uint64_t checked_pow(std::uint64_t n, unsigned e) {
  unsigned __int128 r = 1;
  for (unsigned i = 0; i < e; ++i) {
    r *= n;
    if (r > std::numeric_limits<std::uint64_t>::max()) throw std::overflow_error("weight gap: n^k does not fit 64 bits");
  }
  return static_cast<std::uint64_t>(r);
}

}  // namespace

std::string_view gap_problem_name(GapProblem p) { return kGapNames[static_cast<int>(p)]; }

std::optional<GapProblem> parse_gap_problem(std::string_view name) {
  for (int i = 0; i < 9; ++i)
    if (kGapNames[i] == name) return static_cast<GapProblem>(i);
  return std::nullopt;
}

Problem gap_source(GapProblem p) {
  switch (p) {
    case GapProblem::stpath:
    case GapProblem::gsf:
      return Problem::stconn;
    case GapProblem::mincut:
      return Problem::cut;
    case GapProblem::minstcut:
      return Problem::stcut;
    default:
      return Problem::scs;
  }
}

WeightGap build_weight_gap(GapProblem p, const Graph& g, const SubgraphIndicator& h, Rational alpha,
                           const ExtraArgs& args) {
  h.check_host(g);
  if (alpha.den == 0 || alpha.num < alpha.den) throw std::invalid_argument("weight gap: alpha must be >= 1");
  const std::uint64_t n = g.node_count();
  WeightGap out;
  bool cut = p == GapProblem::mincut || p == GapProblem::minstcut;
  // The cut problems weigh the complement: light edges are the candidate cut.
  out.source_h = cut ? h.complement() : h;
  unsigned power = p == GapProblem::mrcst ? 3 : cut ? 2 : 1;
  Weight heavy = ceil_times(checked_pow(n, power), alpha);
  std::vector<Weight> w(g.edge_count());
  for (EdgeId e = 0; e < g.edge_count(); ++e) w[e] = out.source_h.contains(e) ? 1 : heavy;
  out.weighted = g.with_weights(std::move(w));
  out.theta = heavy;
  (void)args;
  return out;
}

Weight gap_optimum(GapProblem p, const Graph& g, const ExtraArgs& args) {
  switch (p) {
    case GapProblem::mst:
      return oracle::kruskal(g).total;
    case GapProblem::sdist: {
      auto d = oracle::dijkstra(g, args.s);
      return *std::max_element(d.begin(), d.end());
    }
    case GapProblem::sptree:
      return oracle::shortest_path_tree_weight(g, args.s);
    case GapProblem::stpath:
      return oracle::dijkstra(g, args.s)[args.t];
    case GapProblem::mincut:
      return oracle::stoer_wagner(g);
    case GapProblem::minstcut:
      return oracle::min_st_cut(g, args.s, args.t);
    case GapProblem::mrcst:
      return oracle::min_routing_cost_tree(g);
    default:
      throw std::invalid_argument("gap optimum: not computed exactly for " + std::string(gap_problem_name(p)));
  }
}

}  // namespace dverify
