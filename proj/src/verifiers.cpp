#include "dverify/verifiers.hpp"

#include <algorithm>

#include "dverify/bits.hpp"

namespace dverify {

namespace {

struct Counts {
  std::uint64_t h_edges = 0;    // H-edges owned by this node (smaller endpoint)
  std::uint64_t zero_mst = 0;   // zero-weight MST edges owned by this node
  std::uint64_t h_degree = 0;
};

Counts counts(const PipelineNode& v) {
  Counts c;
  for (std::size_t k = 0; k < v.degree(); ++k) {
    bool owner = v.id() < v.neighbor(k);
    if (v.row()[k]) {
      ++c.h_degree;
      c.h_edges += owner;
    }
    c.zero_mst += owner && v.mst_port(k) && v.port_weight(k) == 0;
  }
  return c;
}

// Fields i and j hold fragment-local labels; compare their components.
bool same_class(const RootView& r, std::size_t i, std::size_t j) {
  return r.resolve(static_cast<NodeId>(r.agg[i])) == r.resolve(static_cast<NodeId>(r.agg[j]));
}

bool is_edge(const PipelineNode& v, std::size_t k, Edge e) { return make_edge(v.id(), v.neighbor(k)) == e; }

}  // namespace

Verdict verdict_of(const RunStats& stats) {
  Verdict v;
  v.rounds = stats.rounds_used;
  v.accepted = !stats.outputs.empty() && stats.outputs.front() == 1;
  v.agreement = std::all_of(stats.outputs.begin(), stats.outputs.end(),
                            [&](auto b) { return b == stats.outputs.front(); });
  return v;
}

std::vector<std::uint8_t> indicator_row(const Graph& g, const SubgraphIndicator& h, NodeId v) {
  std::vector<std::uint8_t> row(g.degree(v));
  for (std::size_t k = 0; k < row.size(); ++k) row[k] = h.at(g, v, k);
  return row;
}

VerifierPlan::VerifierPlan(Problem p, std::size_t n, ExtraArgs args)
    : p_(p), args_(args), spec_(std::make_shared<PipelineSpec>()) {
  auto& s = *spec_;
  const unsigned EW = width_for(static_cast<std::uint64_t>(n) * n);  // edge counts
  const unsigned NW = width_for(n);                                  // node counts
  const unsigned LW = id_bits(n) + 1;                                // a label, or all ones for "none"
  const std::uint64_t none = (1ull << LW) - 1;
  s.weight_bits = 1;

  // Label of the node with id `who`, or `none` elsewhere; min-aggregated.
  auto label_of = [none](NodeId who) {
    return [who, none](const PipelineNode& v) -> std::uint64_t { return v.id() == who ? v.label() : none; };
  };

  switch (p) {
    case Problem::scs:
      s.decide = [](const RootView& r) { return r.component_size == r.n && r.mst_weight == 0; };
      break;
    case Problem::spt:
      s.fields = {{EW, AggOp::sum}};
      s.local_values = [](const PipelineNode& v) { return std::vector<std::uint64_t>{counts(v).h_edges}; };
      s.decide = [](const RootView& r) {
        return r.component_size == r.n && r.mst_weight == 0 && r.agg[0] + 1 == r.n;
      };
      break;
    case Problem::cycle:
      // H is acyclic iff every H-edge is in the MST of the 0/1 weights.
      s.fields = {{EW, AggOp::sum}, {EW, AggOp::sum}};
      s.local_values = [](const PipelineNode& v) {
        auto c = counts(v);
        return std::vector<std::uint64_t>{c.h_edges, c.zero_mst};
      };
      s.decide = [](const RootView& r) { return r.agg[0] != r.agg[1]; };
      break;
    case Problem::conn:
      s.fields = {{NW, AggOp::sum}, {EW, AggOp::sum}};
      s.local_values = [](const PipelineNode& v) {
        auto c = counts(v);
        return std::vector<std::uint64_t>{c.h_degree > 0, c.zero_mst};
      };
      s.decide = [](const RootView& r) { return r.agg[0] > 0 && r.agg[1] + 1 == r.agg[0]; };
      break;
    case Problem::cut:
      s.decide = [](const RootView& r) { return r.component_size < r.n || r.mst_weight > 0; };
      break;
    case Problem::stconn:
    case Problem::stcut:
    case Problem::eap: {
      s.labels = true;
      s.labels_to_nodes = false;
      s.fields = {{LW, AggOp::min}, {LW, AggOp::min}};
      auto ls = label_of(args.s), lt = label_of(args.t);
      s.local_values = [ls, lt](const PipelineNode& v) { return std::vector<std::uint64_t>{ls(v), lt(v)}; };
      bool same = p == Problem::stconn;
      s.decide = [same](const RootView& r) { return (same_class(r, 0, 1)) == same; };
      break;
    }
    case Problem::ecycle: {
      s.labels = true;
      s.labels_to_nodes = false;
      s.fields = {{LW, AggOp::min}, {LW, AggOp::min}, {1, AggOp::bit_or}};
      auto lu = label_of(args.e.u), lv = label_of(args.e.v);
      Edge e = args.e;
      s.local_values = [lu, lv, e](const PipelineNode& v) {
        std::uint64_t in = 0;
        for (std::size_t k = 0; k < v.degree(); ++k) in |= is_edge(v, k, e) && v.row()[k];
        return std::vector<std::uint64_t>{lu(v), lv(v), in};
      };
      s.decide = [](const RootView& r) { return r.agg[2] == 1 && same_class(r, 0, 1); };
      break;
    }
    case Problem::bip:
      s.parity_check = true;
      s.labels_to_nodes = false;
      s.decide = [](const RootView& r) { return !r.parity_conflict; };
      break;
    case Problem::path:
      s.fields = {{NW, AggOp::sum}, {1, AggOp::bit_or}, {EW, AggOp::sum}, {EW, AggOp::sum}, {NW, AggOp::sum}};
      s.local_values = [](const PipelineNode& v) {
        auto c = counts(v);
        return std::vector<std::uint64_t>{c.h_degree == 1, c.h_degree > 2, c.h_edges, c.zero_mst, c.h_degree > 0};
      };
      // Two ends, no branching, acyclic and connected on V(H).
      s.decide = [](const RootView& r) {
        return r.agg[0] == 2 && r.agg[1] == 0 && r.agg[2] == r.agg[3] && r.agg[3] + 1 == r.agg[4];
      };
      break;
    case Problem::ham:
      s.fields = {{1, AggOp::bit_or}};
      s.local_values = [](const PipelineNode& v) { return std::vector<std::uint64_t>{counts(v).h_degree != 2}; };
      s.decide = [](const RootView& r) { return r.agg[0] == 0 && r.component_size == r.n && r.mst_weight == 0; };
      break;
  }
}

Weight VerifierPlan::port_weight(const NodeContext& ctx, std::size_t port, bool in_h) const {
  switch (p_) {
    case Problem::cut:
    case Problem::stcut:
      return in_h ? 1 : 0;
    case Problem::eap:
    case Problem::ecycle:
      return in_h && make_edge(ctx.id, ctx.neighbors[port]) != args_.e ? 0 : 1;
    default:
      return in_h ? 0 : 1;
  }
}

std::unique_ptr<NodeProgram> VerifierPlan::node(const NodeContext& ctx, std::vector<std::uint8_t> row) const {
  if (row.size() != ctx.degree()) throw std::invalid_argument("verifier: indicator row does not match degree");
  std::vector<Weight> w(row.size());
  for (std::size_t k = 0; k < w.size(); ++k) w[k] = port_weight(ctx, k, row[k] != 0);
  return std::make_unique<PipelineNode>(ctx, std::move(w), spec_, std::move(row));
}

ProgramFactory VerifierPlan::factory(const Graph& g, const SubgraphIndicator& h) const {
  return [this, &g, &h](const NodeContext& ctx) { return node(ctx, indicator_row(g, h, ctx.id)); };
}

std::pair<Verdict, RunStats> verify(Problem p, const Graph& g, const SubgraphIndicator& h, const ExtraArgs& args,
                                    const SimConfig& config) {
  h.check_host(g);
  if (needs_st(p) && (args.s >= g.node_count() || args.t >= g.node_count()))
    throw GraphError("verify: s or t out of range");
  VerifierPlan plan(p, g.node_count(), args);
  auto stats = run(g, plan.factory(g, h), {}, pipeline_config(g, config));
  return {verdict_of(stats), std::move(stats)};
}

std::pair<Verdict, RunStats> verify_spanning_connected_subgraph(const Graph& g, const SubgraphIndicator& h,
                                                                const SimConfig& config) {
  return verify(Problem::scs, g, h, {}, config);
}
std::pair<Verdict, RunStats> verify_spanning_tree(const Graph& g, const SubgraphIndicator& h, const SimConfig& config) {
  return verify(Problem::spt, g, h, {}, config);
}
std::pair<Verdict, RunStats> verify_cycle_containment(const Graph& g, const SubgraphIndicator& h,
                                                      const SimConfig& config) {
  return verify(Problem::cycle, g, h, {}, config);
}
std::pair<Verdict, RunStats> verify_connectivity(const Graph& g, const SubgraphIndicator& h, const SimConfig& config) {
  return verify(Problem::conn, g, h, {}, config);
}
std::pair<Verdict, RunStats> verify_cut(const Graph& g, const SubgraphIndicator& h, const SimConfig& config) {
  return verify(Problem::cut, g, h, {}, config);
}
std::pair<Verdict, RunStats> verify_st_connectivity(const Graph& g, const SubgraphIndicator& h, NodeId s, NodeId t,
                                                    const SimConfig& config) {
  return verify(Problem::stconn, g, h, {s, t, {}}, config);
}
std::pair<Verdict, RunStats> verify_st_cut(const Graph& g, const SubgraphIndicator& h, NodeId s, NodeId t,
                                           const SimConfig& config) {
  return verify(Problem::stcut, g, h, {s, t, {}}, config);
}
std::pair<Verdict, RunStats> verify_edge_on_all_paths(const Graph& g, const SubgraphIndicator& h, NodeId u, NodeId v,
                                                      Edge e, const SimConfig& config) {
  return verify(Problem::eap, g, h, {u, v, e}, config);
}
std::pair<Verdict, RunStats> verify_e_cycle(const Graph& g, const SubgraphIndicator& h, Edge e,
                                            const SimConfig& config) {
  return verify(Problem::ecycle, g, h, {0, 0, e}, config);
}
std::pair<Verdict, RunStats> verify_bipartiteness(const Graph& g, const SubgraphIndicator& h, const SimConfig& config) {
  return verify(Problem::bip, g, h, {}, config);
}
std::pair<Verdict, RunStats> verify_simple_path(const Graph& g, const SubgraphIndicator& h, const SimConfig& config) {
  return verify(Problem::path, g, h, {}, config);
}
std::pair<Verdict, RunStats> verify_hamiltonian_cycle(const Graph& g, const SubgraphIndicator& h,
                                                      const SimConfig& config) {
  return verify(Problem::ham, g, h, {}, config);
}

}  // namespace dverify
