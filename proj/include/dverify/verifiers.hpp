#pragma once

#include <memory>
#include <utility>

#include "dverify/graph.hpp"
#include "dverify/mst.hpp"
#include "dverify/problems.hpp"
#include "dverify/sim.hpp"

namespace dverify {

struct Verdict {
  bool accepted = false;
  std::uint64_t rounds = 0;
  bool agreement = false;  // every node halted with the same bit
};

Verdict verdict_of(const RunStats& stats);

/// Everything a node of a verifier run shares with the others: the problem, its
/// global arguments (s, t, e) and the pipeline configuration derived from them.
class VerifierPlan {
 public:
  VerifierPlan(Problem p, std::size_t n, ExtraArgs args);

  /// One node's program; row[k] = Y_v at port k.
  std::unique_ptr<NodeProgram> node(const NodeContext& ctx, std::vector<std::uint8_t> row) const;
  /// Factory reading each node's row from h.
  ProgramFactory factory(const Graph& g, const SubgraphIndicator& h) const;

  Problem problem() const { return p_; }

 private:
  Weight port_weight(const NodeContext& ctx, std::size_t port, bool in_h) const;

  Problem p_;
  ExtraArgs args_;
  std::shared_ptr<PipelineSpec> spec_;
};

std::vector<std::uint8_t> indicator_row(const Graph& g, const SubgraphIndicator& h, NodeId v);

std::pair<Verdict, RunStats> verify(Problem p, const Graph& g, const SubgraphIndicator& h, const ExtraArgs& args,
                                    const SimConfig& config);

std::pair<Verdict, RunStats> verify_spanning_connected_subgraph(const Graph& g, const SubgraphIndicator& h,
                                                                const SimConfig& config);
std::pair<Verdict, RunStats> verify_spanning_tree(const Graph& g, const SubgraphIndicator& h, const SimConfig& config);
std::pair<Verdict, RunStats> verify_cycle_containment(const Graph& g, const SubgraphIndicator& h,
                                                      const SimConfig& config);
std::pair<Verdict, RunStats> verify_connectivity(const Graph& g, const SubgraphIndicator& h, const SimConfig& config);
std::pair<Verdict, RunStats> verify_cut(const Graph& g, const SubgraphIndicator& h, const SimConfig& config);
std::pair<Verdict, RunStats> verify_st_connectivity(const Graph& g, const SubgraphIndicator& h, NodeId s, NodeId t,
                                                    const SimConfig& config);
std::pair<Verdict, RunStats> verify_st_cut(const Graph& g, const SubgraphIndicator& h, NodeId s, NodeId t,
                                           const SimConfig& config);
std::pair<Verdict, RunStats> verify_edge_on_all_paths(const Graph& g, const SubgraphIndicator& h, NodeId u, NodeId v,
                                                      Edge e, const SimConfig& config);
std::pair<Verdict, RunStats> verify_e_cycle(const Graph& g, const SubgraphIndicator& h, Edge e,
                                            const SimConfig& config);
std::pair<Verdict, RunStats> verify_bipartiteness(const Graph& g, const SubgraphIndicator& h, const SimConfig& config);
std::pair<Verdict, RunStats> verify_simple_path(const Graph& g, const SubgraphIndicator& h, const SimConfig& config);
std::pair<Verdict, RunStats> verify_hamiltonian_cycle(const Graph& g, const SubgraphIndicator& h,
                                                      const SimConfig& config);

}  // namespace dverify
