#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "dverify/graph.hpp"
#include "dverify/sim.hpp"

namespace dverify {

enum class AggOp : std::uint8_t { sum, bit_or, min };

struct AggField {
  unsigned width = 1;
  AggOp op = AggOp::sum;
};

class PipelineNode;

/// What the root sees when it decides the final bit.
struct RootView {
  std::size_t n = 0;
  std::size_t component_size = 0;
  Weight mst_weight = 0;
  std::vector<std::uint64_t> agg;
  /// Maps a fragment-local label to its final component label. Only set when
  /// labels are resolved at the root (PipelineSpec::labels_to_nodes == false).
  std::function<NodeId(NodeId)> resolve;
  bool parity_conflict = false;
};

/// Configuration shared by every node of one pipeline run.
///
/// The pipeline elects a leader and builds a BFS tree, computes the MST of the
/// per-port weights (controlled GHS up to fragments of size ⌈√n⌉, then a
/// pipelined upcast over the BFS tree), and optionally labels the components
/// of the zero-weight part of the MST, computes exact depths in that forest,
/// aggregates per-node values and broadcasts a verdict bit.
struct PipelineSpec {
  unsigned weight_bits = 1;  // declared width of every port weight
  bool labels = false;       // component labels and 2-coloring of the zero-weight MST forest
  bool levels = false;       // exact depth in that forest (implies labels)
  /// Checks at the leader that the zero-weight edges admit a 2-coloring; the
  /// result arrives as RootView::parity_conflict.
  bool parity_check = false;
  /// When false, final labels are never sent back down: local values are taken
  /// with fragment-local labels, aggregated together with the label pairs, and
  /// the root translates them through RootView::resolve.
  bool labels_to_nodes = true;
  std::vector<AggField> fields;
  std::function<std::vector<std::uint64_t>(const PipelineNode&)> local_values;
  std::function<bool(const RootView&)> decide;  // default: component spans the graph
};

class PipelineNode final : public NodeProgram {
 public:
  /// row is an opaque per-port input (the indicator Y_v for verifiers), read back by spec callbacks.
  PipelineNode(const NodeContext& ctx, std::vector<Weight> port_weights, std::shared_ptr<const PipelineSpec> spec,
               std::vector<std::uint8_t> row = {});
  ~PipelineNode() override;

  void init(std::span<Message> outbox) override;
  StepStatus step(std::uint64_t round, std::span<const Message> inbox, std::span<Message> outbox) override;

  NodeId id() const;
  std::size_t degree() const;
  NodeId neighbor(std::size_t port) const;
  Weight port_weight(std::size_t port) const;
  const std::vector<std::uint8_t>& row() const;
  bool mst_port(std::size_t port) const;
  Weight mst_weight() const;
  std::size_t component_size() const;
  NodeId fragment_id() const;
  NodeId label() const;
  bool color() const;
  std::optional<std::size_t> forest_parent() const;
  std::uint32_t depth() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  std::vector<std::uint8_t> row_;
};

/// Factory running the pipeline with weights taken from the host graph.
ProgramFactory mst_factory(const Graph& g, std::shared_ptr<const PipelineSpec> spec);

struct MstResult {
  SubgraphIndicator edges;  // over the host graph
  Weight total_weight = 0;
  bool spanning = false;  // false when the graph is disconnected (edges is then a spanning forest)
  std::vector<Weight> weight_seen;  // total as known at each node
};

struct ComponentLabels {
  std::vector<NodeId> label;
  std::vector<std::uint8_t> color;  // proper 2-coloring of the spanning forest of H
};

struct ForestLevels {
  std::vector<NodeId> root;
  std::vector<std::optional<NodeId>> parent;  // parent node in the forest
  std::vector<std::uint32_t> depth;
};

std::pair<MstResult, RunStats> distributed_mst(const Graph& g, const SimConfig& config);
std::pair<ComponentLabels, RunStats> distributed_components(const Graph& g, const SubgraphIndicator& h,
                                                            const SimConfig& config);
std::pair<ForestLevels, RunStats> rooted_forest_levels(const Graph& g, const SubgraphIndicator& h,
                                                       const SimConfig& config);

/// Fills in the round budget for pipeline runs when it is left at 0:
/// 10·(n + D) plus 100 rounds, since on tiny graphs B is smaller than one tag
/// plus an id and every message spans several frames.
SimConfig pipeline_config(const Graph& g, SimConfig config);

/// Weight 0 on H-edges, 1 elsewhere, as seen from node v's ports.
std::vector<Weight> indicator_weights(const Graph& g, const SubgraphIndicator& h, NodeId v);

}  // namespace dverify
