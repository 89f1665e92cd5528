#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "dverify/bits.hpp"
#include "dverify/graph.hpp"

namespace dverify {

using Message = std::optional<BitString>;

struct SimConfig {
  std::size_t bandwidth = 0;   // B in bits; 0 selects 4·⌈log2 n⌉
  std::uint64_t max_rounds = 0;  // 0 selects 10·(n + D)
  std::uint64_t seed = 0;        // public coin
  bool strict_bits = true;       // oversized payload throws instead of being chunked
  unsigned threads = 1;          // >1 steps nodes in parallel; results are identical

  std::size_t effective_bandwidth(const Graph& g) const;
  std::uint64_t effective_max_rounds(const Graph& g) const;
};

class BandwidthExceeded : public std::runtime_error {
 public:
  BandwidthExceeded(NodeId from, std::size_t port, std::size_t bits, std::size_t bandwidth);
  NodeId from;
  std::size_t port, bits, bandwidth;
};

class RoundBudgetExhausted : public std::runtime_error {
 public:
  explicit RoundBudgetExhausted(std::uint64_t rounds);
};

class ProgramFault : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::uint64_t splitmix64(std::uint64_t x);

/// What a node knows locally when it starts.
struct NodeContext {
  NodeId id = 0;
  std::size_t n = 0;
  std::size_t bandwidth = 0;
  std::span<const NodeId> neighbors;     // port k leads to neighbors[k]
  std::span<const EdgeId> incident;      // host edge id behind each port
  const Graph* graph = nullptr;          // for the weights of incident edges only
  BitString input;                       // opaque per-node input
  std::uint64_t public_seed = 0;         // identical at every node
  std::uint64_t private_seed = 0;        // splitmix of (seed, id)

  std::size_t degree() const { return neighbors.size(); }
  Weight port_weight(std::size_t port) const { return graph->weight(incident[port]); }
};

struct StepStatus {
  bool halted = false;
  std::uint8_t output = 0;

  static StepStatus running() { return {}; }
  static StepStatus halt(bool out) { return {true, static_cast<std::uint8_t>(out ? 1 : 0)}; }
};

/// Per-node state machine.
///
/// init runs before round 1 and may send. step(t) sees exactly the messages
/// emitted at step t-1 (or later for chunked payloads). Outbox slots are
/// cleared before every call; inbox and outbox are indexed by port.
class NodeProgram {
 public:
  virtual ~NodeProgram() = default;
  virtual void init(std::span<Message> outbox) { (void)outbox; }
  virtual StepStatus step(std::uint64_t round, std::span<const Message> inbox, std::span<Message> outbox) = 0;
};

using ProgramFactory = std::function<std::unique_ptr<NodeProgram>(const NodeContext&)>;

struct RunStats {
  std::uint64_t rounds_used = 0;
  std::uint64_t total_bits = 0;
  std::uint64_t total_messages = 0;
  std::size_t max_message_bits = 0;
  std::size_t bandwidth = 0;
  std::vector<std::uint64_t> per_round_bits;  // index = emission step (0 = init)
  std::vector<std::uint8_t> outputs;

  friend bool operator==(const RunStats&, const RunStats&) = default;
};

struct SimResult {
  RunStats stats;
  std::vector<std::unique_ptr<NodeProgram>> programs;
};

std::vector<NodeContext> make_contexts(const Graph& g, const SimConfig& config, std::span<const BitString> inputs);

/// Runs to completion. inputs may be empty (all nodes get an empty input).
SimResult simulate(const Graph& g, const ProgramFactory& factory, std::span<const BitString> inputs,
                   const SimConfig& config);

inline RunStats run(const Graph& g, const ProgramFactory& factory, std::span<const BitString> inputs,
                    const SimConfig& config) {
  return simulate(g, factory, inputs, config).stats;
}

}  // namespace dverify
