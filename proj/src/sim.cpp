#include "dverify/sim.hpp"

#include <exception>
#include <map>
#include <string>
#include <thread>

namespace dverify {

std::size_t SimConfig::effective_bandwidth(const Graph& g) const {
  return bandwidth != 0 ? bandwidth : 4 * id_bits(g.node_count());
}

std::uint64_t SimConfig::effective_max_rounds(const Graph& g) const {
  if (max_rounds != 0) return max_rounds;
  auto d = g.diameter();
  std::uint64_t dd = d == kUnreachable ? g.node_count() : d;
  return 10 * (g.node_count() + dd);
}

BandwidthExceeded::BandwidthExceeded(NodeId from_, std::size_t port_, std::size_t bits_, std::size_t bandwidth_)
    : std::runtime_error("node " + std::to_string(from_) + " port " + std::to_string(port_) + " sent " +
                         std::to_string(bits_) + " bits with B=" + std::to_string(bandwidth_)),
      from(from_),
      port(port_),
      bits(bits_),
      bandwidth(bandwidth_) {}

RoundBudgetExhausted::RoundBudgetExhausted(std::uint64_t rounds)
    : std::runtime_error("round budget of " + std::to_string(rounds) + " exhausted") {}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

std::vector<NodeContext> make_contexts(const Graph& g, const SimConfig& config, std::span<const BitString> inputs) {
  if (!inputs.empty() && inputs.size() != g.node_count()) throw ProgramFault("input count does not match node count");
  std::vector<NodeContext> ctx(g.node_count());
  const auto B = config.effective_bandwidth(g);
  for (NodeId v = 0; v < g.node_count(); ++v) {
    auto& c = ctx[v];
    c.id = v;
    c.n = g.node_count();
    c.bandwidth = B;
    c.neighbors = g.neighbors(v);
    c.incident = g.incident_edges(v);
    c.graph = &g;
    if (!inputs.empty()) c.input = inputs[v];
    c.public_seed = config.seed;
    c.private_seed = splitmix64(config.seed ^ splitmix64(v));
  }
  return ctx;
}

namespace {

struct Delivery {
  std::size_t slot;  // receiver incidence
  BitString payload;
};

class Engine {
 public:
  Engine(const Graph& g, const ProgramFactory& factory, std::span<const BitString> inputs, const SimConfig& config)
      : g_(g), config_(config), B_(config.effective_bandwidth(g)), budget_(config.effective_max_rounds(g)) {
    if (B_ == 0) throw ProgramFault("bandwidth must be positive");
    auto ctx = make_contexts(g, config, inputs);
    programs_.reserve(g.node_count());
    for (auto& c : ctx) {
      programs_.push_back(factory(c));
      if (!programs_.back()) throw ProgramFault("factory returned null for node " + std::to_string(c.id));
    }
    const std::size_t slots = g.incidence_count();
    reverse_.resize(slots);
    owner_.resize(slots);
    for (NodeId v = 0; v < g.node_count(); ++v) {
      auto nb = g.neighbors(v);
      for (std::size_t k = 0; k < nb.size(); ++k) {
        reverse_[g.incidence_offset(v) + k] = g.incidence_offset(nb[k]) + *g.port_of(nb[k], v);
        owner_[g.incidence_offset(v) + k] = v;
      }
    }
    inbox_.resize(slots);
    outbox_.resize(slots);
    free_slot_.assign(slots, 0);
    halted_.assign(g.node_count(), 0);
    stats_.outputs.assign(g.node_count(), 0);
    stats_.bandwidth = B_;
  }

  SimResult run() {
    for (NodeId v = 0; v < g_.node_count(); ++v) {
      auto out = out_span(v);
      guard(v, [&] { programs_[v]->init(out); });
    }
    collect(0);
    std::size_t running = g_.node_count();
    std::vector<StepStatus> status(g_.node_count());
    std::vector<std::exception_ptr> errors(g_.node_count());
    for (std::uint64_t t = 1; running > 0; ++t) {
      if (t > budget_) throw RoundBudgetExhausted(budget_);
      deliver(t);
      step_all(t, status, errors);
      for (NodeId v = 0; v < g_.node_count(); ++v)
        if (errors[v]) std::rethrow_exception(errors[v]);
      for (NodeId v = 0; v < g_.node_count(); ++v) {
        if (halted_[v] || !status[v].halted) continue;
        halted_[v] = 1;
        stats_.outputs[v] = status[v].output;
        stats_.rounds_used = t;
        --running;
      }
      collect(t);
    }
    return {std::move(stats_), std::move(programs_)};
  }

 private:
  std::span<Message> out_span(NodeId v) {
    return {outbox_.data() + g_.incidence_offset(v), g_.degree(v)};
  }

  template <class F>
  void guard(NodeId v, F&& f) {
    try {
      f();
    } catch (const BandwidthExceeded&) {
      throw;
    } catch (const ProgramFault&) {
      throw;
    } catch (const std::exception& e) {
      throw ProgramFault("node " + std::to_string(v) + ": " + e.what());
    }
  }

  void step_node(NodeId v, std::uint64_t t, StepStatus& st) {
    const auto off = g_.incidence_offset(v), deg = g_.degree(v);
    std::span<const Message> in(inbox_.data() + off, deg);
    guard(v, [&] { st = programs_[v]->step(t, in, out_span(v)); });
    for (std::size_t k = 0; k < deg; ++k) inbox_[off + k].reset();
  }

  void step_all(std::uint64_t t, std::vector<StepStatus>& status, std::vector<std::exception_ptr>& errors) {
    const std::size_t n = g_.node_count();
    auto work = [&](std::size_t lo, std::size_t hi) {
      for (std::size_t v = lo; v < hi; ++v) {
        status[v] = {};
        if (halted_[v]) continue;
        try {
          step_node(static_cast<NodeId>(v), t, status[v]);
        } catch (...) {
          errors[v] = std::current_exception();
        }
      }
    };
    unsigned threads = std::max(1u, config_.threads);
    if (threads == 1 || n < 2 * threads) {
      work(0, n);
      return;
    }
    std::vector<std::thread> pool;
    const std::size_t chunk = (n + threads - 1) / threads;
    for (unsigned i = 1; i < threads; ++i) {
      std::size_t lo = std::min(n, i * chunk), hi = std::min(n, lo + chunk);
      pool.emplace_back(work, lo, hi);
    }
    work(0, std::min(n, chunk));
    for (auto& th : pool) th.join();
  }

  // Moves emitted messages onto their directed edges. Applied after the global
  // barrier in node order, so the schedule never depends on stepping order.
  void collect(std::uint64_t t) {
    if (stats_.per_round_bits.size() <= t) stats_.per_round_bits.resize(t + 1, 0);
    for (NodeId v = 0; v < g_.node_count(); ++v) {
      const auto off = g_.incidence_offset(v);
      for (std::size_t k = 0; k < g_.degree(v); ++k) {
        auto& slot = outbox_[off + k];
        if (!slot) continue;
        const std::size_t len = slot->size();
        if (len > B_ && config_.strict_bits) throw BandwidthExceeded(v, k, len, B_);
        const std::uint64_t occupy = len <= B_ ? 1 : (len + B_ - 1) / B_;
        const std::uint64_t start = std::max<std::uint64_t>(t, free_slot_[off + k]);
        free_slot_[off + k] = start + occupy;
        pending_[start + occupy].push_back({reverse_[off + k], std::move(*slot)});
        slot.reset();
        stats_.total_bits += len;
        stats_.total_messages += 1;
        stats_.per_round_bits[t] += len;
        stats_.max_message_bits = std::max(stats_.max_message_bits, len);
      }
    }
  }

  void deliver(std::uint64_t t) {
    auto it = pending_.find(t);
    if (it == pending_.end()) return;
    for (auto& d : it->second) {
      if (halted_[owner_[d.slot]]) continue;  // dropped
      inbox_[d.slot] = std::move(d.payload);
    }
    pending_.erase(it);
  }

  const Graph& g_;
  const SimConfig& config_;
  std::size_t B_;
  std::uint64_t budget_;
  std::vector<std::unique_ptr<NodeProgram>> programs_;
  std::vector<std::size_t> reverse_;
  std::vector<NodeId> owner_;
  std::vector<Message> inbox_, outbox_;
  std::vector<std::uint64_t> free_slot_;
  std::vector<std::uint8_t> halted_;
  std::map<std::uint64_t, std::vector<Delivery>> pending_;
  RunStats stats_;
};

}  // namespace

SimResult simulate(const Graph& g, const ProgramFactory& factory, std::span<const BitString> inputs,
                   const SimConfig& config) {
  return Engine(g, factory, inputs, config).run();
}

}  // namespace dverify
