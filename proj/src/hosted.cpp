#include <algorithm>

#include "dverify/gadgets.hpp"

namespace dverify {

void VirtualGraph::validate(const Graph& physical) const {
  const std::size_t n = physical.node_count();
  if (graph.node_count() < n || host.size() != graph.node_count())
    throw GraphError("virtual graph: every physical node must host its own id");
  for (NodeId v = 0; v < n; ++v)
    if (host[v] != v) throw GraphError("virtual graph: node " + std::to_string(v) + " must be hosted by itself");
  std::vector<std::uint8_t> used(physical.edge_count(), 0);
  for (const Edge& e : graph.edges()) {
    NodeId a = host.at(e.u), b = host.at(e.v);
    if (a >= n || b >= n) throw GraphError("virtual graph: host out of range");
    if (a == b) continue;
    auto pe = physical.find_edge(a, b);
    if (!pe) throw GraphError("virtual graph: edge has no physical carrier");
    if (used[*pe]++) throw GraphError("virtual graph: physical edge carries two virtual edges");
  }
}

namespace {

struct Route {
  bool internal = false;
  NodeId target = 0;            // internal: receiving virtual node
  std::size_t port = 0;         // internal: its port; external: physical port of the host
};

struct HostShared {
  std::shared_ptr<const VirtualGraph> virt;
  ProgramFactory inner;
  std::vector<NodeContext> ctx;
  std::vector<std::vector<NodeId>> hosted;  // physical node -> its virtual nodes, own id first
  std::vector<std::vector<Route>> route;    // virtual node, port
  // physical node, port -> receiving virtual node and port
  std::vector<std::vector<std::pair<NodeId, std::size_t>>> inbound;
};

class HostNode final : public NodeProgram {
 public:
  HostNode(const NodeContext& phys, std::shared_ptr<const HostShared> sh) : sh_(std::move(sh)) {
    mine_ = sh_->hosted[phys.id];
    for (std::size_t i = 0; i < mine_.size(); ++i) {
      NodeContext c = sh_->ctx[mine_[i]];
      c.public_seed = phys.public_seed;
      c.private_seed = i == 0 ? phys.private_seed : splitmix64(phys.private_seed ^ mine_[i]);
      if (i == 0) c.input = phys.input;
      progs_.push_back(sh_->inner(c));
      next_.emplace_back(c.degree());
    }
    halted_.assign(mine_.size(), 0);
  }

  void init(std::span<Message> outbox) override {
    for (std::size_t i = 0; i < mine_.size(); ++i) {
      std::vector<Message> out(next_[i].size());
      progs_[i]->init(out);
      send(i, out, outbox);
    }
  }

  StepStatus step(std::uint64_t round, std::span<const Message> inbox, std::span<Message> outbox) override {
    auto cur = std::move(next_);
    next_.clear();
    for (auto& in : cur) next_.emplace_back(in.size());
    const auto& inbound = sh_->inbound[mine_[0]];
    for (std::size_t k = 0; k < inbox.size(); ++k) {
      if (!inbox[k]) continue;
      auto [to, port] = inbound[k];
      cur[local(to)][port] = inbox[k];
    }
    for (std::size_t i = 0; i < mine_.size(); ++i) {
      if (halted_[i]) continue;
      std::vector<Message> out(cur[i].size());
      auto st = progs_[i]->step(round, cur[i], out);
      send(i, out, outbox);
      if (st.halted) {
        halted_[i] = 1;
        if (i == 0) output_ = st.output;
      }
    }
    bool done = std::all_of(halted_.begin(), halted_.end(), [](auto h) { return h != 0; });
    return done ? StepStatus::halt(output_ != 0) : StepStatus::running();
  }

 private:
  std::size_t local(NodeId v) const {
    return static_cast<std::size_t>(std::find(mine_.begin(), mine_.end(), v) - mine_.begin());
  }

  void send(std::size_t i, std::vector<Message>& out, std::span<Message> outbox) {
    const auto& routes = sh_->route[mine_[i]];
    for (std::size_t k = 0; k < out.size(); ++k) {
      if (!out[k]) continue;
      const Route& r = routes[k];
      if (!r.internal) {
        outbox[r.port] = std::move(out[k]);
        continue;
      }
      std::size_t j = local(r.target);
      if (!halted_[j]) next_[j][r.port] = std::move(out[k]);
    }
  }

  std::shared_ptr<const HostShared> sh_;
  std::vector<NodeId> mine_;
  std::vector<std::unique_ptr<NodeProgram>> progs_;
  std::vector<std::vector<Message>> next_;  // internal messages for the next step
  std::vector<std::uint8_t> halted_;
  std::uint8_t output_ = 0;
};

}  // namespace

ProgramFactory hosted_factory(const Graph& physical, std::shared_ptr<const VirtualGraph> virt, ProgramFactory inner,
                              std::size_t bandwidth) {
  virt->validate(physical);
  auto sh = std::make_shared<HostShared>();
  const Graph& vg = virt->graph;
  SimConfig cfg;
  cfg.bandwidth = bandwidth;
  sh->ctx = make_contexts(vg, cfg, {});
  sh->hosted.resize(physical.node_count());
  for (NodeId v = 0; v < vg.node_count(); ++v) sh->hosted[virt->host[v]].push_back(v);
  sh->route.resize(vg.node_count());
  sh->inbound.resize(physical.node_count());
  for (NodeId v = 0; v < physical.node_count(); ++v) sh->inbound[v].resize(physical.degree(v));
  for (NodeId a = 0; a < vg.node_count(); ++a) {
    auto nb = vg.neighbors(a);
    for (std::size_t k = 0; k < nb.size(); ++k) {
      NodeId b = nb[k], ha = virt->host[a], hb = virt->host[b];
      Route r;
      if (ha == hb) {
        r.internal = true;
        r.target = b;
        r.port = *vg.port_of(b, a);
      } else {
        r.port = *physical.port_of(ha, hb);
        sh->inbound[hb][*physical.port_of(hb, ha)] = {b, *vg.port_of(b, a)};
      }
      sh->route[a].push_back(r);
    }
  }
  sh->virt = std::move(virt);
  sh->inner = std::move(inner);
  return [sh](const NodeContext& ctx) -> std::unique_ptr<NodeProgram> { return std::make_unique<HostNode>(ctx, sh); };
}

}  // namespace dverify
