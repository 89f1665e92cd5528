#include <algorithm>
#include <deque>
#include <sstream>

#include "dverify/gadgets.hpp"

namespace dverify {

namespace {

void require_plain(const FamilyGraph& f) {
  if (f.ham_b != 0 || f.extra_node_begin != f.graph.node_count())
    throw std::invalid_argument("expected a plain G(Γ,d,p)");
}

BitString to_bits(const std::vector<bool>& v) {
  BitString s;
  for (bool b : v) s.append(b ? 1 : 0, 1);
  return s;
}

// Path index (1-based) of a path node.
std::size_t path_of(const FamilyGraph& f, NodeId v) { return (v - f.params.tree_size()) / f.params.leaves() + 1; }
std::size_t column_of(const FamilyGraph& f, NodeId v) { return (v - f.params.tree_size()) % f.params.leaves(); }

}  // namespace

std::vector<BitString> family_inputs(const FamilyGraph& f, const InputPair& in) {
  in.validate();
  std::vector<BitString> inputs(f.graph.node_count());
  inputs[f.s()] = to_bits(in.x);
  inputs[f.r()] = to_bits(in.y);
  return inputs;
}

// disj through the scs gadget ---------------------------------------------------

namespace {

class GadgetInputNode final : public NodeProgram {
 public:
  GadgetInputNode(const NodeContext& ctx, std::shared_ptr<const FamilyGraph> f, std::shared_ptr<const VerifierPlan> plan,
                  std::size_t b)
      : ctx_(ctx), f_(std::move(f)), plan_(std::move(plan)), b_(b) {
    if ((is_s() || is_r()) && ctx_.input.size() != b_) throw std::invalid_argument("disj: input has the wrong length");
  }

  // s and r tell each spoke neighbor whether the spoke is in H.
  void init(std::span<Message> outbox) override {
    if (!is_s() && !is_r()) return;
    for (std::size_t k = 0; k < ctx_.degree(); ++k) {
      if (f_->edge_class[ctx_.incident[k]] != EdgeClass::spoke) continue;
      std::size_t path = path_of(*f_, ctx_.neighbors[k]);
      if (path > b_) continue;
      BitString m;
      m.append(ctx_.input.bit(path - 1), 1);
      outbox[k] = std::move(m);
    }
  }

  StepStatus step(std::uint64_t round, std::span<const Message> inbox, std::span<Message> outbox) override {
    if (round > 1) return inner_->step(round - 1, inbox, outbox);
    std::vector<std::uint8_t> row(ctx_.degree(), 0);
    for (std::size_t k = 0; k < row.size(); ++k) {
      NodeId w = ctx_.neighbors[k];
      switch (f_->edge_class[ctx_.incident[k]]) {
        case EdgeClass::path:
        case EdgeClass::tree:
          row[k] = 1;
          break;
        case EdgeClass::spoke:
          if (is_s() || is_r()) {
            std::size_t path = path_of(*f_, w);
            row[k] = path > b_ || !ctx_.input.bit(path - 1);
          } else if (w == f_->s() || w == f_->r()) {
            row[k] = !inbox[k] || !inbox[k]->bit(0);
          }
          break;
        case EdgeClass::extra:
          break;
      }
    }
    inner_ = plan_->node(ctx_, std::move(row));
    inner_->init(outbox);
    return StepStatus::running();
  }

 private:
  bool is_s() const { return ctx_.id == f_->s(); }
  bool is_r() const { return ctx_.id == f_->r(); }

  NodeContext ctx_;
  std::shared_ptr<const FamilyGraph> f_;
  std::shared_ptr<const VerifierPlan> plan_;
  std::size_t b_;
  std::unique_ptr<NodeProgram> inner_;
};

}  // namespace

ProgramFactory disj_program(const FamilyGraph& family, std::size_t b) {
  require_plain(family);
  if (b == 0 || b > family.params.gamma) throw std::invalid_argument("disj: need 1 <= b <= Γ");
  auto f = std::make_shared<const FamilyGraph>(family);
  auto plan = std::make_shared<const VerifierPlan>(Problem::scs, family.graph.node_count(), ExtraArgs{});
  return [f, plan, b](const NodeContext& ctx) -> std::unique_ptr<NodeProgram> {
    return std::make_unique<GadgetInputNode>(ctx, f, plan, b);
  };
}

// Tree relay ------------------------------------------------------------------------

namespace {

class TreeRelayNode final : public NodeProgram {
 public:
  TreeRelayNode(const NodeContext& ctx, std::shared_ptr<const FamilyGraph> f, std::size_t b, TwoPartyFunction fn)
      : ctx_(ctx), f_(std::move(f)), b_(b), fn_(fn) {
    const Graph& g = f_->graph;
    const NodeId v = ctx_.id;
    if (f_->is_tree_node(v) && v != 0) parent_ = *g.port_of(v, f_->tree_parent(v));
    if (v == 0) {
      x_port_ = *g.port_of(v, f_->tree_node(1, 0));
      y_port_ = *g.port_of(v, f_->tree_node(1, f_->params.d - 1));
    }
    if (v == f_->s() || v == f_->r()) {
      if (ctx_.input.size() != b_) throw std::invalid_argument("relay: input has the wrong length");
      for (std::size_t pos = 0; pos < b_; pos += ctx_.bandwidth) {
        std::size_t len = std::min(ctx_.bandwidth, b_ - pos);
        BitString chunk;
        for (std::size_t i = 0; i < len; ++i) chunk.append(ctx_.input.bit(pos + i), 1);
        up_.push_back(std::move(chunk));
      }
    }
  }

  void init(std::span<Message> outbox) override { pump(outbox); }

  StepStatus step(std::uint64_t, std::span<const Message> inbox, std::span<Message> outbox) override {
    const NodeId v = ctx_.id;
    if (!f_->is_tree_node(v)) {
      for (const auto& m : inbox)
        if (m) return StepStatus::halt(m->bit(0));
      return StepStatus::running();
    }
    for (std::size_t k = 0; k < inbox.size(); ++k) {
      if (!inbox[k]) continue;
      if (parent_ && k == *parent_) return broadcast(inbox[k]->bit(0), outbox);
      if (v != 0) {
        up_.push_back(*inbox[k]);
      } else {
        auto& dst = k == x_port_ ? x_ : y_;
        for (std::size_t i = 0; i < inbox[k]->size(); ++i) dst.push_back(inbox[k]->bit(i));
      }
    }
    if (v == 0 && x_.size() == b_ && y_.size() == b_) {
      InputPair in{x_, y_};
      return broadcast(fn_ == TwoPartyFunction::disj ? eval_disj(in) : eval_eq(in), outbox);
    }
    pump(outbox);
    return StepStatus::running();
  }

 private:
  void pump(std::span<Message> outbox) {
    if (up_.empty() || !parent_) return;
    outbox[*parent_] = std::move(up_.front());
    up_.pop_front();
  }

  StepStatus broadcast(bool bit, std::span<Message> outbox) {
    for (std::size_t k = 0; k < outbox.size(); ++k) {
      if (parent_ && k == *parent_) continue;
      BitString m;
      m.append(bit ? 1 : 0, 1);
      outbox[k] = std::move(m);
    }
    return StepStatus::halt(bit);
  }

  NodeContext ctx_;
  std::shared_ptr<const FamilyGraph> f_;
  std::size_t b_;
  TwoPartyFunction fn_;
  std::optional<std::size_t> parent_;
  std::size_t x_port_ = 0, y_port_ = 0;
  std::deque<BitString> up_;
  std::vector<bool> x_, y_;
};

}  // namespace

ProgramFactory tree_relay_program(const FamilyGraph& family, std::size_t b, TwoPartyFunction fn) {
  require_plain(family);
  if (b == 0) throw std::invalid_argument("relay: b must be positive");
  auto f = std::make_shared<const FamilyGraph>(family);
  return [f, b, fn](const NodeContext& ctx) -> std::unique_ptr<NodeProgram> {
    return std::make_unique<TreeRelayNode>(ctx, f, b, fn);
  };
}

// Frontier sets -----------------------------------------------------------------------

CutFrontier CutFrontier::build(const FamilyGraph& f, std::size_t rounds) {
  require_plain(f);
  const auto& pr = f.params;
  const std::size_t n = f.graph.node_count(), m = pr.m();
  // Leaf range below each tree node.
  std::vector<std::size_t> lo(n, 0), hi(n, 0);
  std::size_t span = pr.leaves();
  for (std::size_t level = 0, width = 1; level <= pr.p; ++level, width *= pr.d, span /= pr.d)
    for (std::size_t i = 0; i < width; ++i) {
      NodeId u = f.tree_node(level, i);
      lo[u] = i * span;
      hi[u] = (i + 1) * span - 1;
    }
  for (NodeId v = static_cast<NodeId>(pr.tree_size()); v < n; ++v) lo[v] = hi[v] = column_of(f, v);

  CutFrontier cf;
  for (std::size_t t = 0; t <= rounds; ++t) {
    std::vector<std::uint8_t> L(n), R(n);
    for (NodeId v = 0; v < n; ++v) {
      if (t == 0) {
        L[v] = v != f.r();
        R[v] = v != f.s();
      } else {
        L[v] = lo[v] + t <= m;
        R[v] = hi[v] >= t;
      }
    }
    cf.left.push_back(std::move(L));
    cf.right.push_back(std::move(R));
  }
  return cf;
}

// Extraction ----------------------------------------------------------------------------

namespace {

// One party's view: exact programs for the nodes it currently holds.
struct Party {
  std::vector<std::unique_ptr<NodeProgram>> progs;
  std::vector<std::vector<Message>> out;  // emitted at the last step
  std::vector<std::uint8_t> halted, output;
};

void check_sizes(NodeId v, const std::vector<Message>& out, std::size_t B) {
  for (std::size_t k = 0; k < out.size(); ++k)
    if (out[k] && out[k]->size() > B) throw BandwidthExceeded(v, k, out[k]->size(), B);
}

Party start_party(const Graph& g, const ProgramFactory& program, const std::vector<NodeContext>& ctx,
                  const std::vector<std::uint8_t>& held, std::size_t B) {
  Party p;
  const std::size_t n = g.node_count();
  p.progs.resize(n);
  p.out.resize(n);
  p.halted.assign(n, 0);
  p.output.assign(n, 0);
  for (NodeId v = 0; v < n; ++v) {
    if (!held[v]) continue;
    p.progs[v] = program(ctx[v]);
    p.out[v].assign(g.degree(v), std::nullopt);
    p.progs[v]->init(p.out[v]);
    check_sizes(v, p.out[v], B);
  }
  return p;
}

// Advances `me` from its set at t-1 to `now`, reading messages from outside
// `before` out of `other`. Returns the number of frontier edges.
std::size_t advance(const Graph& g, Party& me, const Party& other, const std::vector<std::uint8_t>& before,
                    const std::vector<std::uint8_t>& now, const std::vector<std::uint8_t>& other_before,
                    std::uint64_t t, bool alice, std::size_t B, TwoPartyTranscript& tr) {
  const std::size_t n = g.node_count();
  std::size_t frontier = 0;
  std::vector<std::vector<Message>> inbox(n);
  for (NodeId v = 0; v < n; ++v) {
    if (!now[v]) continue;
    auto nb = g.neighbors(v);
    inbox[v].resize(nb.size());
    for (std::size_t k = 0; k < nb.size(); ++k) {
      NodeId w = nb[k];
      std::size_t back = *g.port_of(w, v);
      if (before[w]) {
        inbox[v][k] = me.out[w][back];
        continue;
      }
      ++frontier;
      if (!other_before[w]) throw std::logic_error("two-party: frontier message from a node neither party holds");
      const Message& m = other.out[w][back];
      inbox[v][k] = m;
      if (!m) continue;
      tr.log.push_back({t, !alice, *m});
      (alice ? tr.bits_bob_to_alice : tr.bits_alice_to_bob) += m->size();
    }
  }
  std::vector<std::vector<Message>> next(n);
  for (NodeId v = 0; v < n; ++v) {
    if (!now[v]) continue;
    next[v].assign(g.degree(v), std::nullopt);
    if (me.halted[v]) continue;
    auto st = me.progs[v]->step(t, inbox[v], next[v]);
    check_sizes(v, next[v], B);
    if (st.halted) {
      me.halted[v] = 1;
      me.output[v] = st.output;
    }
  }
  for (NodeId v = 0; v < n; ++v)
    if (!now[v]) me.progs[v].reset();
  me.out = std::move(next);
  return frontier;
}

}  // namespace

TwoPartyTranscript two_party_simulate(const FamilyGraph& family, const ProgramFactory& program, const InputPair& in,
                                      const SimConfig& config) {
  require_plain(family);
  in.validate();
  if (!config.strict_bits) throw std::invalid_argument("two-party: chunked delivery is not supported");
  const Graph& g = family.graph;
  const auto& pr = family.params;
  const NodeId s = family.s(), r = family.r();
  const auto inputs = family_inputs(family, in);
  const auto direct = run(g, program, inputs, config);

  TwoPartyTranscript tr;
  tr.rounds = direct.rounds_used;
  tr.direct_s = direct.outputs[s];
  tr.direct_r = direct.outputs[r];
  const std::uint64_t T = tr.rounds, leaves = pr.leaves();
  if (2 * T >= leaves - 1)
    throw SimulationRefused("two-party: the program runs " + std::to_string(T) +
                            " rounds; extraction needs T < (d^p-1)/2 = " + std::to_string(leaves - 1) + "/2");
  const std::size_t B = config.effective_bandwidth(g), dp = pr.d * pr.p;
  tr.bound = 2 * dp * B * T;

  auto cf = CutFrontier::build(family, T);
  // Alice never sees y and Bob never sees x.
  std::vector<BitString> a_in(g.node_count()), b_in(g.node_count());
  a_in[s] = inputs[s];
  b_in[r] = inputs[r];
  auto a_ctx = make_contexts(g, config, a_in), b_ctx = make_contexts(g, config, b_in);
  Party alice = start_party(g, program, a_ctx, cf.left[0], B);
  Party bob = start_party(g, program, b_ctx, cf.right[0], B);

  for (std::uint64_t t = 1; t <= T; ++t) {
    Party a_prev_out;  // Bob reads Alice's step t-1 messages, so both advance from the same snapshot
    a_prev_out.out = alice.out;
    a_prev_out.halted = alice.halted;
    std::size_t fa = advance(g, alice, bob, cf.left[t - 1], cf.left[t], cf.right[t - 1], t, true, B, tr);
    std::size_t fb = advance(g, bob, a_prev_out, cf.right[t - 1], cf.right[t], cf.left[t - 1], t, false, B, tr);
    tr.max_frontier_edges = std::max({tr.max_frontier_edges, fa, fb});
    if (fa > dp || fb > dp)
      throw std::logic_error("two-party: " + std::to_string(std::max(fa, fb)) + " frontier edges in round " +
                             std::to_string(t) + ", more than dp = " + std::to_string(dp));
  }
  if (!alice.halted[s] || !bob.halted[r]) throw std::logic_error("two-party: s or r still running after T rounds");
  tr.alice_output = alice.output[s];
  tr.bob_output = bob.output[r];
  return tr;
}

std::string format_transcript(const TwoPartyTranscript& t) {
  std::ostringstream os;
  os << "# rounds=" << t.rounds << " alice_to_bob=" << t.bits_alice_to_bob << " bob_to_alice=" << t.bits_bob_to_alice
     << " bound=" << t.bound << " alice=" << int(t.alice_output) << " bob=" << int(t.bob_output) << "\n";
  for (const auto& e : t.log)
    os << e.round << ' ' << (e.alice_to_bob ? "A->B" : "B->A") << ' ' << e.payload.size() << ' '
       << e.payload.to_hex() << "\n";
  return os.str();
}

}  // namespace dverify
