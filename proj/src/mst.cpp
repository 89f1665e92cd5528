#include "dverify/mst.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <tuple>
#include <unordered_map>

#include "link.hpp"

namespace dverify {

namespace {

using detail::kTagBits;
using detail::Link;

enum Tag : unsigned {
  EXPLORE, CHILD, DONE,                    // leader election / BFS tree
  CMD, ACK,                                // stage barriers driven by the leader
  FID, REPORT, CHOOSE, CONNECT, CONNACK, NEWFID,  // fragment phases
  UP, UPEND, SEL, SELEND, SUM,             // pipelined upcast
  LCONV, LDOWN, XLBL, PAIR, PEND, MAP, MAPEND,  // labels
  DEPTH, AGG, VERDICT,
  kTagCount
};
static_assert(kTagCount <= (1u << kTagBits));

enum Cmd : unsigned { PHASE, MERGE, STAGEB, LEVELS, AGGREGATE };
constexpr unsigned kCmdBits = 3;
constexpr int kNone = -1;

// (weight, smaller id, larger id): the total order every node agrees on.
using Key = std::tuple<Weight, NodeId, NodeId>;

struct Candidate {
  Key key;
  NodeId fa, fb;
  bool operator<(const Candidate& o) const { return key < o.key; }
};

class FidForest {
 public:
  NodeId find(NodeId x) {
    auto it = parent_.find(x);
    if (it == parent_.end() || it->second == x) return x;
    NodeId r = find(it->second);
    it->second = r;
    return r;
  }
  bool unite(NodeId a, NodeId b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent_[std::max(a, b)] = std::min(a, b);
    return true;
  }

 private:
  std::unordered_map<NodeId, NodeId> parent_;
};

// Union-find over labels that also tracks parity to the class root.
class ParityForest {
 public:
  std::pair<NodeId, bool> find(NodeId x) {
    auto it = parent_.find(x);
    if (it == parent_.end()) {
      parent_.emplace(x, std::make_pair(x, false));
      return {x, false};
    }
    if (it->second.first == x) return {x, false};
    auto [r, p] = find(it->second.first);
    auto& slot = parent_[x];
    slot = {r, static_cast<bool>(slot.second ^ p)};
    return slot;
  }
  // Records parity(a) ^ parity(b) == rel; false if that contradicts what is known.
  bool unite(NodeId a, NodeId b, bool rel) {
    auto [ra, pa] = find(a);
    auto [rb, pb] = find(b);
    joined_ = ra != rb;
    if (!joined_) return (pa ^ pb) == rel;
    parent_[rb] = {ra, static_cast<bool>(pa ^ pb ^ rel)};
    return true;
  }
  bool joined_last() const { return joined_; }
  std::vector<NodeId> elements() const {
    std::vector<NodeId> out;
    for (const auto& [k, v] : parent_) out.push_back(k);
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  std::unordered_map<NodeId, std::pair<NodeId, bool>> parent_;
  bool joined_ = false;
};

}  // namespace

struct PipelineNode::Impl {
  PipelineNode* self;
  NodeId id;
  std::size_t n;
  std::span<const NodeId> nbr;
  std::vector<Weight> w;
  std::shared_ptr<const PipelineSpec> spec;
  unsigned I, C, W, TW;
  std::size_t deg;
  Link link;

  // election
  NodeId root_r;
  int parent = kNone;
  std::vector<std::uint8_t> child, pending, done;
  std::size_t child_count = 0, pending_left = 0, done_count = 0, done_size = 0;
  bool election_sent = false, is_root = false;
  std::size_t comp_size = 0;

  // barrier for PHASE / LEVELS
  std::size_t ack_count = 0;
  bool ack_flag = false;

  // fragments
  NodeId fid;
  int frag_parent = kNone;
  std::vector<std::uint8_t> tree;
  bool frozen = false, participating = false, phase_on = false, merge_on = false;
  std::vector<NodeId> nbr_fid;
  std::size_t fid_count = 0, report_count = 0, size_acc = 0;
  std::optional<Key> best;
  bool report_sent = false, got_choose = false, chose = false, got_connack = false, got_new = false;
  int connect_out = kNone;
  std::vector<std::uint8_t> connect_in;
  // Top node of this node's zero-weight class inside the fragment tree, and
  // the parity of the distance to it; maintained by the NEWFID floods.
  NodeId top_label;
  bool top_parity = false;

  // pipelined upcast
  bool stageb_on = false, upend_sent = false, selend = false, sum_sent = false;
  std::multiset<Candidate> cands;
  std::vector<std::optional<Key>> child_last;
  std::vector<std::uint8_t> child_ended;
  std::size_t ended_count = 0, sum_count = 0;
  Weight sum_acc = 0, total = 0;
  FidForest fids;
  std::vector<std::uint8_t> sel;

  // labels
  bool labels_on = false, lconv_sent = false, have_local = false, pend_sent = false, mapped = false;
  bool labels_final = false;
  std::size_t lconv_count = 0, pend_count = 0;
  NodeId sub_min, local_label = 0, final_label = 0;
  bool parity = false, colour = false;
  std::vector<std::optional<std::pair<NodeId, bool>>> xlbl;
  std::vector<std::tuple<NodeId, bool, NodeId, bool>> pairs;  // leader only

  // levels
  bool levels_on = false, have_depth = false;
  std::uint32_t depth = 0;
  int forest_parent = kNone;

  // aggregation
  bool agg_on = false, agg_sent = false, parity_bad = false;
  std::size_t agg_count = 0;
  ParityForest relay;  // constraints already forwarded towards the leader
  std::vector<std::uint64_t> agg_acc;

  bool got_verdict = false, verdict = false;

  Impl(PipelineNode* owner, const NodeContext& ctx, std::vector<Weight> weights, std::shared_ptr<const PipelineSpec> s)
      : self(owner),
        id(ctx.id),
        n(ctx.n),
        nbr(ctx.neighbors),
        w(std::move(weights)),
        spec(std::move(s)),
        I(id_bits(ctx.n)),
        C(width_for(ctx.n)),
        W(spec->weight_bits),
        TW(std::min(64u, spec->weight_bits + width_for(ctx.n))),
        deg(ctx.degree()),
        link(ctx.degree(), ctx.bandwidth, [this](unsigned tag) { return length(tag); }),
        root_r(ctx.id),
        child(deg, 0),
        pending(deg, 1),
        done(deg, 0),
        fid(ctx.id),
        top_label(ctx.id),
        tree(deg, 0),
        nbr_fid(deg, 0),
        connect_in(deg, 0),
        child_last(deg),
        child_ended(deg, 0),
        sel(deg, 0),
        sub_min(ctx.id),
        xlbl(deg) {
    if (w.size() != deg) throw std::invalid_argument("pipeline: one weight per port required");
    for (Weight x : w)
      if (W < 64 && (x >> W) != 0) throw std::invalid_argument("pipeline: weight exceeds declared width");
    pending_left = deg;
    if (spec->levels && !spec->labels_to_nodes) throw std::invalid_argument("pipeline: levels need final labels");
    reset_agg();
  }

  std::size_t length(unsigned tag) const {
    std::size_t body = 0;
    switch (tag) {
      case EXPLORE: case CHILD: case FID: case LCONV: case DEPTH: body = I; break;
      case DONE: body = I + C; break;
      case CMD: body = kCmdBits; break;
      case ACK: body = 1; break;
      case REPORT: body = 1 + W + 2 * I + C; break;
      case CHOOSE: body = 1 + 2 * I; break;
      case NEWFID: body = 2 * I + 2; break;
      case LDOWN: case XLBL: body = I + 1; break;
      case UP: body = 4 * I + W; break;
      case SEL: body = 2 * I; break;
      case SUM: body = TW + (fields_on_sum() ? field_bits() : 0); break;
      case PAIR: body = 2 * I + 2; break;
      case MAP: body = 2 * I + 1; break;
      case AGG: body = field_bits(); break;
      case VERDICT: body = 1 + TW; break;
      case PEND: body = (fields_on_pend() ? field_bits() : 0) + (spec->parity_check ? 1 : 0); break;
      case CONNECT: case CONNACK: case UPEND: case SELEND: case MAPEND: break;
      default: throw std::logic_error("pipeline: unknown tag");
    }
    return kTagBits + body;
  }

  struct Out {
    BitWriter bw;
    explicit Out(Tag t) { bw.put(t, kTagBits); }
    Out& operator()(std::uint64_t v, unsigned width) {
      bw.put(v, width);
      return *this;
    }
  };
  void send(int port, Out& o) { link.send(static_cast<std::size_t>(port), o.bw.finish()); }
  void send(int port, Out&& o) { send(port, o); }
  template <class F>
  void to_children(F make) {
    for (std::size_t k = 0; k < deg; ++k)
      if (child[k]) send(static_cast<int>(k), make());
  }

  int port_of(NodeId v) const {
    auto it = std::lower_bound(nbr.begin(), nbr.end(), v);
    if (it == nbr.end() || *it != v) throw std::logic_error("pipeline: endpoint is not a neighbor");
    return static_cast<int>(it - nbr.begin());
  }
  bool mst(std::size_t k) const { return tree[k] || sel[k]; }
  bool in_f(std::size_t k) const { return mst(k) && w[k] == 0; }
  std::size_t frag_children() const {
    std::size_t c = 0;
    for (std::size_t k = 0; k < deg; ++k) c += tree[k] && static_cast<int>(k) != frag_parent;
    return c;
  }
  // Local values travel on the SUM convergecast when there are no labels, on
  // PEND when labels stay at the leader, and in a separate stage otherwise.
  bool labels_any() const { return spec->labels || spec->levels || spec->parity_check; }
  bool fields_on_sum() const { return !labels_any(); }
  bool fields_on_pend() const { return labels_any() && !spec->labels_to_nodes; }
  bool agg_enabled() const { return labels_any() && spec->labels_to_nodes && !spec->fields.empty(); }
  std::size_t field_bits() const {
    std::size_t b = 0;
    for (const auto& f : spec->fields) b += f.width;
    return b;
  }
  void put_fields(Out& o) const {
    for (std::size_t i = 0; i < agg_acc.size(); ++i) o(agg_acc[i], spec->fields[i].width);
  }
  void read_fields(BitReader& r) {
    std::vector<std::uint64_t> vals;
    for (const auto& f : spec->fields) vals.push_back(r.get(f.width));
    combine(vals);
  }
  void add_local_values() {
    if (!spec->local_values) return;
    auto vals = spec->local_values(*self);
    if (vals.size() != spec->fields.size()) throw std::logic_error("pipeline: wrong number of local values");
    combine(vals);
  }
  void reset_agg() {
    agg_acc.assign(spec->fields.size(), 0);
    for (std::size_t i = 0; i < spec->fields.size(); ++i)
      if (spec->fields[i].op == AggOp::min)
        agg_acc[i] = spec->fields[i].width >= 64 ? ~0ull : (1ull << spec->fields[i].width) - 1;
  }
  void combine(const std::vector<std::uint64_t>& vals) {
    for (std::size_t i = 0; i < vals.size(); ++i) {
      switch (spec->fields[i].op) {
        case AggOp::sum: agg_acc[i] += vals[i]; break;
        case AggOp::bit_or: agg_acc[i] |= vals[i]; break;
        case AggOp::min: agg_acc[i] = std::min(agg_acc[i], vals[i]); break;
      }
    }
  }

  // ---- election -----------------------------------------------------------

  static bool election_tag(unsigned t) { return t == EXPLORE || t == CHILD || t == DONE; }

  void start_election() {
    for (std::size_t k = 0; k < deg; ++k) send(static_cast<int>(k), Out(EXPLORE)(id, I));
  }

  void adopt(NodeId r, int from) {
    for (std::size_t k = 0; k < deg; ++k) link.purge(k, election_tag);
    root_r = r;
    parent = from;
    std::fill(child.begin(), child.end(), 0);
    std::fill(done.begin(), done.end(), 0);
    child_count = done_count = done_size = 0;
    election_sent = false;
    pending_left = 0;
    for (std::size_t k = 0; k < deg; ++k) {
      pending[k] = static_cast<int>(k) != from;
      pending_left += pending[k];
    }
    send(from, Out(CHILD)(r, I));
    for (std::size_t k = 0; k < deg; ++k)
      if (pending[k]) send(static_cast<int>(k), Out(EXPLORE)(r, I));
  }

  void clear_pending(std::size_t k) {
    if (pending[k]) {
      pending[k] = 0;
      --pending_left;
    }
  }

  bool try_election() {
    if (election_sent || pending_left > 0 || done_count < child_count) return false;
    election_sent = true;
    if (parent != kNone) {
      send(parent, Out(DONE)(root_r, I)(1 + done_size, C));
    } else {
      is_root = true;
      comp_size = 1 + done_size;
      broadcast(PHASE);
    }
    return true;
  }

  // ---- stage control --------------------------------------------------------

  void broadcast(Cmd c) {
    to_children([&] { return Out(CMD)(c, kCmdBits); });
    start(c);
  }

  void start(Cmd c) {
    ack_count = 0;
    ack_flag = false;
    switch (c) {
      case PHASE:
        phase_on = true;
        participating = !frozen;
        for (std::size_t k = 0; k < deg; ++k) send(static_cast<int>(k), Out(FID)(fid, I));
        break;
      case MERGE: start_merge(); break;
      case STAGEB: start_stageb(); break;
      case LEVELS:
        levels_on = true;
        if (final_label == id) {
          have_depth = true;
          for (std::size_t k = 0; k < deg; ++k)
            if (in_f(k)) send(static_cast<int>(k), Out(DEPTH)(0, I));
        }
        break;
      case AGGREGATE: agg_on = true; break;
    }
  }

  void finish_labels_or_aggregate() {
    if (spec->levels) broadcast(LEVELS);
    else if (agg_enabled()) broadcast(AGGREGATE);
    else send_verdict();
  }

  // With labels the leader moves on from try_pend instead.
  void after_sum() {
    if (!labels_any()) send_verdict();
  }

  void send_verdict(std::function<NodeId(NodeId)> resolve = {}) {
    RootView view{n, comp_size, total, agg_acc, std::move(resolve), parity_bad};
    verdict = spec->decide ? spec->decide(view) : comp_size == n;
    to_children([&] { return Out(VERDICT)(verdict, 1)(total, TW); });
    got_verdict = true;
  }

  bool barrier_local_done(Cmd& which) {
    if (phase_on) {
      which = PHASE;
      return fid_count == deg && (!participating || (got_choose && (connect_out == kNone || got_connack)));
    }
    if (levels_on && !have_depth_acked) {
      which = LEVELS;
      return have_depth;
    }
    return false;
  }
  bool have_depth_acked = false;

  // The next phase starts locally as soon as this node's merge is complete;
  // its FID cannot be counted early because counters reset at the phase ACK.
  bool try_merge_done() {
    if (!merge_on || (chose && !got_new)) return false;
    merge_on = false;
    got_choose = chose = got_connack = got_new = false;
    connect_out = kNone;
    std::fill(connect_in.begin(), connect_in.end(), 0);
    start(PHASE);
    return true;
  }

  bool try_barrier() {
    Cmd which{};
    if (!barrier_local_done(which) || ack_count < child_count) return false;
    bool flag = ack_flag;
    if (which == PHASE) {
      flag = flag || (frag_parent == kNone && chose);
      phase_on = false;
      fid_count = report_count = size_acc = 0;
      best.reset();
      report_sent = false;
    } else {
      have_depth_acked = true;
    }
    if (!is_root) {
      send(parent, Out(ACK)(flag, 1));
      return true;
    }
    if (which == PHASE) broadcast(flag ? MERGE : STAGEB);
    else if (agg_enabled()) broadcast(AGGREGATE);
    else send_verdict();
    return true;
  }

  // ---- fragment phases ------------------------------------------------------

  std::size_t fragment_cap() const {
    auto k = static_cast<std::size_t>(std::sqrt(static_cast<double>(n)));
    while (k * k < n) ++k;
    return k;
  }

  bool try_report() {
    if (!phase_on || !participating || report_sent || fid_count < deg || report_count < frag_children()) return false;
    report_sent = true;
    for (std::size_t k = 0; k < deg; ++k) {
      if (nbr_fid[k] == fid) continue;
      Key key{w[k], std::min(id, nbr[k]), std::max(id, nbr[k])};
      if (!best || key < *best) best = key;
    }
    std::size_t size = 1 + size_acc;
    if (frag_parent != kNone) {
      auto [bw, bu, bv] = best.value_or(Key{0, 0, 0});
      send(frag_parent, Out(REPORT)(best.has_value(), 1)(bw, W)(bu, I)(bv, I)(size, C));
      return true;
    }
    if (best && size < fragment_cap()) apply_choose(true, std::get<1>(*best), std::get<2>(*best));
    else apply_choose(false, 0, 0);
    return true;
  }

  void apply_choose(bool has, NodeId u, NodeId v) {
    got_choose = true;
    if (has) chose = true;
    else frozen = true;
    for (std::size_t k = 0; k < deg; ++k)
      if (tree[k] && static_cast<int>(k) != frag_parent) send(static_cast<int>(k), Out(CHOOSE)(has, 1)(u, I)(v, I));
    if (has && (id == u || id == v)) {
      connect_out = port_of(id == u ? v : u);
      send(connect_out, Out(CONNECT));
    }
  }

  void start_merge() {
    merge_on = true;
    if (!chose) {
      for (std::size_t k = 0; k < deg; ++k) {
        if (!connect_in[k]) continue;
        tree[k] = 1;
        send(static_cast<int>(k), newfid(fid, frozen));
      }
      return;
    }
    auto out = static_cast<std::size_t>(connect_out);
    if (connect_out != kNone && connect_in[out] && id < nbr[out]) {
      fid = id;
      frozen = false;
      frag_parent = kNone;
      top_label = id;
      top_parity = false;
      absorb_links();
      for (std::size_t k = 0; k < deg; ++k)
        if (tree[k]) send(static_cast<int>(k), newfid(fid, false));
      got_new = true;
    }
  }

  void absorb_links() {
    if (connect_out != kNone) tree[static_cast<std::size_t>(connect_out)] = 1;
    for (std::size_t k = 0; k < deg; ++k)
      if (connect_in[k]) tree[k] = 1;
  }

  Out newfid(NodeId f, bool fr) const {
    Out o(NEWFID);
    o(f, I)(fr, 1)(top_label, I)(top_parity, 1);
    return o;
  }

  void on_newfid(int k, NodeId f, bool fr, NodeId l, bool p) {
    if (!chose || got_new) throw std::logic_error("pipeline: unexpected fragment id");
    fid = f;
    frozen = fr;
    frag_parent = k;
    if (w[static_cast<std::size_t>(k)] == 0) {
      top_label = l;
      top_parity = !p;
    } else {
      top_label = id;
      top_parity = false;
    }
    tree[static_cast<std::size_t>(k)] = 1;
    absorb_links();
    for (std::size_t j = 0; j < deg; ++j)
      if (tree[j] && static_cast<int>(j) != k) send(static_cast<int>(j), newfid(f, fr));
    got_new = true;
  }

  // ---- pipelined upcast -----------------------------------------------------

  // Labels that stay at the leader are the top-of-class labels, known already.
  // Otherwise the min-id pass over the fragment trees runs alongside the upcast.
  void start_stageb() {
    stageb_on = true;
    labels_on = labels_any();
    if (labels_on && !spec->labels_to_nodes) set_local(top_label, top_parity);
    for (std::size_t k = 0; k < deg; ++k)
      if (nbr_fid[k] != fid && id < nbr[k]) cands.insert({Key{w[k], id, nbr[k]}, fid, nbr_fid[k]});
  }

  bool try_stageb() {
    if (!stageb_on || upend_sent) return false;
    bool moved = false;
    while (!cands.empty()) {
      Candidate c = *cands.begin();
      bool ready = true;
      for (std::size_t k = 0; k < deg && ready; ++k)
        if (child[k] && !child_ended[k] && (!child_last[k] || *child_last[k] < c.key)) ready = false;
      if (!ready) break;
      cands.erase(cands.begin());
      moved = true;
      if (!fids.unite(c.fa, c.fb)) continue;
      auto [cw, cu, cv] = c.key;
      if (is_root) {
        mark(cu, cv);
        to_children([&] { return Out(SEL)(cu, I)(cv, I); });
      } else {
        send(parent, Out(UP)(c.fa, I)(c.fb, I)(cu, I)(cv, I)(cw, W));
      }
    }
    if (!cands.empty() || ended_count < child_count) return moved;
    upend_sent = true;
    if (is_root) {
      to_children([] { return Out(SELEND); });
      selend = true;
    } else {
      send(parent, Out(UPEND));
    }
    return true;
  }

  void mark(NodeId u, NodeId v) {
    if (id != u && id != v) return;
    auto k = static_cast<std::size_t>(port_of(id == u ? v : u));
    sel[k] = 1;
    if (have_local && w[k] == 0 && !spec->parity_check) send(static_cast<int>(k), Out(XLBL)(local_label, I)(parity, 1));
  }

  // Ports whose far end's (label, parity) is needed: selected zero-weight
  // edges, or with parity_check every zero-weight edge off the fragment tree.
  bool exchange_port(std::size_t k) const { return w[k] == 0 && !tree[k] && (sel[k] || spec->parity_check); }

  bool try_sum() {
    if (!selend || sum_sent || sum_count < child_count) return false;
    sum_sent = true;
    Weight local = 0;
    for (std::size_t k = 0; k < deg; ++k)
      if (mst(k) && id < nbr[k]) local += w[k];
    total = local + sum_acc;
    if (fields_on_sum()) add_local_values();
    if (is_root) {
      after_sum();
      return true;
    }
    Out o(SUM);
    o(total, TW);
    if (fields_on_sum()) put_fields(o);
    send(parent, o);
    return true;
  }

  // ---- labels ---------------------------------------------------------------

  bool try_lconv() {
    if (!labels_on || !spec->labels_to_nodes || lconv_sent || lconv_count < frag_children()) return false;
    lconv_sent = true;
    if (frag_parent != kNone) send(frag_parent, Out(LCONV)(sub_min, I));
    else set_local(sub_min, false);
    return true;
  }

  void set_local(NodeId label, bool par) {
    local_label = label;
    parity = par;
    have_local = true;
    for (std::size_t k = 0; k < deg; ++k) {
      if (spec->labels_to_nodes && tree[k] && static_cast<int>(k) != frag_parent)
        send(static_cast<int>(k), Out(LDOWN)(label, I)(par, 1));
      if (exchange_port(k)) send(static_cast<int>(k), Out(XLBL)(label, I)(par, 1));
    }
  }

  // Adjacent over a zero-weight edge, so the final colors differ. A constraint
  // implied by those already forwarded is dropped here, or flagged if it contradicts them.
  void emit_pair(NodeId la, bool pa, NodeId lb, bool pb) {
    if (!relay.unite(la, lb, !(pa ^ pb))) {
      parity_bad = true;
      return;
    }
    if (!relay.joined_last()) return;
    if (is_root) pairs.emplace_back(la, pa, lb, pb);
    else send(parent, Out(PAIR)(la, I)(pa, 1)(lb, I)(pb, 1));
  }

  bool try_pend() {
    if (!labels_on || !have_local || !selend || pend_sent || pend_count < child_count) return false;
    if (is_root && !sum_sent) return false;
    for (std::size_t k = 0; k < deg; ++k)
      if (exchange_port(k) && id < nbr[k] && !xlbl[k]) return false;
    pend_sent = true;
    for (std::size_t k = 0; k < deg; ++k)
      if (exchange_port(k) && id < nbr[k]) emit_pair(local_label, parity, xlbl[k]->first, xlbl[k]->second);
    if (fields_on_pend()) add_local_values();
    if (!is_root) {
      Out o(PEND);
      if (fields_on_pend()) put_fields(o);
      if (spec->parity_check) o(parity_bad, 1);
      send(parent, o);
      return true;
    }
    if (!spec->labels_to_nodes) {
      decide_at_root();
      return true;
    }
    resolve_labels();
    finish_labels_or_aggregate();
    return true;
  }

  void decide_at_root() {
    ParityForest pf;
    for (auto [la, pa, lb, pb] : pairs) pf.unite(la, lb, !(pa ^ pb));
    std::unordered_map<NodeId, NodeId> class_min;
    for (NodeId l : pf.elements()) class_min.emplace(pf.find(l).first, l);
    send_verdict([&](NodeId l) {
      auto it = class_min.find(pf.find(l).first);
      return it == class_min.end() ? l : it->second;
    });
  }

  void resolve_labels() {
    ParityForest pf;
    for (auto [la, pa, lb, pb] : pairs) pf.unite(la, lb, !(pa ^ pb));
    std::unordered_map<NodeId, std::pair<NodeId, bool>> class_min;
    for (NodeId l : pf.elements()) {
      auto [r, p] = pf.find(l);
      auto [it, fresh] = class_min.emplace(r, std::make_pair(l, p));
      bool off = p ^ it->second.second;
      NodeId fin = it->second.first;
      if (fin == l && !off) continue;
      to_children([&] { return Out(MAP)(l, I)(fin, I)(off, 1); });
      apply_map(l, fin, off);
    }
    to_children([] { return Out(MAPEND); });
    apply_mapend();
  }

  void apply_map(NodeId l, NodeId fin, bool off) {
    if (local_label != l) return;
    final_label = fin;
    colour = off ^ parity;
    mapped = true;
  }

  void apply_mapend() {
    if (!mapped) {
      final_label = local_label;
      colour = parity;
    }
    labels_final = true;
  }

  // ---- aggregation ----------------------------------------------------------

  bool try_agg() {
    if (!agg_on || agg_sent || agg_count < child_count) return false;
    agg_sent = true;
    add_local_values();
    if (is_root) {
      send_verdict();
      return true;
    }
    Out o(AGG);
    put_fields(o);
    send(parent, o);
    return true;
  }

  // ---- dispatch -------------------------------------------------------------

  void handle(int k, const BitString& msg) {
    auto ku = static_cast<std::size_t>(k);
    BitReader r(msg);
    auto tag = static_cast<unsigned>(r.get(kTagBits));
    switch (tag) {
      case EXPLORE: {
        auto rr = static_cast<NodeId>(r.get(I));
        if (rr < root_r) adopt(rr, k);
        else if (rr == root_r) clear_pending(ku);
        break;
      }
      case CHILD:
        if (r.get(I) == root_r && !child[ku]) {
          child[ku] = 1;
          ++child_count;
          clear_pending(ku);
        }
        break;
      case DONE: {
        auto rr = r.get(I);
        auto size = r.get(C);
        if (rr == root_r && child[ku] && !done[ku]) {
          done[ku] = 1;
          ++done_count;
          done_size += size;
        }
        break;
      }
      case CMD: broadcast(static_cast<Cmd>(r.get(kCmdBits))); break;
      case ACK:
        ++ack_count;
        ack_flag = ack_flag || r.get_bool();
        break;
      case FID:
        nbr_fid[ku] = static_cast<NodeId>(r.get(I));
        ++fid_count;
        break;
      case REPORT: {
        bool has = r.get_bool();
        Weight rw = r.get(W);
        auto u = static_cast<NodeId>(r.get(I));
        auto v = static_cast<NodeId>(r.get(I));
        size_acc += r.get(C);
        ++report_count;
        if (has && (!best || Key{rw, u, v} < *best)) best = Key{rw, u, v};
        break;
      }
      case CHOOSE: {
        bool has = r.get_bool();
        auto u = static_cast<NodeId>(r.get(I));
        auto v = static_cast<NodeId>(r.get(I));
        apply_choose(has, u, v);
        break;
      }
      case CONNECT:
        connect_in[ku] = 1;
        send(k, Out(CONNACK));
        break;
      case CONNACK: got_connack = true; break;
      case NEWFID: {
        auto f = static_cast<NodeId>(r.get(I));
        bool fr = r.get_bool();
        auto l = static_cast<NodeId>(r.get(I));
        on_newfid(k, f, fr, l, r.get_bool());
        break;
      }
      case UP: {
        auto fa = static_cast<NodeId>(r.get(I));
        auto fb = static_cast<NodeId>(r.get(I));
        auto u = static_cast<NodeId>(r.get(I));
        auto v = static_cast<NodeId>(r.get(I));
        Key key{r.get(W), u, v};
        cands.insert({key, fa, fb});
        child_last[ku] = key;
        break;
      }
      case UPEND:
        child_ended[ku] = 1;
        ++ended_count;
        break;
      case SEL: {
        auto u = static_cast<NodeId>(r.get(I));
        auto v = static_cast<NodeId>(r.get(I));
        to_children([&] { return Out(SEL)(u, I)(v, I); });
        mark(u, v);
        break;
      }
      case SELEND:
        to_children([] { return Out(SELEND); });
        selend = true;
        break;
      case SUM:
        sum_acc += r.get(TW);
        if (fields_on_sum()) read_fields(r);
        ++sum_count;
        break;
      case LCONV: {
        auto m = static_cast<NodeId>(r.get(I));
        if (w[ku] == 0) sub_min = std::min(sub_min, m);
        ++lconv_count;
        break;
      }
      case LDOWN: {
        auto l = static_cast<NodeId>(r.get(I));
        bool p = r.get_bool();
        if (w[ku] == 0) set_local(l, !p);
        else set_local(sub_min, false);
        break;
      }
      case XLBL: {
        auto l = static_cast<NodeId>(r.get(I));
        xlbl[ku] = std::make_pair(l, r.get_bool());
        break;
      }
      case PAIR: {
        auto la = static_cast<NodeId>(r.get(I));
        bool pa = r.get_bool();
        auto lb = static_cast<NodeId>(r.get(I));
        emit_pair(la, pa, lb, r.get_bool());
        break;
      }
      case PEND:
        if (fields_on_pend()) read_fields(r);
        if (spec->parity_check && r.get_bool()) parity_bad = true;
        ++pend_count;
        break;
      case MAP: {
        auto l = static_cast<NodeId>(r.get(I));
        auto fin = static_cast<NodeId>(r.get(I));
        bool off = r.get_bool();
        to_children([&] { return Out(MAP)(l, I)(fin, I)(off, 1); });
        apply_map(l, fin, off);
        break;
      }
      case MAPEND:
        to_children([] { return Out(MAPEND); });
        apply_mapend();
        break;
      case DEPTH: {
        auto d = static_cast<std::uint32_t>(r.get(I));
        if (have_depth) throw std::logic_error("pipeline: forest has a cycle");
        have_depth = true;
        depth = d + 1;
        forest_parent = k;
        for (std::size_t j = 0; j < deg; ++j)
          if (in_f(j) && j != ku) send(static_cast<int>(j), Out(DEPTH)(depth, I));
        break;
      }
      case AGG:
        read_fields(r);
        ++agg_count;
        break;
      case VERDICT: {
        bool b = r.get_bool();
        Weight t = r.get(TW);
        to_children([&] { return Out(VERDICT)(b, 1)(t, TW); });
        verdict = b;
        total = t;
        got_verdict = true;
        break;
      }
      default: throw std::logic_error("pipeline: unknown tag");
    }
  }

  void progress() {
    while (try_election() || try_report() || try_barrier() || try_merge_done() || try_stageb() || try_sum() || try_lconv() || try_pend() ||
           try_agg()) {
    }
  }
};

PipelineNode::PipelineNode(const NodeContext& ctx, std::vector<Weight> port_weights,
                           std::shared_ptr<const PipelineSpec> spec, std::vector<std::uint8_t> row)
    : impl_(std::make_unique<Impl>(this, ctx, std::move(port_weights), std::move(spec))), row_(std::move(row)) {}

PipelineNode::~PipelineNode() = default;

void PipelineNode::init(std::span<Message> outbox) {
  impl_->start_election();
  impl_->progress();
  impl_->link.emit(outbox);
}

StepStatus PipelineNode::step(std::uint64_t, std::span<const Message> inbox, std::span<Message> outbox) {
  auto& s = *impl_;
  BitString msg;
  for (std::size_t k = 0; k < inbox.size(); ++k)
    if (inbox[k] && s.link.receive(k, *inbox[k], msg)) s.handle(static_cast<int>(k), msg);
  s.progress();
  s.link.emit(outbox);
  if (s.got_verdict && s.link.idle()) return StepStatus::halt(s.verdict);
  return StepStatus::running();
}

NodeId PipelineNode::id() const { return impl_->id; }
std::size_t PipelineNode::degree() const { return impl_->deg; }
NodeId PipelineNode::neighbor(std::size_t port) const { return impl_->nbr[port]; }
Weight PipelineNode::port_weight(std::size_t port) const { return impl_->w[port]; }
const std::vector<std::uint8_t>& PipelineNode::row() const { return row_; }
bool PipelineNode::mst_port(std::size_t port) const { return impl_->mst(port); }
Weight PipelineNode::mst_weight() const { return impl_->total; }
std::size_t PipelineNode::component_size() const { return impl_->comp_size; }
NodeId PipelineNode::fragment_id() const { return impl_->fid; }
NodeId PipelineNode::label() const { return impl_->labels_final ? impl_->final_label : impl_->local_label; }
bool PipelineNode::color() const { return impl_->colour; }
std::optional<std::size_t> PipelineNode::forest_parent() const {
  if (impl_->forest_parent == kNone) return std::nullopt;
  return static_cast<std::size_t>(impl_->forest_parent);
}
std::uint32_t PipelineNode::depth() const { return impl_->depth; }

ProgramFactory mst_factory(const Graph&, std::shared_ptr<const PipelineSpec> spec) {
  return [spec](const NodeContext& ctx) -> std::unique_ptr<NodeProgram> {
    std::vector<Weight> w(ctx.degree());
    for (std::size_t k = 0; k < w.size(); ++k) w[k] = ctx.port_weight(k);
    return std::make_unique<PipelineNode>(ctx, std::move(w), spec);
  };
}

SimConfig pipeline_config(const Graph& g, SimConfig config) {
  if (config.max_rounds == 0) config.max_rounds = config.effective_max_rounds(g) + 100;
  return config;
}

std::vector<Weight> indicator_weights(const Graph& g, const SubgraphIndicator& h, NodeId v) {
  std::vector<Weight> w(g.degree(v));
  for (std::size_t k = 0; k < w.size(); ++k) w[k] = h.at(g, v, k) ? 0 : 1;
  return w;
}

namespace {

const PipelineNode& node_at(const SimResult& r, NodeId v) { return static_cast<const PipelineNode&>(*r.programs[v]); }

SimResult run_indicator(const Graph& g, const SubgraphIndicator& h, const SimConfig& config, bool levels) {
  h.check_host(g);
  auto spec = std::make_shared<PipelineSpec>();
  spec->weight_bits = 1;
  spec->labels = true;
  spec->levels = levels;
  ProgramFactory f = [&g, &h, spec](const NodeContext& ctx) -> std::unique_ptr<NodeProgram> {
    return std::make_unique<PipelineNode>(ctx, indicator_weights(g, h, ctx.id), spec);
  };
  return simulate(g, f, {}, pipeline_config(g, config));
}

}  // namespace

std::pair<MstResult, RunStats> distributed_mst(const Graph& g, const SimConfig& config) {
  Weight max_w = 0;
  for (std::size_t e = 0; e < g.edge_count(); ++e) max_w = std::max(max_w, g.weight(static_cast<EdgeId>(e)));
  auto spec = std::make_shared<PipelineSpec>();
  spec->weight_bits = width_for(max_w);
  auto res = simulate(g, mst_factory(g, spec), {}, pipeline_config(g, config));

  MstResult out{SubgraphIndicator(g), 0, true, {}};
  for (NodeId v = 0; v < g.node_count(); ++v) {
    const auto& p = node_at(res, v);
    auto inc = g.incident_edges(v);
    for (std::size_t k = 0; k < inc.size(); ++k)
      if (p.mst_port(k)) out.edges.set(inc[k], true);
    out.weight_seen.push_back(p.mst_weight());
  }
  for (EdgeId e : out.edges.edge_ids()) out.total_weight += g.weight(e);
  out.spanning = std::all_of(res.stats.outputs.begin(), res.stats.outputs.end(), [](auto b) { return b == 1; });
  return {std::move(out), std::move(res.stats)};
}

std::pair<ComponentLabels, RunStats> distributed_components(const Graph& g, const SubgraphIndicator& h,
                                                            const SimConfig& config) {
  auto res = run_indicator(g, h, config, false);
  ComponentLabels out;
  for (NodeId v = 0; v < g.node_count(); ++v) {
    out.label.push_back(node_at(res, v).label());
    out.color.push_back(node_at(res, v).color());
  }
  return {std::move(out), std::move(res.stats)};
}

std::pair<ForestLevels, RunStats> rooted_forest_levels(const Graph& g, const SubgraphIndicator& h,
                                                       const SimConfig& config) {
  auto res = run_indicator(g, h, config, true);
  ForestLevels out;
  for (NodeId v = 0; v < g.node_count(); ++v) {
    const auto& p = node_at(res, v);
    out.root.push_back(p.label());
    auto fp = p.forest_parent();
    out.parent.push_back(fp ? std::optional<NodeId>(p.neighbor(*fp)) : std::nullopt);
    out.depth.push_back(p.depth());
  }
  return {std::move(out), std::move(res.stats)};
}

}  // namespace dverify
