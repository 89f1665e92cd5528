#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dverify/family.hpp"
#include "dverify/graph.hpp"
#include "dverify/oracles.hpp"
#include "dverify/problems.hpp"
#include "dverify/sim.hpp"
#include "dverify/verifiers.hpp"

namespace dverify {

struct InputPair {
  std::vector<bool> x, y;

  std::size_t b() const { return x.size(); }
  /// Throws std::invalid_argument unless |x| = |y| ≥ 1.
  void validate() const;
  /// From strings over {0,1}; x_1 is the first character.
  static InputPair parse(const std::string& x, const std::string& y);
  /// Pair number `code` of all 4^b pairs: low b bits give x, high b bits give y.
  static InputPair enumerate(std::size_t b, std::uint64_t code);
};

bool eval_disj(const InputPair& in);
bool eval_eq(const InputPair& in);

// Hosting ------------------------------------------------------------------

/// A graph whose nodes are simulated by nodes of a physical graph. Each virtual
/// edge joins two nodes on the same host or rides one physical edge, and each
/// physical edge carries at most one virtual edge. Virtual node v < n_physical
/// is hosted by physical node v.
struct VirtualGraph {
  Graph graph;
  std::vector<NodeId> host;

  void validate(const Graph& physical) const;
};

/// Runs `inner` on the virtual graph inside the physical run. A physical node
/// halts once all of its virtual nodes have, with the output of the virtual
/// node sharing its id.
ProgramFactory hosted_factory(const Graph& physical, std::shared_ptr<const VirtualGraph> virt, ProgramFactory inner,
                              std::size_t bandwidth);

// Gadgets ------------------------------------------------------------------

struct Gadget {
  Problem problem = Problem::scs;
  SubgraphIndicator h;
  ExtraArgs args;
  /// bip only: the designated edge subdivided by a virtual node hosted at s.
  std::shared_ptr<const VirtualGraph> split;
  SubgraphIndicator h_split;  // over split->graph
};

/// H for scs, stconn, cycle, ecycle or bip on G(Γ,d,p). Bits past b count as 0.
Gadget build_gadget(Problem p, const FamilyGraph& family, const InputPair& in);

/// Runs the matching verifier; for bip both H and the split variant must be bipartite.
Verdict run_gadget(const FamilyGraph& family, const Gadget& gadget, const SimConfig& config);

/// 1 x1 01 x1 01 x2 01 x2 01 … 01 ¬xb 01 ¬xb 010, of length 12b+2.
std::vector<bool> ham_pattern(const std::vector<bool>& x);

/// Hamiltonian cycle gadget on generate_family_ham(b, 2); a Hamiltonian cycle iff x = y.
SubgraphIndicator build_hamiltonian_gadget(const FamilyGraph& family, const InputPair& in);

struct LeListInstance {
  std::vector<std::uint64_t> rank;
  Graph weighted;  // weight 0 on H-edges, 1 elsewhere
  oracle::LeList candidate;
};

/// The candidate {(s,0)} is t's least-element list iff s and t are connected in H.
LeListInstance build_le_list_instance(const Graph& g, const SubgraphIndicator& h, NodeId s, NodeId t);

// Distributed two-party functions ------------------------------------------

/// Node inputs for a family run: x at s, y at r.
std::vector<BitString> family_inputs(const FamilyGraph& family, const InputPair& in);

/// disj through the scs gadget: s and r tell their spoke neighbors whether the
/// spoke is in H, then every node runs the scs verifier. Output is disj(x,y) everywhere.
ProgramFactory disj_program(const FamilyGraph& family, std::size_t b);

enum class TwoPartyFunction { disj, eq };

/// x and y travel up the tree, the root evaluates f and the bit is flooded back
/// down and onto the paths. Runs in 2p + ⌈b/B⌉ rounds.
ProgramFactory tree_relay_program(const FamilyGraph& family, std::size_t b, TwoPartyFunction f);
inline ProgramFactory eq_program(const FamilyGraph& family, std::size_t b) {
  return tree_relay_program(family, b, TwoPartyFunction::eq);
}

// Two-party extraction ------------------------------------------------------

/// i-left and i-right sets of G(Γ,d,p); L_0 = V∖{r}, R_0 = V∖{s}.
struct CutFrontier {
  std::vector<std::vector<std::uint8_t>> left, right;  // [t][v]

  static CutFrontier build(const FamilyGraph& family, std::size_t rounds);
};

class SimulationRefused : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TranscriptEntry {
  std::uint64_t round = 0;
  bool alice_to_bob = false;
  BitString payload;
};

struct TwoPartyTranscript {
  std::uint64_t rounds = 0;  // T, the direct run's rounds_used
  std::uint64_t bits_alice_to_bob = 0;
  std::uint64_t bits_bob_to_alice = 0;
  std::size_t max_frontier_edges = 0;  // per side per round
  std::uint64_t bound = 0;             // 2·d·p·B·T
  std::vector<TranscriptEntry> log;
  std::uint8_t alice_output = 0, bob_output = 0;    // at s and r
  std::uint8_t direct_s = 0, direct_r = 0;

  std::uint64_t total_bits() const { return bits_alice_to_bob + bits_bob_to_alice; }
};

/// Alice simulates L_t and Bob R_t; each round they exchange only the messages
/// crossing into L_t from outside L_{t-1} (and symmetrically). Throws
/// SimulationRefused when T ≥ (d^p-1)/2 and std::logic_error if more than dp
/// edges cross the frontier in some round.
TwoPartyTranscript two_party_simulate(const FamilyGraph& family, const ProgramFactory& program, const InputPair& in,
                                      const SimConfig& config);

/// One line per message: round, direction, bit length, hex payload.
std::string format_transcript(const TwoPartyTranscript& t);

// Weight gaps -----------------------------------------------------------------

enum class GapProblem { mst, slt, sdist, sptree, mrcst, mincut, minstcut, stpath, gsf };

std::string_view gap_problem_name(GapProblem p);
std::optional<GapProblem> parse_gap_problem(std::string_view name);

/// The verification problem a gap instance decides: scs, stconn, or (for the
/// cut problems) cut / stcut of the complement of H.
Problem gap_source(GapProblem p);

struct Rational {
  std::uint64_t num = 1, den = 1;
};

struct WeightGap {
  Graph weighted;
  Weight theta = 0;
  /// Subgraph the source predicate is evaluated on (H, or its complement for the cut problems).
  SubgraphIndicator source_h;
};

/// Throws std::overflow_error if a weight does not fit, std::invalid_argument if α < 1.
WeightGap build_weight_gap(GapProblem p, const Graph& g, const SubgraphIndicator& h, Rational alpha,
                           const ExtraArgs& args);

/// Exact optimum of a gap instance; slt and gsf are not supported.
Weight gap_optimum(GapProblem p, const Graph& weighted, const ExtraArgs& args);

}  // namespace dverify
