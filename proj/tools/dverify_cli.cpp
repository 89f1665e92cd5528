// Command-line front end: gen, reduce, run, cc-sim, bench.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "dverify/bench.hpp"
#include "dverify/family.hpp"
#include "dverify/gadgets.hpp"
#include "dverify/verifiers.hpp"

using namespace dverify;

namespace {

constexpr int kExitRejected = 1;
constexpr int kExitError = 2;

struct Common {
  std::size_t bits = 0;
  std::uint64_t seed = 0;
  std::uint64_t max_rounds = 0;
  unsigned threads = 1;
  bool chunk = false;

  SimConfig config() const {
    SimConfig c;
    c.bandwidth = bits;
    c.seed = seed;
    c.max_rounds = max_rounds;
    c.threads = threads;
    c.strict_bits = !chunk;
    return c;
  }
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--bits", c.bits, "Bandwidth B in bits (default 4*ceil(log2 n))");
  cmd->add_option("--seed", c.seed, "Seed");
  cmd->add_option("--max-rounds", c.max_rounds, "Round budget (default 10(n+D))");
  cmd->add_option("--threads", c.threads, "Worker threads")->check(CLI::PositiveNumber);
  cmd->add_flag("--chunk", c.chunk, "Chunk oversized messages instead of failing");
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Problem problem_arg(const std::string& name) {
  auto p = parse_problem(name);
  if (!p) throw CLI::ValidationError("unknown verifier: " + name);
  return *p;
}

std::string verdict_line(const Verdict& v, const RunStats& s) {
  std::ostringstream os;
  os << "verdict=" << (v.accepted ? "accepted" : "rejected") << " rounds=" << v.rounds << " bits=" << s.total_bits
     << " agreement=" << (v.agreement ? "true" : "false") << "\n";
  return os.str();
}

std::vector<std::size_t> size_list(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) out.push_back(std::stoull(item));
  if (out.empty()) throw CLI::ValidationError("--sizes is empty");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"CONGEST simulator and distributed graph verification"};
  app.require_subcommand(1);

  // gen
  struct {
    std::string family = "elkin", out;
    std::size_t gamma = 4, d = 2, p = 2, b = 1, n = 64, m = 0;
    std::uint64_t seed = 1;
  } gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a graph file");
  gen_cmd->add_option("--family", gen.family, "elkin, ham, gnm or connected-gnm")
      ->check(CLI::IsMember({"elkin", "ham", "gnm", "connected-gnm"}));
  gen_cmd->add_option("--gamma", gen.gamma, "Number of paths");
  gen_cmd->add_option("--d", gen.d, "Tree arity");
  gen_cmd->add_option("--p", gen.p, "Tree depth");
  gen_cmd->add_option("--b", gen.b, "Input length for the Hamiltonian variant");
  gen_cmd->add_option("--n", gen.n, "Nodes (random kinds)");
  gen_cmd->add_option("--m", gen.m, "Edges (random kinds, default 2n)");
  gen_cmd->add_option("--seed", gen.seed, "Seed");
  gen_cmd->add_option("--out,-o", gen.out, "Output path (default stdout)");

  // reduce
  struct {
    std::string problem, x, y, graph_out, subgraph_out, args_out;
    std::size_t gamma = 0, d = 2, p = 2;
    bool verify = false;
  } red;
  Common red_common;
  auto* red_cmd = app.add_subcommand("reduce", "Build a lower-bound gadget for an input pair");
  red_cmd->add_option("--problem", red.problem, "scs, stconn, cycle, ecycle, bip or ham")->required();
  red_cmd->add_option("--x", red.x, "Alice's bits")->required();
  red_cmd->add_option("--y", red.y, "Bob's bits")->required();
  red_cmd->add_option("--gamma", red.gamma, "Number of paths (default b)");
  red_cmd->add_option("--d", red.d, "Tree arity");
  red_cmd->add_option("--p", red.p, "Tree depth");
  red_cmd->add_option("--graph-out", red.graph_out, "Write the host graph here");
  red_cmd->add_option("--subgraph-out", red.subgraph_out, "Write H here (default stdout)");
  red_cmd->add_option("--args-out", red.args_out, "Write s, t and e here");
  red_cmd->add_flag("--verify", red.verify, "Also run the verifier and print the verdict");
  add_common(red_cmd, red_common);

  // run
  struct {
    std::string graph, subgraph, verifier, args;
    bool exit_code_verdict = false;
  } runo;
  Common run_common;
  auto* run_cmd = app.add_subcommand("run", "Run a verifier on a graph and subgraph");
  run_cmd->add_option("--graph", runo.graph, "Graph file")->required();
  run_cmd->add_option("--subgraph", runo.subgraph, "Subgraph file")->required();
  run_cmd->add_option("--verifier", runo.verifier, "Verifier name")->required();
  run_cmd->add_option("--args", runo.args, "Extra-args file (s, t, e)");
  run_cmd->add_flag("--exit-code-verdict", runo.exit_code_verdict, "Exit 1 when the verifier rejects");
  add_common(run_cmd, run_common);

  // cc-sim
  struct {
    std::string f = "disj", program = "scs", x, y, transcript;
    std::size_t b = 4, d = 2, p = 2, gamma = 0;
  } cc;
  Common cc_common;
  cc_common.bits = 8;
  auto* cc_cmd = app.add_subcommand("cc-sim", "Extract a two-party protocol from a distributed run");
  cc_cmd->add_option("--f", cc.f, "disj or eq")->check(CLI::IsMember({"disj", "eq"}));
  cc_cmd->add_option("--program", cc.program, "scs (disj only) or relay")->check(CLI::IsMember({"scs", "relay"}));
  cc_cmd->add_option("--b", cc.b, "Input length")->check(CLI::PositiveNumber);
  cc_cmd->add_option("--d", cc.d, "Tree arity");
  cc_cmd->add_option("--p", cc.p, "Tree depth");
  cc_cmd->add_option("--gamma", cc.gamma, "Number of paths (default b)");
  cc_cmd->add_option("--x", cc.x, "Alice's bits (default: every pair)");
  cc_cmd->add_option("--y", cc.y, "Bob's bits");
  cc_cmd->add_option("--transcript", cc.transcript, "Dump the message log of a single pair here");
  add_common(cc_cmd, cc_common);

  // bench
  struct {
    std::string verifier = "scs", sizes = "64,256,1024", topology = "gnm", out;
    std::size_t seeds = 1, d = 2;
  } be;
  Common be_common;
  auto* be_cmd = app.add_subcommand("bench", "Sweep sizes and emit CSV");
  be_cmd->add_option("--verifier", be.verifier, "Verifier name");
  be_cmd->add_option("--sizes", be.sizes, "Comma-separated n (gnm) or p (family)");
  be_cmd->add_option("--seeds", be.seeds, "Seeds per size")->check(CLI::PositiveNumber);
  be_cmd->add_option("--topology", be.topology, "gnm or family")->check(CLI::IsMember({"gnm", "family"}));
  be_cmd->add_option("--d", be.d, "Tree arity for the family topology");
  be_cmd->add_option("--out,-o", be.out, "CSV path (default stdout)");
  add_common(be_cmd, be_common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitError;
  }

  try {
    if (*gen_cmd) {
      Graph g;
      if (gen.family == "elkin") {
        g = generate_family({gen.gamma, gen.d, gen.p}).graph;
      } else if (gen.family == "ham") {
        g = generate_family_ham(gen.b, gen.p).graph;
      } else {
        auto kind = gen.family == "gnm" ? RandomKind::gnm : RandomKind::connected_gnm;
        g = generate_random(kind, gen.n, gen.m ? gen.m : 2 * gen.n, gen.seed);
      }
      emit(format_graph(g), gen.out);
      return 0;
    }

    if (*red_cmd) {
      auto in = InputPair::parse(red.x, red.y);
      Problem p = problem_arg(red.problem);
      FamilyGraph f;
      SubgraphIndicator h;
      ExtraArgs args;
      std::optional<Gadget> gadget;
      if (p == Problem::ham) {
        f = generate_family_ham(in.b(), red.p);
        h = build_hamiltonian_gadget(f, in);
      } else {
        f = generate_family({red.gamma ? red.gamma : in.b(), red.d, red.p});
        gadget = build_gadget(p, f, in);
        h = gadget->h;
        args = gadget->args;
      }
      if (!red.graph_out.empty()) write_graph(f.graph, red.graph_out);
      if (!red.args_out.empty()) emit(format_extra_args(args), red.args_out);
      if (!red.verify || !red.subgraph_out.empty()) emit(format_subgraph(h, f.graph), red.subgraph_out);
      if (red.verify) {
        auto cfg = red_common.config();
        if (gadget) {
          auto v = run_gadget(f, *gadget, cfg);
          std::cout << "verdict=" << (v.accepted ? "accepted" : "rejected") << " rounds=" << v.rounds
                    << " agreement=" << (v.agreement ? "true" : "false") << "\n";
        } else {
          auto [v, stats] = verify(p, f.graph, h, args, cfg);
          std::cout << verdict_line(v, stats);
        }
      }
      return 0;
    }

    if (*run_cmd) {
      Problem p = problem_arg(runo.verifier);
      Graph g = read_graph(runo.graph);
      auto h = read_subgraph(runo.subgraph, g);
      ExtraArgs args = runo.args.empty() ? ExtraArgs{} : parse_extra_args(slurp(runo.args));
      if ((needs_st(p) || needs_edge(p)) && runo.args.empty())
        throw CLI::ValidationError(std::string(problem_name(p)) + " needs --args");
      auto [v, stats] = verify(p, g, h, args, run_common.config());
      std::cout << verdict_line(v, stats);
      return runo.exit_code_verdict && !v.accepted ? kExitRejected : 0;
    }

    if (*cc_cmd) {
      if (cc.f == "eq" && cc.program == "scs") cc.program = "relay";
      auto f = generate_family({cc.gamma ? cc.gamma : cc.b, cc.d, cc.p});
      auto fn = cc.f == "disj" ? TwoPartyFunction::disj : TwoPartyFunction::eq;
      auto prog = cc.program == "scs" ? disj_program(f, cc.b) : tree_relay_program(f, cc.b, fn);
      std::vector<InputPair> pairs;
      if (!cc.x.empty() || !cc.y.empty()) {
        pairs.push_back(InputPair::parse(cc.x, cc.y));
        if (pairs[0].b() != cc.b) throw CLI::ValidationError("--x/--y length differs from --b");
      } else {
        if (cc.b > 10) throw CLI::ValidationError("give --x and --y for b > 10");
        for (std::uint64_t code = 0; code < (std::uint64_t{1} << (2 * cc.b)); ++code)
          pairs.push_back(InputPair::enumerate(cc.b, code));
      }
      std::size_t ok = 0;
      for (const auto& in : pairs) {
        auto t = two_party_simulate(f, prog, in, cc_common.config());
        bool match = t.alice_output == t.direct_s && t.bob_output == t.direct_r;
        ok += match && t.total_bits() <= t.bound;
        if (pairs.size() == 1 && !cc.transcript.empty()) emit(format_transcript(t), cc.transcript);
        std::cout << "x=";
        for (bool b : in.x) std::cout << b;
        std::cout << " y=";
        for (bool b : in.y) std::cout << b;
        std::cout << " rounds=" << t.rounds << " bits=" << t.total_bits() << " bound=" << t.bound
                  << " frontier=" << t.max_frontier_edges << " alice=" << int(t.alice_output)
                  << " bob=" << int(t.bob_output) << " match=" << (match ? "true" : "false") << "\n";
      }
      std::cout << "pairs=" << pairs.size() << " ok=" << ok << "\n";
      return ok == pairs.size() ? 0 : kExitRejected;
    }

    if (*be_cmd) {
      BenchPlan plan;
      plan.verifier = problem_arg(be.verifier);
      plan.topology = be.topology == "gnm" ? BenchTopology::gnm : BenchTopology::family;
      plan.sizes = size_list(be.sizes);
      plan.seeds = be.seeds;
      plan.family_d = be.d;
      plan.config = be_common.config();
      std::ostringstream csv;
      csv << kBenchHeader << "\n";
      for (const auto& row : run_bench(plan)) csv << format_bench_row(row) << "\n";
      emit(csv.str(), be.out);
      return 0;
    }
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
