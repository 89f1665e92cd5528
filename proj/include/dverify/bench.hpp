#pragma once

#include <string>
#include <vector>

#include "dverify/graph.hpp"
#include "dverify/problems.hpp"
#include "dverify/sim.hpp"

namespace dverify {

struct BenchRow {
  std::size_t n = 0;
  std::uint32_t D = 0;
  std::size_t B = 0;
  std::string verifier;
  std::uint64_t rounds = 0;
  std::uint64_t bits = 0;
  double bound = 0;  // √n·log2 n + D
  double ratio = 0;  // rounds / bound
  std::uint64_t seed = 0;
};

inline constexpr const char* kBenchHeader = "n,D,B,verifier,rounds,bits,bound,ratio,seed";
std::string format_bench_row(const BenchRow& r);

double round_bound(std::size_t n, std::uint32_t diameter);

enum class BenchTopology { gnm, family };

struct BenchPlan {
  Problem verifier = Problem::scs;
  BenchTopology topology = BenchTopology::gnm;
  std::vector<std::size_t> sizes;  // n for gnm, p for family
  std::size_t seeds = 1;
  std::size_t family_d = 2;
  SimConfig config;  // config.threads spreads cells over threads
};

/// Host graph of one cell: connected-gnm with m = 2n, or G(Γ,d,p) with Γ = d^{p+1}·p·B.
Graph bench_graph(const BenchPlan& plan, std::size_t size, std::uint64_t seed);
/// H keeps each edge with probability 1/2; s, t and e are fixed by the graph.
SubgraphIndicator bench_subgraph(const Graph& g, std::uint64_t seed);
ExtraArgs bench_args(const Graph& g);

BenchRow bench_cell(Problem p, const Graph& g, const SubgraphIndicator& h, const ExtraArgs& args,
                    const SimConfig& config, std::uint64_t seed);

/// One row per (size, seed) with seeds 1..plan.seeds, sorted by size then seed.
std::vector<BenchRow> run_bench(const BenchPlan& plan);

}  // namespace dverify
