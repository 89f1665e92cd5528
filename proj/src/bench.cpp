#include "dverify/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <thread>

#include "dverify/family.hpp"
#include "dverify/verifiers.hpp"

namespace dverify {

std::string format_bench_row(const BenchRow& r) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%zu,%u,%zu,%s,%llu,%llu,%.4f,%.4f,%llu", r.n, r.D, r.B, r.verifier.c_str(),
                static_cast<unsigned long long>(r.rounds), static_cast<unsigned long long>(r.bits), r.bound, r.ratio,
                static_cast<unsigned long long>(r.seed));
  return buf;
}

double round_bound(std::size_t n, std::uint32_t diameter) {
  const double dn = static_cast<double>(n);
  return std::sqrt(dn) * std::log2(dn) + diameter;
}

Graph bench_graph(const BenchPlan& plan, std::size_t size, std::uint64_t seed) {
  if (plan.topology == BenchTopology::gnm) return generate_random(RandomKind::connected_gnm, size, 2 * size, seed);
  // Γ = d^{p+1}·p·B, with B the configured bandwidth or 8 when left open.
  const std::size_t d = plan.family_d, p = size, B = plan.config.bandwidth ? plan.config.bandwidth : 8;
  std::size_t gamma = p * B;
  for (std::size_t i = 0; i <= p; ++i) gamma *= d;
  return generate_family({gamma, d, p}).graph;
}

SubgraphIndicator bench_subgraph(const Graph& g, std::uint64_t seed) {
  SubgraphIndicator h(g);
  for (EdgeId e = 0; e < g.edge_count(); ++e) h.set(e, splitmix64(splitmix64(seed) ^ e) & 1);
  return h;
}

ExtraArgs bench_args(const Graph& g) {
  ExtraArgs a;
  a.s = 0;
  a.t = static_cast<NodeId>(g.node_count() - 1);
  if (g.edge_count() > 0) a.e = g.edge(0);
  return a;
}

BenchRow bench_cell(Problem p, const Graph& g, const SubgraphIndicator& h, const ExtraArgs& args,
                    const SimConfig& config, std::uint64_t seed) {
  auto [verdict, stats] = verify(p, g, h, args, config);
  BenchRow r;
  r.n = g.node_count();
  r.D = g.diameter();
  r.B = stats.bandwidth;
  r.verifier = std::string(problem_name(p));
  r.rounds = stats.rounds_used;
  r.bits = stats.total_bits;
  r.bound = round_bound(r.n, r.D);
  r.ratio = static_cast<double>(r.rounds) / r.bound;
  r.seed = seed;
  return r;
}

std::vector<BenchRow> run_bench(const BenchPlan& plan) {
  struct Cell {
    std::size_t size;
    std::uint64_t seed;
  };
  std::vector<Cell> cells;
  for (std::size_t size : plan.sizes)
    for (std::uint64_t seed = 1; seed <= plan.seeds; ++seed) cells.push_back({size, seed});
  std::sort(cells.begin(), cells.end(), [](const Cell& a, const Cell& b) {
    return a.size != b.size ? a.size < b.size : a.seed < b.seed;
  });

  std::vector<BenchRow> rows(cells.size());
  std::vector<std::exception_ptr> errors(cells.size());
  SimConfig cfg = plan.config;
  cfg.threads = 1;
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i; (i = next++) < cells.size();) {
      try {
        Graph g = bench_graph(plan, cells[i].size, cells[i].seed);
        SimConfig c = cfg;
        c.seed = cells[i].seed;
        rows[i] = bench_cell(plan.verifier, g, bench_subgraph(g, cells[i].seed), bench_args(g), c, cells[i].seed);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  unsigned threads = std::max(1u, plan.config.threads);
  std::vector<std::thread> pool;
  for (unsigned i = 1; i < threads; ++i) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return rows;
}

}  // namespace dverify
