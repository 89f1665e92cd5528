#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dverify/graph.hpp"

namespace dverify {

/// Verification predicates on a marked subgraph H of G.
enum class Problem { scs, spt, cycle, ecycle, conn, cut, stconn, stcut, eap, bip, path, ham };

inline constexpr Problem kAllProblems[] = {Problem::scs, Problem::spt,    Problem::cycle,  Problem::ecycle,
                                           Problem::conn, Problem::cut,   Problem::stconn, Problem::stcut,
                                           Problem::eap,  Problem::bip,   Problem::path,   Problem::ham};

std::string_view problem_name(Problem p);
std::optional<Problem> parse_problem(std::string_view name);

/// s and t double as u and v for eap; e is the designated edge for eap and ecycle.
struct ExtraArgs {
  NodeId s = 0;
  NodeId t = 0;
  Edge e{0, 0};
};

bool needs_st(Problem p);
bool needs_edge(Problem p);

std::string format_extra_args(const ExtraArgs& a);
ExtraArgs parse_extra_args(const std::string& text);

}  // namespace dverify
