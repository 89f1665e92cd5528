#include "dverify/problems.hpp"

#include <sstream>

namespace dverify {

namespace {
constexpr std::pair<Problem, std::string_view> kNames[] = {
    {Problem::scs, "scs"},     {Problem::spt, "spt"},       {Problem::cycle, "cycle"}, {Problem::ecycle, "ecycle"},
    {Problem::conn, "conn"},   {Problem::cut, "cut"},       {Problem::stconn, "stconn"}, {Problem::stcut, "stcut"},
    {Problem::eap, "eap"},     {Problem::bip, "bip"},       {Problem::path, "path"},   {Problem::ham, "ham"}};
}

std::string_view problem_name(Problem p) {
  for (auto [q, name] : kNames)
    if (q == p) return name;
  return "?";
}

std::optional<Problem> parse_problem(std::string_view name) {
  for (auto [q, n] : kNames)
    if (n == name) return q;
  return std::nullopt;
}

bool needs_st(Problem p) { return p == Problem::stconn || p == Problem::stcut || p == Problem::eap; }
bool needs_edge(Problem p) { return p == Problem::eap || p == Problem::ecycle; }

// Format: "s <id>", "t <id>", "e <u> <v>", one per line.
std::string format_extra_args(const ExtraArgs& a) {
  std::ostringstream out;
  out << "s " << a.s << "\nt " << a.t << "\ne " << a.e.u << ' ' << a.e.v << '\n';
  return out.str();
}

ExtraArgs parse_extra_args(const std::string& text) {
  ExtraArgs a;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string key;
    if (!(ls >> key)) continue;
    if (key == "s") {
      if (!(ls >> a.s)) throw GraphError("extra args: bad s line");
    } else if (key == "t") {
      if (!(ls >> a.t)) throw GraphError("extra args: bad t line");
    } else if (key == "e") {
      NodeId u, v;
      if (!(ls >> u >> v)) throw GraphError("extra args: bad e line");
      a.e = make_edge(u, v);
    } else {
      throw GraphError("extra args: unknown key '" + key + "'");
    }
  }
  return a;
}

}  // namespace dverify
