#pragma once

#include <cstdint>
#include <vector>

#include "dverify/graph.hpp"

namespace dverify {

struct FamilyParams {
  std::size_t gamma = 1;
  std::size_t d = 2;
  std::size_t p = 1;

  /// d^p; throws GraphError on overflow or invalid parameters.
  std::size_t leaves() const;
  /// Highest path index m = d^p - 1.
  std::size_t m() const { return leaves() - 1; }
  std::size_t tree_size() const;
  std::size_t node_count() const;
  void validate() const;
};

enum class EdgeClass : std::uint8_t { path, tree, spoke, extra };

/// G(Γ,d,p) with its named vertices.
///
/// Numbering: tree nodes first in BFS order (u_0^0 = 0, level by level, left to
/// right), then path nodes row-major v_0^1..v_m^1, v_0^2.., then extra nodes
/// (connector-path interiors of the Hamiltonian variant).
struct FamilyGraph {
  FamilyParams params;
  Graph graph;
  std::vector<EdgeClass> edge_class;  // indexed by EdgeId
  std::size_t extra_node_begin = 0;   // first id of extra nodes
  std::size_t ham_b = 0;              // b for the Hamiltonian variant, 0 otherwise

  NodeId tree_node(std::size_t level, std::size_t index) const;
  /// v_j^ℓ with ℓ in [1, Γ].
  NodeId path_node(std::size_t path, std::size_t j) const;
  NodeId s() const { return tree_node(params.p, 0); }
  NodeId r() const { return tree_node(params.p, params.m()); }
  bool is_tree_node(NodeId v) const { return v < params.tree_size(); }
  bool is_extra_node(NodeId v) const { return v >= extra_node_begin; }
  /// Parent of a tree node other than the root.
  NodeId tree_parent(NodeId v) const;
};

FamilyGraph generate_family(const FamilyParams& params);

/// G(Γ,2,p)′ with Γ = 2 + 12b; all added edges are class extra.
FamilyGraph generate_family_ham(std::size_t b, std::size_t p);

}  // namespace dverify
