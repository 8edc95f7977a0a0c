#pragma once

#include <iosfwd>
#include <optional>
#include <vector>

#include "hxt/hypergraph.hpp"
#include "hxt/tree.hpp"

namespace hxt {

// k-expansion of a tree: every base edge becomes a k-edge padded with k-2
// fresh vertices. Base vertices keep their ids; edge i owns the fresh block
// n + i*(k-2) .. n + (i+1)*(k-2) - 1, in the base edge order.
struct ExpansionTree {
  int k = 2;
  int n_base = 0;
  std::vector<std::pair<int, int>> base_edges;
  std::vector<std::vector<int>> fresh;  // per base edge, possibly empty (k == 2)
  Hypergraph target{2, 2};

  int base_degree(int v) const;  // tree degree of a base vertex
  bool is_base_vertex(int v) const { return v < n_base; }
};

int expansion_order(int n_base, int k);  // (k-1)*n_base - k + 2 for n_base >= 1

ExpansionTree expand_tree(const Tree& t, int k);

// Loose cycle with m >= 3 edges: consecutive edges share one anchor, nothing
// else intersects.
Hypergraph loose_cycle(int m, int k);

// Edge order where every edge after the first meets the union of its
// predecessors in exactly one vertex.
bool is_valid_order(const Hypergraph& h, const std::vector<int>& order);
std::vector<int> expansion_valid_order(const ExpansionTree& x, int root_base_vertex);

void serialize_expansion(const ExpansionTree& x, std::ostream& out);

}  // namespace hxt
