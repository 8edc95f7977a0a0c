#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace hxt {

// Unrooted tree on vertices 0..n-1. Construction validates the edge list:
// exactly n-1 edges, connected, no loops or duplicates.
class Tree {
 public:
  Tree(int n, std::vector<std::pair<int, int>> edges);

  int n() const { return n_; }
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }
  const std::vector<int>& neighbors(int v) const { return adj_[static_cast<std::size_t>(v)]; }
  int degree(int v) const { return static_cast<int>(adj_[static_cast<std::size_t>(v)].size()); }
  int max_degree() const;

 private:
  int n_;
  std::vector<std::pair<int, int>> edges_;
  std::vector<std::vector<int>> adj_;
};

// Rooting adds parent/depth/subtree bookkeeping on top of a Tree.
struct RootedTree {
  int root = 0;
  std::vector<int> parent;        // -1 at the root
  std::vector<std::vector<int>> children;
  std::vector<int> depth;
  std::vector<int> subtree_size;
  std::vector<int> bfs_order;
};

RootedTree root_tree(const Tree& t, int root);

struct DegreeClass {
  bool all_odd = false;            // every vertex degree is odd
  bool has_even_vertex = false;
  int max_degree = 0;
  std::vector<int> one_mod_q;      // q >= 2 with every degree == 1 (mod q)
};

DegreeClass classify_degrees(const Tree& t, int q_cap = 16);

// Uniform random labelled tree (Pruefer decode), rejection-sampled until the
// maximum degree bound holds.
Tree random_tree(int n, int max_degree, std::uint64_t seed);

// Text format: first line "n", then n-1 lines "u v". '#' starts a comment.
Tree parse_tree(std::istream& in);
Tree parse_tree_file(const std::string& path);
void serialize_tree(const Tree& t, std::ostream& out);

}  // namespace hxt
