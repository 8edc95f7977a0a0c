#pragma once

#include <string>
#include <vector>

#include "hxt/tree.hpp"

namespace hxt {

// One piece of a tree decomposition into connected chunks. `head` is the
// vertex where the piece was cut off; `parent_vertex` is head's parent in
// the original rooted tree (inside an earlier-numbered piece), -1 for the
// piece holding the root.
struct TreePart {
  std::vector<int> vertices;  // sorted
  int head = -1;
  int parent_vertex = -1;
  int parent_part = -1;
};

struct TreePartition {
  int root = 0;
  int m_prime = 1;
  std::vector<TreePart> parts;
};

// Repeatedly cuts the deepest subtree of size at least m_prime (ties broken
// toward the smaller vertex id) while more than 2*max_degree*m_prime
// vertices remain. Every piece then has size in [m_prime, 2*max_degree*m_prime].
TreePartition partition_tree(const Tree& t, int root, int m_prime);

bool validate_partition(const Tree& t, const TreePartition& p, std::string* why = nullptr);

}  // namespace hxt
