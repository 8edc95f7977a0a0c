#pragma once

#include <string>
#include <vector>

#include "hxt/tree.hpp"

namespace hxt {

// All canonical level sequences of rooted trees on n vertices, in the order
// produced by successive-predecessor generation. Root sits at level 1.
std::vector<std::vector<int>> enumerate_rooted_level_sequences(int n, int cap = 12);

// Decode a level sequence: vertex i attaches to the nearest earlier vertex
// one level up.
Tree tree_from_level_sequence(const std::vector<int>& levels);

// Isomorphism-invariant certificate (subtree encodings sorted bottom-up,
// anchored at the centroid, with the bicentroidal case split on the middle
// edge).
std::string free_tree_certificate(const Tree& t);

std::vector<int> tree_centroids(const Tree& t);

// One representative per isomorphism class of free trees on n vertices.
std::vector<Tree> enumerate_free_trees(int n, int cap = 12);

}  // namespace hxt
