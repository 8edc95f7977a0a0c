#pragma once

#include <utility>
#include <vector>

#include "hxt/hypergraph.hpp"
#include "hxt/rational.hpp"

namespace hxt {

// Two edges sharing all but one vertex form a diamond; the two lone vertices
// are its tips.
struct DiamondCounts {
  long long total = 0;
  std::vector<std::vector<long long>> pair_counts;  // tip pair -> diamonds
};

DiamondCounts count_diamonds(const Hypergraph& h);

// Tip vertices over a fixed (k-1)-set, ascending.
std::vector<int> diamond_tips(const Hypergraph& h, const VertexSet& shared);

// Graph on the host vertices joining tips that co-occur in at least
// gamma * C(n, k-1) diamonds; the comparison is exact.
struct DiamondGraph {
  int n = 0;
  Rational gamma;
  Rational threshold;  // gamma * C(n, k-1)
  std::vector<std::pair<int, int>> edges;
  std::vector<std::vector<char>> adj;

  bool has(int u, int v) const { return adj[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)] != 0; }
};

DiamondGraph diamond_graph(const Hypergraph& h, const Rational& gamma);

}  // namespace hxt
