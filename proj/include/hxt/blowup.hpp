#pragma once

#include <vector>

#include "hxt/hypergraph.hpp"

namespace hxt {

// Blow-up of a hypergraph: vertex v becomes a cluster of sizes[v] fresh
// vertices (clusters are contiguous id blocks in input order) and each edge
// becomes the complete k-partite family over its clusters.
struct Blowup {
  Hypergraph base;
  std::vector<std::vector<int>> clusters;
  Hypergraph result;

  int cluster_of(int result_vertex) const;
};

Blowup blow_up(const Hypergraph& h, const std::vector<int>& sizes);

// Quotient by the cluster map; must reproduce the base edge set.
Hypergraph collapse(const Blowup& b);

// Exact count of m-blow-ups of a single edge (k pairwise disjoint m-clusters
// with every transversal an edge), as unordered cluster families.
// Guarded to desk scale: k*m must stay within the configured cap.
long long count_edge_blowups(const Hypergraph& h, int m, int guard_km = 9);

}  // namespace hxt
