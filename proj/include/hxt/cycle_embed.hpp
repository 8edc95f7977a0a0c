#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hxt/hypergraph.hpp"

namespace hxt {

// Host edge ids forming a loose cycle: consecutive edges (cyclically) share
// exactly one vertex, all other pairs are disjoint, so m edges cover
// m*(k-1) vertices.
bool validate_loose_cycle(const Hypergraph& h, const std::vector<int>& edge_ids,
                          std::string* why = nullptr);

struct CycleTiling {
  std::vector<std::vector<int>> cycles;
  VertexSet covered;
};

// Greedy randomized packing of vertex-disjoint loose cycles of the given
// length inside `allowed`. Best effort; every returned cycle is validated.
CycleTiling tile_loose_cycles(const Hypergraph& h, const VertexSet& allowed, int length,
                              std::uint64_t seed);

// Restriction of h to `keep`, relabelled to 0..|keep|-1 ascending. The
// second return value maps new ids back to the original ones.
std::pair<Hypergraph, std::vector<int>> induced_subgraph(const Hypergraph& h,
                                                         const VertexSet& keep);

}  // namespace hxt
