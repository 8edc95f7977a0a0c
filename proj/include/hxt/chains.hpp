#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hxt/hypergraph.hpp"

namespace hxt {

// One diamond pinned to an ordered tip pair: shared ∪ {tip_u} and
// shared ∪ {tip_v} are both edges of the host.
struct Diamond {
  int tip_u = -1;
  int tip_v = -1;
  VertexSet shared;

  VertexSet edge_u() const;
  VertexSet edge_v() const;
  VertexSet vertices() const;
  Diamond reversed() const { return Diamond{tip_v, tip_u, shared}; }
};

// All (u,v)-diamonds, ordered by shared set.
std::vector<Diamond> diamonds_between(const Hypergraph& h, int u, int v);

bool verify_diamond(const Hypergraph& h, const Diamond& d, std::string* why = nullptr);

// Waypoints x_0..x_len joined by diamonds D_1..D_len, where D_i runs between
// x_{i-1} and x_i. Distinct diamonds never meet except that consecutive ones
// share exactly the waypoint between them. The u-half picks the edge through
// the earlier tip of every diamond, the v-half the edge through the later
// one; either half is a set of pairwise disjoint single edges.
struct DiamondChain {
  std::vector<int> waypoints;
  std::vector<Diamond> diamonds;

  int length() const { return static_cast<int>(diamonds.size()); }
  int u() const { return waypoints.front(); }
  int v() const { return waypoints.back(); }
  std::vector<VertexSet> half_u() const;
  std::vector<VertexSet> half_v() const;
  VertexSet vertices() const;
};

bool verify_chain(const Hypergraph& h, const DiamondChain& c, std::string* why = nullptr);

struct ChainSearch {
  std::vector<DiamondChain> chains;
  bool exhaustive = false;  // true when every length up to max_len was fully scanned
  std::uint64_t nodes = 0;
};

// Depth-first search over waypoint sequences from u to v, shortest lengths
// first, deterministic order. Interior structure must avoid `forbidden`.
// Stops after `limit` chains or `node_budget` search nodes.
ChainSearch find_diamond_chains(const Hypergraph& h, int u, int v, int max_len,
                                int limit = 64,
                                const VertexSet& forbidden = VertexSet(),
                                std::uint64_t node_budget = 4'000'000);

// Vertex-disjoint chains, one per requested pair, each avoiding `forbidden`
// and all of the others. Backtracks across pairs; empty result on failure.
std::optional<std::vector<DiamondChain>> find_disjoint_chains(
    const Hypergraph& h, const std::vector<std::pair<int, int>>& pairs,
    int max_len, const VertexSet& forbidden = VertexSet(),
    int per_pair_limit = 48, std::uint64_t node_budget = 4'000'000);

}  // namespace hxt
