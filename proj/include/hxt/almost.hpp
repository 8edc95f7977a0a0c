#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hxt/config.hpp"
#include "hxt/embedding.hpp"
#include "hxt/tree_partition.hpp"

namespace hxt {

struct GreedyEdge {
  int edge_id = -1;
  bool connector = false;  // interior vertices drawn from the reservoir
};

struct GreedySpec {
  std::vector<GreedyEdge> edges;  // order must keep one endpoint always covered
  VertexSet allowed;              // pool for tips and plain interiors
  VertexSet reservoir;            // pool for connector interiors
  std::vector<int> prefer_edges;  // host edges tried first (tiling bias)
  int restarts = 12;
  std::uint64_t seed = 0;
};

// Extends the embedding edge by edge, randomized greedy with restarts.
// Edges whose both endpoints are covered are closed in place. Returns the
// extended embedding or nothing; never touches existing assignments.
std::optional<PartialEmbedding> greedy_embed_edges(const PartialEmbedding& start,
                                                   const GreedySpec& spec,
                                                   std::string* why = nullptr);

struct AlmostResult {
  std::optional<PartialEmbedding> embedding;
  TreePartition partition;
  int connector_count = 0;
  int cycle_count = 0;  // tiling used for candidate bias
  std::string error;
};

// Covers every base edge of the tree except `skip_edges`: decomposes the
// tree into bounded parts, embeds part-internal edges greedily from
// `allowed`, routes part-crossing edges through the reservoir, and prefers
// host edges lying on a greedy loose-cycle tiling.
AlmostResult almost_embed(const PartialEmbedding& start, const Tree& t, int tree_root,
                          const std::vector<int>& skip_edges, const VertexSet& reservoir,
                          const Config& cfg, std::uint64_t seed);

}  // namespace hxt
