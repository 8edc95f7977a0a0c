#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hxt/embedding.hpp"
#include "hxt/gadgets.hpp"

namespace hxt {

// A host structure an embedding must cover in the switch-ready way: either a
// t-star (centre plus t edges through per-edge leaves) or a single edge with
// a designated switchable vertex.
struct ImmersionItem {
  bool is_star = false;
  int center = -1;
  std::vector<VertexSet> edges;
  std::vector<int> leaves;  // star leaves aligned with edges; empty otherwise

  VertexSet vertices() const;
};

ImmersionItem item_from_component(const HalfComponent& comp);
std::vector<ImmersionItem> items_from_gadget_half(const Gadget& g, int side);

struct ImmersionTask {
  std::vector<ImmersionItem> items;
};

// True when pe covers the item so that its switch is applicable: a star's
// centre target vertex carries exactly the star edges, a lone edge rides on
// a target vertex of embedded degree one sitting on the designated vertex.
bool verify_immersed(const PartialEmbedding& pe, const ImmersionItem& item,
                     std::string* why = nullptr);

struct ImmersionResult {
  std::optional<PartialEmbedding> embedding;
  std::string error;
  std::vector<int> item_vertex;  // base tree vertex hosting each item
  int restarts_used = 0;
};

// Embeds the expansion of the subtree of x induced by `verts` (rooted at
// `root`) into the host, extending `base` (whose image the new edges must
// avoid), so that every task item is immersed. Star items are pinned to
// subtree vertices of full tree degree t whose edges all stay inside the
// subtree; lone-edge items ride on the expansion of a parent edge. Item
// vertices are chosen pairwise at tree distance at least `spacing` and
// processed shallow first. Fresh vertices come from `allowed` (empty means
// every host vertex).
ImmersionResult immerse_embed(const Hypergraph& host, const ExpansionTree& x,
                              const std::vector<int>& verts, int root,
                              const ImmersionTask& task, const PartialEmbedding* base,
                              int spacing, int restarts, std::uint64_t seed,
                              const VertexSet& allowed = VertexSet());

}  // namespace hxt
