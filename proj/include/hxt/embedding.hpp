#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hxt/expansion.hpp"
#include "hxt/gadgets.hpp"
#include "hxt/hypergraph.hpp"

namespace hxt {

// Injective partial map from an expansion tree into a host, tracked per
// vertex and per target edge. Edge images are derived from the vertex map,
// so a switch is purely a set of vertex moves. Values copy freely; the host
// and target outlive every embedding built on them.
class PartialEmbedding {
  const Hypergraph* host_ = nullptr;
  const ExpansionTree* target_ = nullptr;
  std::vector<int> map_;       // target vertex -> host vertex or -1
  std::vector<int> inverse_;   // host vertex -> target vertex or -1
  std::vector<char> edge_in_;  // target edge id -> embedded?
  VertexSet image_;

 public:
  PartialEmbedding() = default;
  PartialEmbedding(const Hypergraph& host, const ExpansionTree& target);

  const Hypergraph& host() const { return *host_; }
  const ExpansionTree& target() const { return *target_; }
  int to_host(int target_v) const { return map_[static_cast<std::size_t>(target_v)]; }
  int to_target(int host_v) const { return inverse_[static_cast<std::size_t>(host_v)]; }
  bool edge_embedded(int edge_id) const { return edge_in_[static_cast<std::size_t>(edge_id)] != 0; }
  const VertexSet& image() const { return image_; }
  int embedded_edge_count() const;
  int embedded_vertex_count() const { return static_cast<int>(image_.count()); }
  bool complete() const;

  // Host image of an embedded target edge.
  VertexSet edge_image(int edge_id) const;
  // Embedded target edge whose image equals the mask, if any.
  std::optional<int> find_edge_by_image(const VertexSet& mask) const;
  // Number of embedded target edges through a target vertex.
  int embedded_degree(int target_v) const;

  void assign(int target_v, int host_v);    // throws on conflicts
  void unassign(int target_v);
  void mark_edge(int edge_id);              // all endpoints must be mapped
  void move(int target_v, int new_host_v);  // reassignment used by switches

  bool validate(std::string* why = nullptr, bool require_connected = true) const;
};

struct VertexMove {
  int target_vertex = -1;
  int from_host = -1;
  int to_host = -1;
};

struct Switch {
  enum class Kind { Diamond, Star, GadgetHalf };
  Kind kind = Kind::Diamond;
  std::vector<VertexMove> moves;

  VertexSet out_set() const;  // host vertices vacated
  VertexSet in_set() const;   // host vertices newly covered
  Switch inverse() const;
};

// Applies the moves to a copy, re-verifying stale premises, injectivity and
// full embedding validity. Throws std::invalid_argument on a stale or
// inconsistent switch.
PartialEmbedding apply_switch(const PartialEmbedding& pe, const Switch& sw);

// Composite switch flipping every component of the given half of g to its
// partner; `from_side` is the half currently immersed in pe (1 or 2).
// Throws std::invalid_argument when some component is not immersed.
Switch switch_from_gadget_half(const PartialEmbedding& pe, const Gadget& g, int from_side);

// Single half-diamond switch: the expansion-side vertex sitting on
// `from_tip` of the embedded edge `shared + from_tip` moves to `to_tip`.
Switch diamond_switch(const PartialEmbedding& pe, const VertexSet& shared, int from_tip,
                      int to_tip);

}  // namespace hxt
