#include "hxt/embedding.hpp"

#include <algorithm>
#include <stdexcept>

namespace hxt {

PartialEmbedding::PartialEmbedding(const Hypergraph& host, const ExpansionTree& target)
    : host_(&host),
      target_(&target),
      map_(static_cast<std::size_t>(target.target.n()), -1),
      inverse_(static_cast<std::size_t>(host.n()), -1),
      edge_in_(static_cast<std::size_t>(target.target.edge_count()), 0) {
  if (target.target.n() > host.n())
    throw std::invalid_argument("embedding target larger than host");
  if (target.target.k() != host.k())
    throw std::invalid_argument("arity mismatch between target and host");
}

int PartialEmbedding::embedded_edge_count() const {
  int c = 0;
  for (char f : edge_in_) c += f != 0;
  return c;
}

bool PartialEmbedding::complete() const {
  return embedded_edge_count() == target_->target.edge_count() &&
         embedded_vertex_count() == target_->target.n();
}

VertexSet PartialEmbedding::edge_image(int edge_id) const {
  VertexSet img;
  for (int v : target_->target.edge(edge_id)) {
    int hv = map_[static_cast<std::size_t>(v)];
    if (hv < 0) throw std::logic_error("edge_image: endpoint not mapped");
    img.set(hv);
  }
  return img;
}

std::optional<int> PartialEmbedding::find_edge_by_image(const VertexSet& mask) const {
  for (int e = 0; e < target_->target.edge_count(); ++e) {
    if (!edge_embedded(e)) continue;
    if (edge_image(e) == mask) return e;
  }
  return std::nullopt;
}

int PartialEmbedding::embedded_degree(int target_v) const {
  int c = 0;
  for (int e = 0; e < target_->target.edge_count(); ++e) {
    if (!edge_embedded(e)) continue;
    const std::vector<int>& verts = target_->target.edge(e);
    if (std::find(verts.begin(), verts.end(), target_v) != verts.end()) ++c;
  }
  return c;
}

void PartialEmbedding::assign(int target_v, int host_v) {
  if (target_v < 0 || target_v >= target_->target.n() || host_v < 0 || host_v >= host_->n())
    throw std::invalid_argument("assign: vertex out of range");
  if (map_[static_cast<std::size_t>(target_v)] != -1)
    throw std::invalid_argument("assign: target vertex already mapped");
  if (inverse_[static_cast<std::size_t>(host_v)] != -1)
    throw std::invalid_argument("assign: host vertex already used");
  map_[static_cast<std::size_t>(target_v)] = host_v;
  inverse_[static_cast<std::size_t>(host_v)] = target_v;
  image_.set(host_v);
}

void PartialEmbedding::unassign(int target_v) {
  int hv = map_[static_cast<std::size_t>(target_v)];
  if (hv < 0) throw std::invalid_argument("unassign: vertex not mapped");
  map_[static_cast<std::size_t>(target_v)] = -1;
  inverse_[static_cast<std::size_t>(hv)] = -1;
  image_.reset(hv);
}

void PartialEmbedding::mark_edge(int edge_id) {
  if (edge_id < 0 || edge_id >= target_->target.edge_count())
    throw std::invalid_argument("mark_edge: edge id out of range");
  if (edge_in_[static_cast<std::size_t>(edge_id)])
    throw std::invalid_argument("mark_edge: edge already embedded");
  VertexSet img = edge_image(edge_id);
  if (!host_->has_edge(img))
    throw std::invalid_argument("mark_edge: image is not a host edge");
  edge_in_[static_cast<std::size_t>(edge_id)] = 1;
}

void PartialEmbedding::move(int target_v, int new_host_v) {
  int old_host = map_[static_cast<std::size_t>(target_v)];
  if (old_host < 0) throw std::invalid_argument("move: vertex not mapped");
  if (inverse_[static_cast<std::size_t>(new_host_v)] != -1)
    throw std::invalid_argument("move: destination occupied");
  map_[static_cast<std::size_t>(target_v)] = new_host_v;
  inverse_[static_cast<std::size_t>(old_host)] = -1;
  inverse_[static_cast<std::size_t>(new_host_v)] = target_v;
  image_.reset(old_host);
  image_.set(new_host_v);
}

bool PartialEmbedding::validate(std::string* why, bool require_connected) const {
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  if (!host_ || !target_) return fail("embedding not bound to host and target");
  VertexSet img;
  for (int v = 0; v < target_->target.n(); ++v) {
    int hv = map_[static_cast<std::size_t>(v)];
    if (hv == -1) continue;
    if (hv < 0 || hv >= host_->n()) return fail("mapped vertex out of range");
    if (inverse_[static_cast<std::size_t>(hv)] != v) return fail("inverse map out of sync");
    if (img.test(hv)) return fail("map is not injective");
    img.set(hv);
  }
  if (img != image_) return fail("image cache out of sync");
  for (int hv = 0; hv < host_->n(); ++hv) {
    int tv = inverse_[static_cast<std::size_t>(hv)];
    if (tv != -1 && map_[static_cast<std::size_t>(tv)] != hv)
      return fail("forward map out of sync");
  }
  for (int e = 0; e < target_->target.edge_count(); ++e) {
    if (!edge_embedded(e)) continue;
    VertexSet em;
    for (int v : target_->target.edge(e)) {
      int hv = map_[static_cast<std::size_t>(v)];
      if (hv < 0) return fail("embedded edge has an unmapped endpoint");
      em.set(hv);
    }
    if (!host_->has_edge(em)) return fail("embedded edge image missing from host");
  }
  if (require_connected) {
    // Embedded base edges must form a connected subforest of the base tree.
    std::vector<int> comp(static_cast<std::size_t>(target_->n_base), -1);
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(target_->n_base));
    int used_edges = 0;
    for (int e = 0; e < static_cast<int>(target_->base_edges.size()); ++e) {
      if (!edge_embedded(e)) continue;
      auto [a, b] = target_->base_edges[static_cast<std::size_t>(e)];
      adj[static_cast<std::size_t>(a)].push_back(b);
      adj[static_cast<std::size_t>(b)].push_back(a);
      ++used_edges;
    }
    if (used_edges > 0) {
      int start = -1;
      for (int v = 0; v < target_->n_base && start < 0; ++v)
        if (!adj[static_cast<std::size_t>(v)].empty()) start = v;
      std::vector<int> stack{start};
      comp[static_cast<std::size_t>(start)] = 0;
      int seen = 1;
      while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (int w : adj[static_cast<std::size_t>(v)]) {
          if (comp[static_cast<std::size_t>(w)] == -1) {
            comp[static_cast<std::size_t>(w)] = 0;
            ++seen;
            stack.push_back(w);
          }
        }
      }
      int touched = 0;
      for (int v = 0; v < target_->n_base; ++v)
        if (!adj[static_cast<std::size_t>(v)].empty()) ++touched;
      if (seen != touched) return fail("embedded edges are not connected");
    }
  }
  return true;
}

VertexSet Switch::out_set() const {
  VertexSet from, to;
  for (const VertexMove& m : moves) from.set(m.from_host);
  for (const VertexMove& m : moves) to.set(m.to_host);
  return from.minus(to);
}

VertexSet Switch::in_set() const {
  VertexSet from, to;
  for (const VertexMove& m : moves) from.set(m.from_host);
  for (const VertexMove& m : moves) to.set(m.to_host);
  return to.minus(from);
}

Switch Switch::inverse() const {
  Switch inv;
  inv.kind = kind;
  inv.moves.reserve(moves.size());
  for (const VertexMove& m : moves)
    inv.moves.push_back(VertexMove{m.target_vertex, m.to_host, m.from_host});
  return inv;
}

PartialEmbedding apply_switch(const PartialEmbedding& pe, const Switch& sw) {
  PartialEmbedding out = pe;
  // Stale detection first, then a two-phase move so that in-image shuffles
  // cannot collide with themselves.
  for (const VertexMove& m : sw.moves) {
    if (m.target_vertex < 0 || m.target_vertex >= pe.target().target.n())
      throw std::invalid_argument("switch: target vertex out of range");
    if (pe.to_host(m.target_vertex) != m.from_host)
      throw std::invalid_argument("switch is stale: vertex no longer where expected");
  }
  VertexSet incoming = sw.in_set();
  if (incoming.intersects(pe.image()))
    throw std::invalid_argument("switch is stale: incoming vertex already covered");
  for (const VertexMove& m : sw.moves) out.unassign(m.target_vertex);
  for (const VertexMove& m : sw.moves) {
    if (out.to_target(m.to_host) != -1)
      throw std::invalid_argument("switch moves two vertices to one place");
    out.assign(m.target_vertex, m.to_host);
  }
  std::string why;
  if (!out.validate(&why))
    throw std::invalid_argument("switch result invalid: " + why);
  VertexSet expect = (pe.image().minus(sw.out_set())) | sw.in_set();
  if (out.image() != expect)
    throw std::logic_error("switch image arithmetic failed");
  return out;
}

namespace {

// The target vertex sitting on `host_v` must belong to exactly one embedded
// target edge, whose image is `edge_mask`; returns that vertex.
int lone_rider(const PartialEmbedding& pe, int host_v, const VertexSet& edge_mask,
               const char* what) {
  int tv = pe.to_target(host_v);
  if (tv < 0)
    throw std::invalid_argument(std::string(what) + ": pivot host vertex not covered");
  if (pe.embedded_degree(tv) != 1)
    throw std::invalid_argument(std::string(what) +
                                ": pivot vertex carries more than one embedded edge");
  std::optional<int> eid = pe.find_edge_by_image(edge_mask);
  if (!eid) throw std::invalid_argument(std::string(what) + ": edge not immersed");
  const std::vector<int>& verts = pe.target().target.edge(*eid);
  if (std::find(verts.begin(), verts.end(), tv) == verts.end())
    throw std::invalid_argument(std::string(what) + ": pivot vertex outside its edge");
  return tv;
}

}  // namespace

Switch diamond_switch(const PartialEmbedding& pe, const VertexSet& shared, int from_tip,
                      int to_tip) {
  VertexSet from_edge = shared;
  from_edge.set(from_tip);
  VertexSet to_edge = shared;
  to_edge.set(to_tip);
  if (!pe.host().has_edge(from_edge) || !pe.host().has_edge(to_edge))
    throw std::invalid_argument("diamond_switch: not a diamond of the host");
  if (pe.image().test(to_tip))
    throw std::invalid_argument("diamond_switch: destination tip already covered");
  int tv = lone_rider(pe, from_tip, from_edge, "diamond_switch");
  Switch sw;
  sw.kind = Switch::Kind::Diamond;
  sw.moves.push_back(VertexMove{tv, from_tip, to_tip});
  return sw;
}

Switch switch_from_gadget_half(const PartialEmbedding& pe, const Gadget& g, int from_side) {
  if (from_side != 1 && from_side != 2)
    throw std::invalid_argument("switch_from_gadget_half: side must be 1 or 2");
  std::vector<HalfComponent> from = half_components(g, from_side);
  std::vector<HalfComponent> to = half_components(g, 3 - from_side);
  Switch sw;
  sw.kind = Switch::Kind::GadgetHalf;
  for (std::size_t i = 0; i < from.size(); ++i) {
    const HalfComponent& fc = from[i];
    const HalfComponent& tc = to[i];
    if (!fc.is_star) {
      int tv = lone_rider(pe, fc.center, fc.edges[0], "gadget switch");
      sw.moves.push_back(VertexMove{tv, fc.center, tc.center});
      continue;
    }
    // Star component: the centre moves anchor to anchor, each edge's
    // interior vertices move onto the partner edge's interior.
    int tu = pe.to_target(fc.center);
    if (tu < 0) throw std::invalid_argument("gadget switch: star centre not covered");
    sw.moves.push_back(VertexMove{tu, fc.center, tc.center});
    int star_edges = 0;
    for (std::size_t j = 0; j < fc.edges.size(); ++j) {
      std::optional<int> eid = pe.find_edge_by_image(fc.edges[j]);
      if (!eid)
        throw std::invalid_argument("gadget switch: star edge not immersed");
      ++star_edges;
      VertexSet from_interior = fc.edges[j];
      from_interior.reset(fc.center);
      from_interior.reset(fc.leaves[j]);
      VertexSet to_interior = tc.edges[j];
      to_interior.reset(tc.center);
      to_interior.reset(tc.leaves[j]);
      std::vector<int> fi = from_interior.to_vector();
      std::vector<int> ti = to_interior.to_vector();
      if (fi.size() != ti.size())
        throw std::logic_error("gadget switch: interior sizes disagree");
      for (std::size_t p = 0; p < fi.size(); ++p) {
        int tv = pe.to_target(fi[p]);
        if (tv < 0)
          throw std::invalid_argument("gadget switch: star interior not covered");
        sw.moves.push_back(VertexMove{tv, fi[p], ti[p]});
      }
    }
    if (pe.embedded_degree(tu) != star_edges)
      throw std::invalid_argument(
          "gadget switch: star centre carries extra embedded edges");
  }
  return sw;
}

}  // namespace hxt
