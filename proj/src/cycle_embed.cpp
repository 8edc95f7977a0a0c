#include "hxt/cycle_embed.hpp"

#include <algorithm>

#include "hxt/rng.hpp"

namespace hxt {

bool validate_loose_cycle(const Hypergraph& h, const std::vector<int>& edge_ids,
                          std::string* why) {
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  int m = static_cast<int>(edge_ids.size());
  if (m < 3) return fail("a loose cycle needs at least 3 edges");
  VertexSet all;
  for (int i = 0; i < m; ++i) {
    if (edge_ids[static_cast<std::size_t>(i)] < 0 ||
        edge_ids[static_cast<std::size_t>(i)] >= h.edge_count())
      return fail("edge id out of range");
    for (int j = i + 1; j < m; ++j) {
      std::size_t inter =
          h.edge_mask(edge_ids[static_cast<std::size_t>(i)])
              .intersect_count(h.edge_mask(edge_ids[static_cast<std::size_t>(j)]));
      bool consecutive = (j == i + 1) || (i == 0 && j == m - 1);
      if (consecutive && inter != 1) return fail("consecutive edges must share one vertex");
      if (!consecutive && inter != 0) return fail("non-consecutive edges must be disjoint");
    }
    all |= h.edge_mask(edge_ids[static_cast<std::size_t>(i)]);
  }
  if (all.count() != m * (h.k() - 1))
    return fail("cycle covers the wrong number of vertices");
  return true;
}

namespace {

// Depth-limited randomized search for one cycle through the start edge.
struct CycleDfs {
  const Hypergraph& h;
  VertexSet pool;  // allowed minus already tiled
  int m;
  Rng& rng;
  std::vector<int> edges;
  VertexSet used;
  int anchor0 = -1;  // vertex of the first edge the last edge must return to
  long long budget = 20000;

  bool extend(int head) {
    if (budget-- <= 0) return false;
    int depth = static_cast<int>(edges.size());
    std::vector<int> cand(h.incident(head).begin(), h.incident(head).end());
    rng.shuffle(cand);
    for (int eid : cand) {
      const VertexSet& mask = h.edge_mask(eid);
      if (!mask.minus(pool).empty()) continue;
      VertexSet overlap = mask & used;
      if (depth == m - 1) {
        // Closing edge: meets the cycle exactly in the head and the anchor.
        VertexSet want;
        want.set(head);
        want.set(anchor0);
        if (!(overlap == want)) continue;
        edges.push_back(eid);
        return true;
      }
      VertexSet head_only;
      head_only.set(head);
      if (!(overlap == head_only)) continue;
      edges.push_back(eid);
      used |= mask;
      VertexSet rest = mask;
      rest.reset(head);
      std::vector<int> next = rest.to_vector();
      rng.shuffle(next);
      for (int nh : next)
        if (nh != anchor0 && extend(nh)) return true;
      used = used.minus(rest);
      edges.pop_back();
    }
    return false;
  }
};

}  // namespace

CycleTiling tile_loose_cycles(const Hypergraph& h, const VertexSet& allowed, int length,
                              std::uint64_t seed) {
  CycleTiling out;
  if (length < 3) return out;
  Rng rng(seed);
  std::vector<int> starts(static_cast<std::size_t>(h.edge_count()));
  for (int i = 0; i < h.edge_count(); ++i) starts[static_cast<std::size_t>(i)] = i;
  rng.shuffle(starts);

  VertexSet pool = allowed;
  for (int eid : starts) {
    const VertexSet& mask = h.edge_mask(eid);
    if (!mask.minus(pool).empty()) continue;
    std::vector<int> verts = h.edge(eid);
    rng.shuffle(verts);
    bool built = false;
    for (std::size_t ai = 0; ai < verts.size() && !built; ++ai) {
      for (std::size_t hi = 0; hi < verts.size() && !built; ++hi) {
        if (ai == hi) continue;
        CycleDfs dfs{h, pool, length, rng, {eid}, mask, verts[ai], 20000};
        if (dfs.extend(verts[hi])) {
          std::string why;
          if (!validate_loose_cycle(h, dfs.edges, &why))
            throw std::logic_error("tiling produced an invalid cycle: " + why);
          VertexSet cv;
          for (int ce : dfs.edges) cv |= h.edge_mask(ce);
          out.cycles.push_back(dfs.edges);
          out.covered |= cv;
          pool = pool.minus(cv);
          built = true;
        }
      }
    }
  }
  return out;
}

std::pair<Hypergraph, std::vector<int>> induced_subgraph(const Hypergraph& h,
                                                         const VertexSet& keep) {
  std::vector<int> old_ids = keep.to_vector();
  std::vector<int> new_id(static_cast<std::size_t>(h.n()), -1);
  for (std::size_t i = 0; i < old_ids.size(); ++i)
    new_id[static_cast<std::size_t>(old_ids[i])] = static_cast<int>(i);
  Hypergraph sub(static_cast<int>(old_ids.size()), h.k());
  for (int e = 0; e < h.edge_count(); ++e) {
    if (!h.edge_mask(e).minus(keep).empty()) continue;
    std::vector<int> verts;
    for (int v : h.edge(e)) verts.push_back(new_id[static_cast<std::size_t>(v)]);
    sub.add_edge(verts);
  }
  return {std::move(sub), std::move(old_ids)};
}

}  // namespace hxt
