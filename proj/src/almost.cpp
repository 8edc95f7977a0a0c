#include "hxt/almost.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "hxt/cycle_embed.hpp"
#include "hxt/rng.hpp"

namespace hxt {

namespace {

// One randomized pass over the edge list; returns nothing on the first edge
// with no viable host edge.
std::optional<PartialEmbedding> greedy_pass(const PartialEmbedding& start,
                                            const GreedySpec& spec,
                                            const std::set<int>& prefer, Rng& rng,
                                            std::string* why) {
  PartialEmbedding pe = start;
  const Hypergraph& h = pe.host();
  const ExpansionTree& x = pe.target();
  const int k = h.k();
  for (const GreedyEdge& ge : spec.edges) {
    if (pe.edge_embedded(ge.edge_id)) continue;
    auto [a, b] = x.base_edges[static_cast<std::size_t>(ge.edge_id)];
    int ha = pe.to_host(a);
    int hb = pe.to_host(b);
    if (ha < 0 && hb < 0) {
      if (why) *why = "edge order violation: neither endpoint covered";
      return std::nullopt;
    }
    int parent = ha >= 0 ? a : b;
    int child = ha >= 0 ? b : a;
    int hp = pe.to_host(parent);
    int hc = pe.to_host(child);

    std::vector<int> cand(h.incident(hp).begin(), h.incident(hp).end());
    rng.shuffle(cand);
    if (!prefer.empty())
      std::stable_partition(cand.begin(), cand.end(),
                            [&](int e) { return prefer.count(e) > 0; });

    bool placed = false;
    for (int eid : cand) {
      const VertexSet& mask = h.edge_mask(eid);
      if (hc >= 0 && !mask.test(hc)) continue;
      VertexSet rest = mask;
      rest.reset(hp);
      if (hc >= 0) rest.reset(hc);
      if (rest.intersects(pe.image())) continue;

      int tip = -1;
      std::vector<int> interiors;
      if (ge.connector) {
        VertexSet in_res = rest & spec.reservoir;
        VertexSet outside = rest.minus(spec.reservoir);
        if (static_cast<int>(in_res.count()) != k - 2) continue;
        if (hc < 0) {
          if (outside.count() != 1) continue;
          tip = outside.lowest();
          if (!spec.allowed.test(tip)) continue;
        } else if (!outside.empty()) {
          continue;
        }
        interiors = in_res.to_vector();
      } else {
        if (!rest.minus(spec.allowed).empty()) continue;
        std::vector<int> rv = rest.to_vector();
        if (hc < 0) {
          std::size_t pick = rng.below(rv.size());
          tip = rv[pick];
          rv.erase(rv.begin() + static_cast<std::ptrdiff_t>(pick));
        }
        interiors = rv;
      }

      if (hc < 0) pe.assign(child, tip);
      const std::vector<int>& fresh = x.fresh[static_cast<std::size_t>(ge.edge_id)];
      for (std::size_t i = 0; i < fresh.size(); ++i) pe.assign(fresh[i], interiors[i]);
      pe.mark_edge(ge.edge_id);
      placed = true;
      break;
    }
    if (!placed) {
      if (why)
        *why = "no host edge fits base edge " + std::to_string(ge.edge_id) +
               (ge.connector ? " (connector)" : "");
      return std::nullopt;
    }
  }
  std::string vwhy;
  if (!pe.validate(&vwhy, false)) {
    if (why) *why = "greedy result failed validation: " + vwhy;
    return std::nullopt;
  }
  return pe;
}

}  // namespace

std::optional<PartialEmbedding> greedy_embed_edges(const PartialEmbedding& start,
                                                   const GreedySpec& spec, std::string* why) {
  std::set<int> prefer(spec.prefer_edges.begin(), spec.prefer_edges.end());
  std::string last;
  for (int r = 0; r < std::max(1, spec.restarts); ++r) {
    Rng rng(Rng::derive(spec.seed, static_cast<std::uint64_t>(r)));
    std::optional<PartialEmbedding> got = greedy_pass(start, spec, prefer, rng, &last);
    if (got) return got;
  }
  if (why) *why = last;
  return std::nullopt;
}

AlmostResult almost_embed(const PartialEmbedding& start, const Tree& t, int tree_root,
                          const std::vector<int>& skip_edges, const VertexSet& reservoir,
                          const Config& cfg, std::uint64_t seed) {
  AlmostResult res;
  const ExpansionTree& x = start.target();
  const Hypergraph& h = start.host();

  res.partition = partition_tree(t, tree_root, std::min(cfg.part_size, t.n()));
  std::vector<int> part_of(static_cast<std::size_t>(t.n()), -1);
  for (std::size_t p = 0; p < res.partition.parts.size(); ++p)
    for (int v : res.partition.parts[p].vertices)
      part_of[static_cast<std::size_t>(v)] = static_cast<int>(p);

  std::set<int> skip(skip_edges.begin(), skip_edges.end());
  std::vector<char> picked(x.base_edges.size(), 0);
  std::vector<char> reach(static_cast<std::size_t>(t.n()), 0);
  for (int v = 0; v < t.n(); ++v)
    if (start.to_host(v) >= 0) reach[static_cast<std::size_t>(v)] = 1;

  // Dependency order: repeatedly take edges with a reachable endpoint, so
  // greedy always extends from a covered vertex.
  std::vector<GreedyEdge> order;
  bool progress = true;
  while (progress) {
    progress = false;
    for (int e = 0; e < static_cast<int>(x.base_edges.size()); ++e) {
      if (picked[static_cast<std::size_t>(e)] || start.edge_embedded(e) || skip.count(e))
        continue;
      auto [a, b] = x.base_edges[static_cast<std::size_t>(e)];
      if (!reach[static_cast<std::size_t>(a)] && !reach[static_cast<std::size_t>(b)]) continue;
      GreedyEdge ge;
      ge.edge_id = e;
      ge.connector = part_of[static_cast<std::size_t>(a)] != part_of[static_cast<std::size_t>(b)];
      order.push_back(ge);
      picked[static_cast<std::size_t>(e)] = 1;
      reach[static_cast<std::size_t>(a)] = 1;
      reach[static_cast<std::size_t>(b)] = 1;
      progress = true;
    }
  }
  for (int e = 0; e < static_cast<int>(x.base_edges.size()); ++e)
    if (!picked[static_cast<std::size_t>(e)] && !start.edge_embedded(e) && !skip.count(e)) {
      res.error = "remaining edges are not reachable from the covered set";
      return res;
    }
  for (const GreedyEdge& ge : order)
    if (ge.connector) ++res.connector_count;

  VertexSet allowed = h.vertex_mask().minus(reservoir).minus(start.image());
  CycleTiling tiling = tile_loose_cycles(h, allowed, cfg.tile_length, Rng::derive(seed, 101));
  res.cycle_count = static_cast<int>(tiling.cycles.size());

  GreedySpec spec;
  spec.edges = std::move(order);
  spec.allowed = allowed;
  spec.reservoir = reservoir.minus(start.image());
  for (const std::vector<int>& cyc : tiling.cycles)
    spec.prefer_edges.insert(spec.prefer_edges.end(), cyc.begin(), cyc.end());
  spec.restarts = cfg.stage_restarts;
  spec.seed = Rng::derive(seed, 202);

  std::string why;
  std::optional<PartialEmbedding> got = greedy_embed_edges(start, spec, &why);
  if (!got) {
    res.error = "greedy cover failed: " + why;
    return res;
  }
  res.embedding = std::move(got);
  return res;
}

}  // namespace hxt
