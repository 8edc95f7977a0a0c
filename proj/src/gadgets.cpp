#include "hxt/gadgets.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "hxt/rng.hpp"

namespace hxt {

VertexSet Gadget::vertices() const {
  VertexSet s;
  for (const DiamondChain& c : chains) s |= c.vertices();
  for (const Balancer& b : balancers) s |= b.vertices();
  return s;
}

VertexSet Gadget::half_cover(int side) const {
  VertexSet s;
  for (const HalfComponent& comp : half_components(*this, side)) s |= comp.vertices();
  return s;
}

int Gadget::star_t() const {
  return balancers.empty() ? 0 : balancers.front().t();
}

VertexSet HalfComponent::vertices() const {
  VertexSet s;
  for (const VertexSet& e : edges) s |= e;
  return s;
}

std::vector<HalfComponent> half_components(const Gadget& g, int side) {
  std::vector<HalfComponent> out;
  for (std::size_t ci = 0; ci < g.chains.size(); ++ci) {
    const DiamondChain& c = g.chains[ci];
    bool flip = ci < g.chain_flip.size() && g.chain_flip[ci] != 0;
    bool take_u = (side == 1) != flip;
    for (int i = 0; i < c.length(); ++i) {
      const Diamond& d = c.diamonds[static_cast<std::size_t>(i)];
      HalfComponent comp;
      comp.is_star = false;
      comp.center = take_u ? d.tip_u : d.tip_v;
      comp.edges.push_back(take_u ? d.edge_u() : d.edge_v());
      comp.constituent = static_cast<int>(ci);
      comp.slot = i;
      out.push_back(std::move(comp));
    }
  }
  for (std::size_t bi = 0; bi < g.balancers.size(); ++bi) {
    const Balancer& b = g.balancers[bi];
    bool flip = bi < g.balancer_flip.size() && g.balancer_flip[bi] != 0;
    bool take_first = (side == 1) != flip;
    HalfComponent comp;
    comp.is_star = true;
    comp.center = take_first ? b.x1 : b.x2;
    comp.edges = take_first ? b.f1 : b.f2;
    comp.leaves = b.y;
    comp.constituent = static_cast<int>(g.chains.size() + bi);
    comp.slot = 0;
    out.push_back(std::move(comp));
  }
  return out;
}

bool verify_gadget(const Hypergraph& h, const Bipartition& part, const Gadget& g,
                   std::string* why) {
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  if (g.k != h.k()) return fail("arity mismatch");
  if (g.chains.empty() && g.balancers.empty()) return fail("gadget has no constituents");
  if (g.chain_flip.size() != g.chains.size() ||
      g.balancer_flip.size() != g.balancers.size())
    return fail("flip flags out of step with constituents");
  std::string sub;
  for (const DiamondChain& c : g.chains)
    if (!verify_chain(h, c, &sub)) return fail("chain: " + sub);
  int t = -1;
  for (const Balancer& b : g.balancers) {
    if (!verify_balancer(h, part, b, &sub)) return fail("balancer: " + sub);
    if (t == -1) t = b.t();
    if (b.t() != t) return fail("balancers disagree on star size");
  }
  // Edge-disjoint union across every constituent.
  std::set<std::vector<int>> edge_keys;
  auto note_edge = [&](const VertexSet& e) { return edge_keys.insert(e.to_vector()).second; };
  for (const DiamondChain& c : g.chains)
    for (const Diamond& d : c.diamonds) {
      if (!note_edge(d.edge_u()) || !note_edge(d.edge_v()))
        return fail("constituents share an edge");
    }
  for (const Balancer& b : g.balancers) {
    for (const VertexSet& e : b.f1)
      if (!note_edge(e)) return fail("constituents share an edge");
    for (const VertexSet& e : b.f2)
      if (!note_edge(e)) return fail("constituents share an edge");
  }
  // Each half must be a vertex-disjoint union of its components.
  for (int side = 1; side <= 2; ++side) {
    std::vector<HalfComponent> comps = half_components(g, side);
    for (std::size_t i = 0; i < comps.size(); ++i)
      for (std::size_t j = i + 1; j < comps.size(); ++j)
        if (comps[i].vertices().intersects(comps[j].vertices()))
          return fail("half " + std::to_string(side) + " has overlapping components");
  }
  VertexSet all = g.vertices();
  VertexSet c1 = g.half_cover(1);
  VertexSet c2 = g.half_cover(2);
  if ((c1 | c2) != all) return fail("halves fail to cover the gadget");
  if (g.x1 != all.minus(c2)) return fail("first boundary set is wrong");
  if (g.x2 != all.minus(c1)) return fail("second boundary set is wrong");
  if (g.x1.count() != g.x2.count()) return fail("boundary sets differ in size");
  return true;
}

Gadget chain_to_gadget(const Hypergraph& h, const DiamondChain& c) {
  std::string why;
  if (!verify_chain(h, c, &why))
    throw std::invalid_argument("chain_to_gadget: " + why);
  Gadget g;
  g.k = h.k();
  g.chains.push_back(c);
  g.chain_flip.push_back(0);
  g.x1 = VertexSet::of({c.u()});
  g.x2 = VertexSet::of({c.v()});
  return g;
}

Gadget balancer_to_gadget(const Hypergraph& h, const Bipartition& part, const Balancer& b) {
  std::string why;
  if (!verify_balancer(h, part, b, &why))
    throw std::invalid_argument("balancer_to_gadget: " + why);
  Gadget g;
  g.k = h.k();
  g.balancers.push_back(b);
  g.balancer_flip.push_back(0);
  VertexSet all = b.vertices();
  g.x1 = all.minus(b.half_vertices(2));
  g.x2 = all.minus(b.half_vertices(1));
  return g;
}

Gadget gadget_merge(const Hypergraph& h, const Bipartition& part,
                    const std::vector<std::pair<const Gadget*, bool>>& parts) {
  Gadget g;
  g.k = h.k();
  for (const auto& [src, flip] : parts) {
    for (std::size_t i = 0; i < src->chains.size(); ++i) {
      g.chains.push_back(src->chains[i]);
      g.chain_flip.push_back(static_cast<char>((src->chain_flip[i] != 0) != flip));
    }
    for (std::size_t i = 0; i < src->balancers.size(); ++i) {
      g.balancers.push_back(src->balancers[i]);
      g.balancer_flip.push_back(static_cast<char>((src->balancer_flip[i] != 0) != flip));
    }
  }
  VertexSet all = g.vertices();
  g.x1 = all.minus(g.half_cover(2));
  g.x2 = all.minus(g.half_cover(1));
  std::string why;
  if (!verify_gadget(h, part, g, &why))
    throw std::invalid_argument("gadget merge is not a gadget: " + why);
  return g;
}

Gadget gadget_union(const Hypergraph& h, const Bipartition& part, const Gadget& g1,
                    const Gadget& g2) {
  if (g1.vertices().intersects(g2.vertices()))
    throw std::invalid_argument("gadget_union: operands share vertices");
  Gadget g = gadget_merge(h, part, {{&g1, false}, {&g2, false}});
  if (g.x1 != (g1.x1 | g2.x1) || g.x2 != (g1.x2 | g2.x2))
    throw std::logic_error("gadget_union: boundary arithmetic failed");
  return g;
}

Gadget gadget_compose(const Hypergraph& h, const Bipartition& part,
                      const Gadget& outer, const Gadget& inner) {
  if (!outer.x1.contains(inner.x1) || !outer.x2.contains(inner.x2))
    throw std::invalid_argument("gadget_compose: inner boundary escapes the outer one");
  VertexSet overlap = outer.vertices() & inner.vertices();
  if (overlap != (inner.x1 | inner.x2))
    throw std::invalid_argument("gadget_compose: operands overlap beyond the inner boundary");
  Gadget g = gadget_merge(h, part, {{&outer, false}, {&inner, true}});
  if (g.x1 != outer.x1.minus(inner.x1) || g.x2 != outer.x2.minus(inner.x2))
    throw std::logic_error("gadget_compose: boundary arithmetic failed");
  return g;
}

namespace {

std::vector<int> side_sorted(const VertexSet& s, const VertexSet& side) {
  std::vector<int> out;
  for (int v : s.to_vector())
    if (side.test(v)) out.push_back(v);
  return out;
}

std::optional<Gadget> capacity_gadget(const Hypergraph& h, const Bipartition& part,
                                      int t_a, int t_b, std::uint64_t seed,
                                      const VertexSet& forbidden, int chain_max_len,
                                      bool anchor_mode) {
  int cap = 1 + t_b - t_a;
  for (int attempt = 0; attempt < 16; ++attempt) {
    std::uint64_t s = Rng::derive(seed, static_cast<std::uint64_t>(attempt));
    std::vector<Balancer> bals = find_balancers(h, part, t_a, t_b, 6, s, forbidden);
    for (const Balancer& bal : bals) {
      VertexSet bx1 = bal.vertices().minus(bal.half_vertices(2));
      VertexSet bx2 = bal.vertices().minus(bal.half_vertices(1));
      std::vector<std::pair<int, int>> pairs;
      if (anchor_mode) {
        VertexSet i1 = bx1, i2 = bx2;
        i1.reset(bal.x1);
        i2.reset(bal.x2);
        std::vector<int> b1 = side_sorted(i1, part.b), b2 = side_sorted(i2, part.b);
        std::vector<int> a1 = side_sorted(i1, part.a), a2 = side_sorted(i2, part.a);
        if (b1.size() != b2.size() || a1.size() != a2.size()) continue;
        for (std::size_t j = 0; j < b1.size(); ++j) pairs.emplace_back(b1[j], b2[j]);
        for (std::size_t j = 0; j < a1.size(); ++j) pairs.emplace_back(a1[j], a2[j]);
      } else {
        std::vector<int> b1 = side_sorted(bx1, part.b), b2 = side_sorted(bx2, part.b);
        std::vector<int> a1 = side_sorted(bx1, part.a), a2 = side_sorted(bx2, part.a);
        if (b2.size() != b1.size() + static_cast<std::size_t>(cap)) continue;
        if (a1.size() != a2.size() + static_cast<std::size_t>(cap)) continue;
        for (std::size_t j = 0; j < b1.size(); ++j) pairs.emplace_back(b1[j], b2[j]);
        for (std::size_t j = 0; j < a2.size(); ++j) pairs.emplace_back(a1[j], a2[j]);
      }
      VertexSet blocked = forbidden | bal.vertices();
      std::optional<std::vector<DiamondChain>> chains =
          pairs.empty() ? std::optional<std::vector<DiamondChain>>(std::vector<DiamondChain>())
                        : find_disjoint_chains(h, pairs, chain_max_len, blocked);
      if (!chains) continue;
      try {
        Gadget g = balancer_to_gadget(h, part, bal);
        for (const DiamondChain& c : *chains)
          g = gadget_compose(h, part, g, chain_to_gadget(h, c));
        if (g.boundary_size() != cap) continue;
        if (static_cast<int>(g.x1.intersect_count(part.a)) != cap) continue;
        if (static_cast<int>(g.x2.intersect_count(part.b)) != cap) continue;
        return g;
      } catch (const std::invalid_argument&) {
        continue;
      }
    }
  }
  return std::nullopt;
}

}  // namespace

std::vector<Gadget> build_even_balancers(const Hypergraph& h, const Bipartition& part,
                                         int t, int count, std::uint64_t seed,
                                         const VertexSet& forbidden, int chain_max_len) {
  std::vector<Gadget> out;
  if (t < 1 || count <= 0) return out;
  VertexSet used = forbidden;
  for (int idx = 0; idx < count; ++idx) {
    std::uint64_t s = Rng::derive(seed, 1000 + static_cast<std::uint64_t>(idx));
    std::optional<Gadget> g;
    if (t % 2 == 1) {
      g = capacity_gadget(h, part, t / 2, t - t / 2, s, used, chain_max_len, false);
    } else {
      std::optional<Gadget> g1 =
          capacity_gadget(h, part, t / 2, t / 2, s, used, chain_max_len, false);
      if (g1) {
        std::optional<Gadget> g2 = capacity_gadget(
            h, part, t / 2, t / 2, Rng::derive(s, 1), used | g1->vertices(),
            chain_max_len, false);
        if (g2) g = gadget_union(h, part, *g1, *g2);
      }
    }
    if (!g) break;
    out.push_back(*g);
    used |= g->vertices();
  }
  return out;
}

std::optional<Gadget> build_anchor_gadget(const Hypergraph& h, const Bipartition& part,
                                          int t, std::uint64_t seed,
                                          const VertexSet& forbidden, int chain_max_len) {
  if (t < 2 || t % 2 != 0)
    throw std::invalid_argument("build_anchor_gadget: star size must be even and positive");
  return capacity_gadget(h, part, t / 2, t / 2, seed, forbidden, chain_max_len, true);
}

}  // namespace hxt
