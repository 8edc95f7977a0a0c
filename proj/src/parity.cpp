#include "hxt/parity.hpp"

#include <algorithm>
#include <stdexcept>

#include "hxt/rng.hpp"

namespace hxt {

PiType pi_type(const Hypergraph& h, const Bipartition& part) {
  PiType out;
  int n = h.n();
  out.pi.assign(static_cast<std::size_t>(n), 0);
  out.even_neighbors.assign(static_cast<std::size_t>(n), 0);
  out.odd_neighbors.assign(static_cast<std::size_t>(n), 0);
  out.degenerate.assign(static_cast<std::size_t>(n), 0);
  Rational all_sets = binomial(n - 1, h.k() - 1);
  for (int w = 0; w < n; ++w) {
    long long even = 0, odd = 0;
    for (int eid : h.incident(w)) {
      VertexSet nb = h.edge_mask(eid);
      nb.reset(w);
      if (nb.intersect_count(part.a) % 2 == 0)
        ++even;
      else
        ++odd;
    }
    out.even_neighbors[static_cast<std::size_t>(w)] = even;
    out.odd_neighbors[static_cast<std::size_t>(w)] = odd;
    if (even + odd == 0) {
      out.degenerate[static_cast<std::size_t>(w)] = 1;
      out.pi[static_cast<std::size_t>(w)] = 0;
      continue;
    }
    // pi = 0 exactly when even-count >= C(n-1, k-1) / 6.
    out.pi[static_cast<std::size_t>(w)] =
        Rational(6 * even) < all_sets ? 1 : 0;
  }
  return out;
}

int pi_of(const Hypergraph& h, const Bipartition& part, int w) {
  long long even = 0, total = 0;
  for (int eid : h.incident(w)) {
    VertexSet nb = h.edge_mask(eid);
    nb.reset(w);
    if (nb.intersect_count(part.a) % 2 == 0) ++even;
    ++total;
  }
  if (total == 0) return 0;
  return Rational(6 * even) < binomial(h.n() - 1, h.k() - 1) ? 1 : 0;
}

namespace {

Gadget flip_whole(const Gadget& g) {
  Gadget out = g;
  std::swap(out.x1, out.x2);
  for (char& f : out.chain_flip) f = static_cast<char>(f == 0);
  for (char& f : out.balancer_flip) f = static_cast<char>(f == 0);
  return out;
}

std::optional<Gadget> build_rec(const Hypergraph& h, const Bipartition& part,
                                const VertexSet& x1_set, const VertexSet& x2_set,
                                int t, std::uint64_t seed, const VertexSet& forbidden,
                                int chain_max_len) {
  int a1 = static_cast<int>(x1_set.intersect_count(part.a));
  int a2 = static_cast<int>(x2_set.intersect_count(part.a));
  if (a1 > a2) {
    std::optional<Gadget> g =
        build_rec(h, part, x2_set, x1_set, t, seed, forbidden, chain_max_len);
    if (!g) return std::nullopt;
    return flip_whole(*g);
  }
  if (a1 == a2) {
    // Side-aligned chains, one per coordinate.
    std::vector<int> p1a, p1b, p2a, p2b;
    for (int v : x1_set.to_vector()) (part.a.test(v) ? p1a : p1b).push_back(v);
    for (int v : x2_set.to_vector()) (part.a.test(v) ? p2a : p2b).push_back(v);
    std::vector<std::pair<int, int>> pairs;
    for (std::size_t j = 0; j < p1a.size(); ++j) pairs.emplace_back(p1a[j], p2a[j]);
    for (std::size_t j = 0; j < p1b.size(); ++j) pairs.emplace_back(p1b[j], p2b[j]);
    std::optional<std::vector<DiamondChain>> chains =
        find_disjoint_chains(h, pairs, chain_max_len, forbidden);
    if (!chains) return std::nullopt;
    try {
      Gadget g = chain_to_gadget(h, (*chains)[0]);
      for (std::size_t i = 1; i < chains->size(); ++i)
        g = gadget_union(h, part, g, chain_to_gadget(h, (*chains)[i]));
      return g;
    } catch (const std::invalid_argument&) {
      return std::nullopt;
    }
  }
  // a2 - a1 is positive and even: bridge through one even-balancer, then
  // recurse on both flanks.
  int za = a2 - 2;
  if (za < 0 || za > h.k() - 3) return std::nullopt;
  for (int attempt = 0; attempt < 12; ++attempt) {
    std::uint64_t s = Rng::derive(seed, 7000 + static_cast<std::uint64_t>(attempt));
    VertexSet avoid = forbidden | x1_set | x2_set;
    std::vector<Gadget> evens = build_even_balancers(h, part, t, 1, s, avoid, chain_max_len);
    if (evens.empty()) continue;
    Gadget& ev = evens.front();
    VertexSet y1 = ev.x1, y2 = ev.x2;
    // Z: a fresh (k-3)-set with za vertices in A.
    VertexSet z;
    {
      VertexSet blocked = avoid | ev.vertices();
      Rng zrng(Rng::derive(s, 1));
      std::vector<int> fa, fb;
      for (int v = 0; v < h.n(); ++v) {
        if (blocked.test(v)) continue;
        (part.a.test(v) ? fa : fb).push_back(v);
      }
      int zb = h.k() - 3 - za;
      if (static_cast<int>(fa.size()) < za || static_cast<int>(fb.size()) < zb) continue;
      zrng.shuffle(fa);
      zrng.shuffle(fb);
      for (int j = 0; j < za; ++j) z.set(fa[static_cast<std::size_t>(j)]);
      for (int j = 0; j < zb; ++j) z.set(fb[static_cast<std::size_t>(j)]);
    }
    VertexSet z1 = z | y1;
    VertexSet z2 = z | y2;
    VertexSet forb1 = forbidden | x2_set | ev.vertices().minus(y2);
    std::optional<Gadget> l1 =
        build_rec(h, part, x1_set, z2, t, Rng::derive(s, 2), forb1, chain_max_len);
    if (!l1) continue;
    VertexSet forb2 =
        forbidden | x1_set | ev.vertices().minus(y1) | l1->vertices().minus(z);
    std::optional<Gadget> l2 =
        build_rec(h, part, z1, x2_set, t, Rng::derive(s, 3), forb2, chain_max_len);
    if (!l2) continue;
    try {
      Gadget g = gadget_merge(h, part, {{&*l1, false}, {&ev, true}, {&*l2, false}});
      if (g.x1 != x1_set || g.x2 != x2_set)
        throw std::logic_error("parity gadget assembly produced the wrong boundary");
      return g;
    } catch (const std::invalid_argument&) {
      continue;
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<Gadget> build_parity_gadget(const Hypergraph& h, const Bipartition& part,
                                          const VertexSet& x1_set, const VertexSet& x2_set,
                                          int t, std::uint64_t seed,
                                          const VertexSet& forbidden, int chain_max_len) {
  if (static_cast<int>(x1_set.count()) != h.k() - 1 ||
      static_cast<int>(x2_set.count()) != h.k() - 1)
    throw std::invalid_argument("build_parity_gadget: boundary sets must have k-1 vertices");
  if (x1_set.intersects(x2_set))
    throw std::invalid_argument("build_parity_gadget: boundary sets intersect");
  int a1 = static_cast<int>(x1_set.intersect_count(part.a));
  int a2 = static_cast<int>(x2_set.intersect_count(part.a));
  if ((a1 - a2) % 2 != 0)
    throw std::invalid_argument("build_parity_gadget: boundary parities differ");
  return build_rec(h, part, x1_set, x2_set, t, seed, forbidden, chain_max_len);
}

int ParityAbsorber::size() const {
  return static_cast<int>(gadget.vertices().count() - gadget.x1.count());
}

bool verify_parity_absorber(const Hypergraph& h, const Bipartition& part,
                            const ParityAbsorber& pa, std::string* why) {
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  if (pa.w < 0 || pa.w >= h.n()) return fail("central vertex out of range");
  if (static_cast<int>(pa.witness.count()) != h.k() - 1)
    return fail("witness has wrong size");
  if (pa.witness.test(pa.w)) return fail("witness contains the central vertex");
  VertexSet closing = pa.witness;
  closing.set(pa.w);
  if (!h.has_edge(closing)) return fail("witness plus w is not an edge");
  std::string sub;
  if (!verify_gadget(h, part, pa.gadget, &sub)) return fail("gadget: " + sub);
  if (pa.gadget.x1 != pa.target) return fail("first boundary must equal the target set");
  if (pa.gadget.x2 != pa.witness) return fail("second boundary must equal the witness");
  if (pa.gadget.vertices().test(pa.w)) return fail("gadget touches the central vertex");
  return true;
}

std::vector<ParityAbsorber> find_parity_absorbers(const Hypergraph& h,
                                                  const Bipartition& part, int w,
                                                  const VertexSet& target, int t,
                                                  int limit, std::uint64_t seed,
                                                  const VertexSet& forbidden) {
  if (w < 0 || w >= h.n() || static_cast<int>(target.count()) != h.k() - 1 ||
      target.test(w))
    throw std::invalid_argument("find_parity_absorbers: malformed target");
  int want = static_cast<int>(target.intersect_count(part.a)) % 2;
  if (want != pi_of(h, part, w))
    throw std::invalid_argument(
        "find_parity_absorbers: target parity disagrees with the vertex type");
  std::vector<ParityAbsorber> out;
  VertexSet used = forbidden;
  used.set(w);
  std::vector<int> order(h.incident(w).begin(), h.incident(w).end());
  Rng rng(seed);
  rng.shuffle(order);
  for (int eid : order) {
    if (static_cast<int>(out.size()) >= limit) break;
    VertexSet witness = h.edge_mask(eid);
    witness.reset(w);
    if (static_cast<int>(witness.intersect_count(part.a)) % 2 != want) continue;
    if (witness.intersects(used) || witness.intersects(target)) continue;
    std::optional<Gadget> g =
        build_parity_gadget(h, part, target, witness, t,
                            Rng::derive(seed, static_cast<std::uint64_t>(eid)),
                            used, 4);
    if (!g) continue;
    ParityAbsorber pa{w, target, witness, *g};
    std::string why;
    if (!verify_parity_absorber(h, part, pa, &why))
      throw std::logic_error("parity absorber construction failed verification: " + why);
    used |= pa.gadget.vertices().minus(target);
    out.push_back(std::move(pa));
  }
  return out;
}

}  // namespace hxt
