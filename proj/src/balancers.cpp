#include "hxt/balancers.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace hxt {

VertexSet ProtoBalancer::edge(int i) const {
  VertexSet e = base | triples[static_cast<std::size_t>(i)];
  return e;
}

VertexSet ProtoBalancer::vertices() const {
  return base | triples[0] | triples[1] | triples[2];
}

bool verify_proto_balancer(const Hypergraph& h, const Bipartition& part,
                           const ProtoBalancer& pb, std::string* why) {
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  if (static_cast<int>(pb.base.count()) != h.k() - 3)
    return fail("base must have k-3 vertices");
  const VertexSet& heavy = pb.swapped ? part.b : part.a;
  for (int i = 0; i < 3; ++i) {
    const VertexSet& x = pb.triples[static_cast<std::size_t>(i)];
    if (x.count() != 3) return fail("triple has wrong size");
    if (x.intersects(pb.base)) return fail("triple meets the base");
    if (!h.has_edge(pb.edge(i))) return fail("edge " + std::to_string(i) + " missing from host");
  }
  const VertexSet& x1 = pb.triples[0];
  const VertexSet& x2 = pb.triples[1];
  const VertexSet& x3 = pb.triples[2];
  if (x1.intersect_count(heavy) != 2) return fail("first triple heavy-count is not 2");
  if (x2.intersect_count(heavy) != 2) return fail("second triple heavy-count is not 2");
  if (x1.intersect_count(x2) != 2) return fail("first two triples must share 2 vertices");
  if ((x1 & x2).intersect_count(heavy) != 2) return fail("shared pair must lie in the heavy side");
  if (x3.intersect_count(heavy) != 0) return fail("third triple must avoid the heavy side");
  if (x1.intersect_count(x3) != 1) return fail("first and third triples must share 1 vertex");
  if (x2.intersect_count(x3) != 1) return fail("second and third triples must share 1 vertex");
  // Forced consequence of the pattern, asserted for safety.
  int e1 = static_cast<int>(pb.edge(0).intersect_count(heavy));
  int e2 = static_cast<int>(pb.edge(1).intersect_count(heavy));
  int e3 = static_cast<int>(pb.edge(2).intersect_count(heavy));
  if (e1 != e2 || e1 != e3 + 2) return fail("edge heavy-counts break the derived identity");
  return true;
}

namespace {

void scan_bases(const Hypergraph& h, int need, std::vector<VertexSet>& out) {
  std::vector<int> pick;
  std::vector<int> stack;
  // Ascending (k-3)-subsets of the vertex range.
  std::function<void(int)> rec = [&](int from) {
    if (static_cast<int>(pick.size()) == need) {
      out.push_back(VertexSet::from_vector(pick));
      return;
    }
    for (int v = from; v < h.n(); ++v) {
      pick.push_back(v);
      rec(v + 1);
      pick.pop_back();
    }
  };
  rec(0);
}

}  // namespace

ProtoSearch find_proto_balancers(const Hypergraph& h, const Bipartition& part,
                                 int limit, std::uint64_t node_budget) {
  ProtoSearch res;
  if (h.k() < 3) {
    res.exhaustive = true;
    return res;
  }
  std::vector<VertexSet> bases;
  if (h.k() == 3) {
    bases.push_back(VertexSet());
  } else {
    scan_bases(h, h.k() - 3, bases);
  }
  std::uint64_t nodes = 0;
  bool truncated = false;
  auto tick = [&]() {
    if (++nodes > node_budget) truncated = true;
    return !truncated;
  };
  for (const VertexSet& base : bases) {
    if (truncated) break;
    for (int orient = 0; orient < 2 && !truncated; ++orient) {
      bool swapped = orient == 1;
      const VertexSet& heavy = swapped ? part.b : part.a;
      const VertexSet& light = swapped ? part.a : part.b;
      std::vector<int> hs, ls;
      for (int v = 0; v < h.n(); ++v) {
        if (base.test(v)) continue;
        if (heavy.test(v)) hs.push_back(v);
        if (light.test(v)) ls.push_back(v);
      }
      // The pattern forces the shape {p,p',q1}, {p,p',q2}, {q1,q2,q3} with
      // p,p' in the heavy side and q1,q2,q3 in the light side, so the scan
      // over that shape is exhaustive.
      for (std::size_t pi = 0; pi < hs.size() && !truncated; ++pi) {
        for (std::size_t pj = pi + 1; pj < hs.size() && !truncated; ++pj) {
          for (int q1 : ls) {
            if (truncated) break;
            VertexSet t1 = VertexSet::of({hs[pi], hs[pj], q1});
            if (!tick()) break;
            if (!h.has_edge(base | t1)) continue;
            for (int q2 : ls) {
              if (truncated) break;
              if (q2 == q1) continue;
              VertexSet t2 = VertexSet::of({hs[pi], hs[pj], q2});
              if (!tick()) break;
              if (!h.has_edge(base | t2)) continue;
              for (int q3 : ls) {
                if (q3 == q1 || q3 == q2) continue;
                if (!tick()) break;
                VertexSet t3 = VertexSet::of({q1, q2, q3});
                if (!h.has_edge(base | t3)) continue;
                ProtoBalancer pb{base, {t1, t2, t3}, swapped};
                std::string why;
                if (!verify_proto_balancer(h, part, pb, &why))
                  throw std::logic_error("proto-balancer scan produced an invalid pattern: " + why);
                res.found.push_back(pb);
                if (static_cast<int>(res.found.size()) >= limit) {
                  truncated = true;
                  break;
                }
              }
            }
          }
        }
      }
    }
  }
  res.nodes = nodes;
  res.exhaustive = !truncated;
  return res;
}

VertexSet Balancer::interior1(int i) const {
  VertexSet s = f1[static_cast<std::size_t>(i)];
  s.reset(x1);
  s.reset(y[static_cast<std::size_t>(i)]);
  return s;
}

VertexSet Balancer::interior2(int i) const {
  VertexSet s = f2[static_cast<std::size_t>(i)];
  s.reset(x2);
  s.reset(y[static_cast<std::size_t>(i)]);
  return s;
}

VertexSet Balancer::half_vertices(int side) const {
  VertexSet s;
  const auto& fs = side == 1 ? f1 : f2;
  for (const VertexSet& e : fs) s |= e;
  return s;
}

VertexSet Balancer::vertices() const { return half_vertices(1) | half_vertices(2); }

bool verify_balancer(const Hypergraph& h, const Bipartition& part,
                     const Balancer& b, std::string* why) {
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  int t = b.t();
  if (b.t_a < 0 || b.t_b < 0 || t < 1) return fail("leaf counts malformed");
  if (static_cast<int>(b.y.size()) != t ||
      static_cast<int>(b.f1.size()) != t || static_cast<int>(b.f2.size()) != t)
    return fail("arrays disagree with t");
  if (b.x1 < 0 || b.x2 < 0 || b.x1 == b.x2) return fail("anchors malformed");
  if (!part.a.test(b.x1)) return fail("first anchor must lie in side A");
  if (!part.b.test(b.x2)) return fail("second anchor must lie in side B");

  VertexSet anchors_leaves;
  anchors_leaves.set(b.x1);
  anchors_leaves.set(b.x2);
  for (int i = 0; i < t; ++i) {
    int yi = b.y[static_cast<std::size_t>(i)];
    if (yi < 0 || yi >= h.n() || anchors_leaves.test(yi)) return fail("leaf repeats a used vertex");
    anchors_leaves.set(yi);
    bool want_a = i < b.t_a;
    if (want_a != part.a.test(yi)) return fail("leaf " + std::to_string(i) + " sits on the wrong side");
  }
  VertexSet interiors_seen;
  for (int i = 0; i < t; ++i) {
    const VertexSet& e1 = b.f1[static_cast<std::size_t>(i)];
    const VertexSet& e2 = b.f2[static_cast<std::size_t>(i)];
    int yi = b.y[static_cast<std::size_t>(i)];
    if (!h.has_edge(e1)) return fail("x1-side edge missing from host");
    if (!h.has_edge(e2)) return fail("x2-side edge missing from host");
    if (!e1.test(b.x1) || !e1.test(yi) || e1.test(b.x2))
      return fail("x1-side edge must contain x1 and its leaf only");
    if (!e2.test(b.x2) || !e2.test(yi) || e2.test(b.x1))
      return fail("x2-side edge must contain x2 and its leaf only");
    VertexSet i1 = b.interior1(i);
    VertexSet i2 = b.interior2(i);
    if (static_cast<int>(i1.count()) != h.k() - 2 || static_cast<int>(i2.count()) != h.k() - 2)
      return fail("interior sizes wrong");
    if (i1.intersects(anchors_leaves) || i2.intersects(anchors_leaves))
      return fail("interiors touch anchors or leaves");
    if (i1.intersects(interiors_seen) || i2.intersects(interiors_seen) || i1.intersects(i2))
      return fail("interiors are not pairwise disjoint");
    interiors_seen |= i1;
    interiors_seen |= i2;
    int b1 = static_cast<int>(i1.intersect_count(part.b));
    int b2 = static_cast<int>(i2.intersect_count(part.b));
    if (i < b.t_a) {
      if (b1 != b2 + 1) return fail("A-leaf interior B-counts must differ by +1");
    } else {
      if (b1 != b2 - 1) return fail("B-leaf interior B-counts must differ by -1");
    }
  }
  long long hb1 = static_cast<long long>(b.half_vertices(1).intersect_count(part.b));
  long long hb2 = static_cast<long long>(b.half_vertices(2).intersect_count(part.b));
  if (hb2 - hb1 != b.capacity()) return fail("capacity identity violated");
  return true;
}

namespace {

struct BalancerSearch {
  const Hypergraph& h;
  const Bipartition& part;
  int t_a, t_b, limit;
  const VertexSet& forbidden;
  std::uint64_t budget;
  std::uint64_t nodes = 0;
  Rng rng;
  std::vector<Balancer> out;

  bool done() const { return static_cast<int>(out.size()) >= limit || nodes > budget; }

  // Candidate edges through {anchor, leaf} whose interiors avoid `used` and
  // have the requested B-count (-1 for any).
  std::vector<VertexSet> edge_options(int anchor, int leaf, const VertexSet& used,
                                      int other_anchor, int want_b) {
    std::vector<VertexSet> opts;
    for (int eid : h.incident(anchor)) {
      const VertexSet& e = h.edge_mask(eid);
      if (!e.test(leaf) || e.test(other_anchor)) continue;
      VertexSet intr = e;
      intr.reset(anchor);
      intr.reset(leaf);
      if (intr.intersects(used)) continue;
      if (want_b >= 0 && static_cast<int>(intr.intersect_count(part.b)) != want_b) continue;
      opts.push_back(e);
    }
    rng.shuffle(opts);
    return opts;
  }

  void rec(Balancer& b, int i, VertexSet used) {
    if (done()) return;
    ++nodes;
    int t = t_a + t_b;
    if (i == t) {
      std::string why;
      if (!verify_balancer(h, part, b, &why))
        throw std::logic_error("balancer search assembled an invalid structure: " + why);
      out.push_back(b);
      return;
    }
    bool leaf_a = i < t_a;
    std::vector<int> leaves;
    const VertexSet& side = leaf_a ? part.a : part.b;
    for (int v = 0; v < h.n(); ++v)
      if (side.test(v) && !used.test(v)) leaves.push_back(v);
    rng.shuffle(leaves);
    for (int yi : leaves) {
      VertexSet used_y = used;
      used_y.set(yi);
      for (const VertexSet& e1 : edge_options(b.x1, yi, used_y, b.x2, -1)) {
        VertexSet i1 = e1;
        i1.reset(b.x1);
        i1.reset(yi);
        int want = static_cast<int>(i1.intersect_count(part.b)) + (leaf_a ? -1 : 1);
        if (want < 0 || want > h.k() - 2) continue;
        VertexSet used_e1 = used_y | i1;
        for (const VertexSet& e2 : edge_options(b.x2, yi, used_e1, b.x1, want)) {
          VertexSet i2 = e2;
          i2.reset(b.x2);
          i2.reset(yi);
          b.y.push_back(yi);
          b.f1.push_back(e1);
          b.f2.push_back(e2);
          rec(b, i + 1, used_e1 | i2);
          b.y.pop_back();
          b.f1.pop_back();
          b.f2.pop_back();
          if (done()) return;
        }
        if (done()) return;
      }
      if (done()) return;
    }
  }
};

}  // namespace

std::vector<Balancer> find_balancers(const Hypergraph& h, const Bipartition& part,
                                     int t_a, int t_b, int limit,
                                     std::uint64_t seed, const VertexSet& forbidden,
                                     std::uint64_t node_budget) {
  std::vector<Balancer> out;
  if (t_a < 0 || t_b < 0 || t_a + t_b < 1 || limit <= 0) return out;
  BalancerSearch s{h, part, t_a, t_b, limit, forbidden, node_budget,
                   0,  Rng(seed), {}};
  std::vector<int> a_verts, b_verts;
  for (int v = 0; v < h.n(); ++v) {
    if (forbidden.test(v)) continue;
    if (part.a.test(v)) a_verts.push_back(v);
    if (part.b.test(v)) b_verts.push_back(v);
  }
  s.rng.shuffle(a_verts);
  s.rng.shuffle(b_verts);
  for (int x1 : a_verts) {
    for (int x2 : b_verts) {
      if (s.done()) break;
      Balancer b;
      b.t_a = t_a;
      b.t_b = t_b;
      b.x1 = x1;
      b.x2 = x2;
      VertexSet used = forbidden;
      used.set(x1);
      used.set(x2);
      s.rec(b, 0, used);
    }
    if (s.done()) break;
  }
  return s.out;
}

}  // namespace hxt
