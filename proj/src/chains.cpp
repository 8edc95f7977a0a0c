#include "hxt/chains.hpp"

#include <algorithm>
#include <set>

namespace hxt {

VertexSet Diamond::edge_u() const {
  VertexSet e = shared;
  e.set(tip_u);
  return e;
}

VertexSet Diamond::edge_v() const {
  VertexSet e = shared;
  e.set(tip_v);
  return e;
}

VertexSet Diamond::vertices() const {
  VertexSet s = shared;
  s.set(tip_u);
  s.set(tip_v);
  return s;
}

std::vector<Diamond> diamonds_between(const Hypergraph& h, int u, int v) {
  std::vector<Diamond> out;
  if (u == v) return out;
  std::set<std::vector<int>> seen;
  for (int eid : h.incident(u)) {
    const VertexSet& mask = h.edge_mask(eid);
    if (mask.test(v)) continue;
    VertexSet core = mask;
    core.reset(u);
    VertexSet other = core;
    other.set(v);
    if (!h.has_edge(other)) continue;
    std::vector<int> key = core.to_vector();
    if (!seen.insert(key).second) continue;
    out.push_back(Diamond{u, v, core});
  }
  std::sort(out.begin(), out.end(), [](const Diamond& a, const Diamond& b) {
    return a.shared.to_vector() < b.shared.to_vector();
  });
  return out;
}

bool verify_diamond(const Hypergraph& h, const Diamond& d, std::string* why) {
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  if (d.tip_u < 0 || d.tip_u >= h.n() || d.tip_v < 0 || d.tip_v >= h.n())
    return fail("tip out of range");
  if (d.tip_u == d.tip_v) return fail("tips coincide");
  if (d.shared.count() != h.k() - 1) return fail("shared set has wrong size");
  if (d.shared.test(d.tip_u) || d.shared.test(d.tip_v))
    return fail("tip inside shared set");
  if (!h.has_edge(d.edge_u())) return fail("u-side edge missing from host");
  if (!h.has_edge(d.edge_v())) return fail("v-side edge missing from host");
  return true;
}

std::vector<VertexSet> DiamondChain::half_u() const {
  std::vector<VertexSet> out;
  out.reserve(diamonds.size());
  for (const Diamond& d : diamonds) out.push_back(d.edge_u());
  return out;
}

std::vector<VertexSet> DiamondChain::half_v() const {
  std::vector<VertexSet> out;
  out.reserve(diamonds.size());
  for (const Diamond& d : diamonds) out.push_back(d.edge_v());
  return out;
}

VertexSet DiamondChain::vertices() const {
  VertexSet s;
  for (const Diamond& d : diamonds) s |= d.vertices();
  return s;
}

bool verify_chain(const Hypergraph& h, const DiamondChain& c, std::string* why) {
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  if (c.diamonds.empty()) return fail("chain has no diamonds");
  if (c.waypoints.size() != c.diamonds.size() + 1)
    return fail("waypoint count does not match diamond count");
  std::set<int> distinct(c.waypoints.begin(), c.waypoints.end());
  if (distinct.size() != c.waypoints.size()) return fail("repeated waypoint");
  for (std::size_t i = 0; i < c.diamonds.size(); ++i) {
    const Diamond& d = c.diamonds[i];
    std::string sub;
    if (!verify_diamond(h, d, &sub)) return fail("diamond " + std::to_string(i) + ": " + sub);
    if (d.tip_u != c.waypoints[i] || d.tip_v != c.waypoints[i + 1])
      return fail("diamond " + std::to_string(i) + " tips disagree with waypoints");
  }
  // Disjointness: consecutive diamonds overlap in exactly the waypoint
  // between them, all other pairs not at all.
  for (std::size_t i = 0; i < c.diamonds.size(); ++i) {
    for (std::size_t j = i + 1; j < c.diamonds.size(); ++j) {
      VertexSet common = c.diamonds[i].vertices() & c.diamonds[j].vertices();
      if (j == i + 1) {
        if (common.count() != 1 || !common.test(c.waypoints[j]))
          return fail("consecutive diamonds must meet exactly at the shared waypoint");
      } else if (!common.empty()) {
        return fail("non-consecutive diamonds intersect");
      }
    }
  }
  return true;
}

namespace {

struct ChainDfs {
  const Hypergraph& h;
  int target;
  int want_len;
  int limit;
  const VertexSet& forbidden;
  std::uint64_t budget;
  std::uint64_t& nodes;
  bool& truncated;
  std::vector<DiamondChain>& out;
  std::vector<int> waypoints;
  std::vector<Diamond> picked;
  VertexSet used;  // every vertex of every placed diamond, plus both endpoints

  bool full() const { return limit >= 0 && static_cast<int>(out.size()) >= limit; }

  void run(int from) {
    if (full() || truncated) return;
    if (++nodes > budget) {
      truncated = true;
      return;
    }
    int depth = static_cast<int>(picked.size());
    bool last = depth + 1 == want_len;
    // Candidate next waypoints: the fixed target on the last step, otherwise
    // any unused, unforbidden vertex.
    std::vector<int> cands;
    if (last) {
      cands.push_back(target);
    } else {
      for (int y = 0; y < h.n(); ++y)
        if (!used.test(y) && !forbidden.test(y)) cands.push_back(y);
    }
    for (int y : cands) {
      for (const Diamond& d : diamonds_between(h, from, y)) {
        if (d.shared.intersects(used) || d.shared.intersects(forbidden)) continue;
        picked.push_back(d);
        waypoints.push_back(y);
        VertexSet saved = used;
        used |= d.shared;
        used.set(y);
        if (last) {
          out.push_back(DiamondChain{waypoints, picked});
        } else {
          run(y);
        }
        used = saved;
        waypoints.pop_back();
        picked.pop_back();
        if (full() || truncated) return;
      }
    }
  }
};

}  // namespace

ChainSearch find_diamond_chains(const Hypergraph& h, int u, int v, int max_len,
                                int limit, const VertexSet& forbidden,
                                std::uint64_t node_budget) {
  ChainSearch res;
  if (u == v || u < 0 || v < 0 || u >= h.n() || v >= h.n() || max_len < 1) {
    res.exhaustive = true;
    return res;
  }
  bool truncated = false;
  for (int len = 1; len <= max_len && !truncated; ++len) {
    ChainDfs dfs{h,        v,       len,   limit, forbidden, node_budget,
                 res.nodes, truncated, res.chains, {},    {},        VertexSet()};
    dfs.waypoints.push_back(u);
    dfs.used.set(u);
    dfs.used.set(v);
    dfs.run(u);
    if (dfs.full()) truncated = true;
  }
  res.exhaustive = !truncated;
  return res;
}

namespace {

bool place_pairs(const Hypergraph& h,
                 const std::vector<std::pair<int, int>>& pairs, std::size_t idx,
                 int max_len, int per_pair_limit, std::uint64_t node_budget,
                 VertexSet blocked, std::vector<DiamondChain>& acc) {
  if (idx == pairs.size()) return true;
  auto [a, b] = pairs[idx];
  // The chain may touch its own endpoints even though previous chains'
  // endpoints are blocked for interiors.
  VertexSet local = blocked;
  local.reset(a);
  local.reset(b);
  ChainSearch found =
      find_diamond_chains(h, a, b, max_len, per_pair_limit, local, node_budget);
  for (const DiamondChain& c : found.chains) {
    VertexSet next = blocked | c.vertices();
    acc.push_back(c);
    if (place_pairs(h, pairs, idx + 1, max_len, per_pair_limit, node_budget,
                    next, acc))
      return true;
    acc.pop_back();
  }
  return false;
}

}  // namespace

std::optional<std::vector<DiamondChain>> find_disjoint_chains(
    const Hypergraph& h, const std::vector<std::pair<int, int>>& pairs,
    int max_len, const VertexSet& forbidden, int per_pair_limit,
    std::uint64_t node_budget) {
  std::vector<DiamondChain> acc;
  VertexSet blocked = forbidden;
  for (auto [a, b] : pairs) {
    blocked.set(a);
    blocked.set(b);
  }
  if (place_pairs(h, pairs, 0, max_len, per_pair_limit, node_budget, blocked, acc))
    return acc;
  return std::nullopt;
}

}  // namespace hxt
