#include "hxt/paths.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "hxt/rng.hpp"

namespace hxt {

namespace {

VertexSet path_mask(const LoosePath& p) {
  VertexSet m;
  for (const auto& e : p.edges)
    for (int v : e) m.set(v);
  return m;
}

}  // namespace

bool validate_loose_path(const Hypergraph& h, const LoosePath& p, int x1, int x2,
                         const VertexSet& forbidden, std::string* why) {
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  if (p.edges.empty()) return fail("path has no edges");
  if (x1 == x2) return fail("anchors coincide");
  int len = static_cast<int>(p.edges.size());
  if (static_cast<int>(p.anchors.size()) != len + 1)
    return fail("anchor list does not match edge count");
  if (p.anchors.front() != x1 || p.anchors.back() != x2)
    return fail("anchor endpoints disagree with x1/x2");

  std::vector<VertexSet> masks;
  for (const auto& e : p.edges) {
    if (static_cast<int>(e.size()) != h.k()) return fail("edge arity mismatch");
    VertexSet m = VertexSet::from_vector(e);
    if (!h.has_edge(m)) return fail("edge not present in host");
    masks.push_back(m);
  }
  for (int i = 0; i < len; ++i) {
    if (!masks[i].test(p.anchors[i]) || !masks[i].test(p.anchors[i + 1]))
      return fail("edge misses its anchors");
    for (int j = i + 1; j < len; ++j) {
      int shared = masks[i].intersect_count(masks[j]);
      if (j == i + 1) {
        if (shared != 1 || !masks[i].test(p.anchors[i + 1]) || !masks[j].test(p.anchors[i + 1]))
          return fail("consecutive edges must share exactly the anchor");
      } else if (shared != 0) {
        return fail("non-consecutive edges intersect");
      }
    }
  }
  // x1 and x2 appear only at the ends.
  for (int i = 1; i < len; ++i)
    if (masks[i].test(x1)) return fail("x1 re-enters the path");
  for (int i = 0; i + 1 < len; ++i)
    if (masks[i].test(x2)) return fail("x2 appears before the last edge");

  VertexSet interior = path_mask(p);
  interior.reset(x1);
  interior.reset(x2);
  if (interior.intersects(forbidden)) return fail("interior touches a forbidden vertex");
  if (why) why->clear();
  return true;
}

namespace {

void paths_len1(const Hypergraph& h, int x1, int x2, const VertexSet& forbidden,
                int max_results, std::vector<LoosePath>& out) {
  for (int id : h.incident(x1)) {
    const VertexSet& m = h.edge_mask(id);
    if (!m.test(x2)) continue;
    VertexSet interior = m;
    interior.reset(x1);
    interior.reset(x2);
    if (interior.intersects(forbidden)) continue;
    out.push_back({{x1, x2}, {h.edge(id)}});
    if (static_cast<int>(out.size()) >= max_results) return;
  }
}

void paths_len2(const Hypergraph& h, int x1, int x2, const VertexSet& forbidden,
                int max_results, std::vector<LoosePath>& out) {
  for (int id1 : h.incident(x1)) {
    const VertexSet& m1 = h.edge_mask(id1);
    if (m1.test(x2)) continue;
    VertexSet in1 = m1;
    in1.reset(x1);
    if (in1.intersects(forbidden)) continue;
    for (int id2 : h.incident(x2)) {
      const VertexSet& m2 = h.edge_mask(id2);
      if (m2.test(x1)) continue;
      VertexSet shared = m1 & m2;
      if (shared.count() != 1) continue;
      int w = shared.lowest();
      VertexSet in2 = m2;
      in2.reset(x2);
      if (in2.intersects(forbidden)) continue;
      out.push_back({{x1, w, x2}, {h.edge(id1), h.edge(id2)}});
      if (static_cast<int>(out.size()) >= max_results) return;
    }
  }
}

void paths_random(const Hypergraph& h, int x1, int x2, int len, const VertexSet& forbidden,
                  int max_results, std::uint64_t seed, int restarts,
                  std::vector<LoosePath>& out) {
  std::set<std::vector<std::vector<int>>> seen;
  for (int attempt = 0; attempt < restarts; ++attempt) {
    Rng rng(Rng::derive(seed, static_cast<std::uint64_t>(attempt)));
    LoosePath p;
    p.anchors.push_back(x1);
    VertexSet used = forbidden;
    used.set(x1);
    used.set(x2);
    int a = x1;
    bool ok = true;
    for (int step = 0; step < len && ok; ++step) {
      bool last = (step == len - 1);
      std::vector<int> candidates;
      for (int id : h.incident(a)) {
        const VertexSet& m = h.edge_mask(id);
        if (last) {
          if (!m.test(x2)) continue;
          VertexSet rest = m;
          rest.reset(a);
          rest.reset(x2);
          if (rest.intersects(used)) continue;
        } else {
          VertexSet rest = m;
          rest.reset(a);
          if (rest.intersects(used)) continue;
        }
        candidates.push_back(id);
      }
      if (candidates.empty()) {
        ok = false;
        break;
      }
      int id = candidates[static_cast<std::size_t>(rng.below(candidates.size()))];
      const VertexSet& m = h.edge_mask(id);
      p.edges.push_back(h.edge(id));
      if (last) {
        p.anchors.push_back(x2);
      } else {
        std::vector<int> nexts;
        m.for_each([&](int v) {
          if (v != a && v != x2) nexts.push_back(v);
        });
        int w = nexts[static_cast<std::size_t>(rng.below(nexts.size()))];
        p.anchors.push_back(w);
        m.for_each([&](int v) { used.set(v); });
        a = w;
      }
    }
    if (!ok) continue;
    if (!validate_loose_path(h, p, x1, x2, forbidden)) continue;
    if (seen.insert(p.edges).second) {
      out.push_back(p);
      if (static_cast<int>(out.size()) >= max_results) return;
    }
  }
}

}  // namespace

std::vector<LoosePath> loose_paths(const Hypergraph& h, int x1, int x2, int len,
                                   const VertexSet& forbidden, int max_results,
                                   std::uint64_t seed, int restarts) {
  if (len < 1) throw std::invalid_argument("path length must be positive");
  if (x1 < 0 || x1 >= h.n() || x2 < 0 || x2 >= h.n())
    throw std::invalid_argument("path anchor out of range");
  if (x1 == x2) throw std::invalid_argument("path anchors must differ");
  if (forbidden.test(x1) || forbidden.test(x2))
    throw std::invalid_argument("anchors may not be forbidden");
  std::vector<LoosePath> out;
  if (len == 1)
    paths_len1(h, x1, x2, forbidden, max_results, out);
  else if (len == 2)
    paths_len2(h, x1, x2, forbidden, max_results, out);
  else
    paths_random(h, x1, x2, len, forbidden, max_results, seed, restarts, out);
  return out;
}

ReservoirResult select_reservoir(const Hypergraph& h, double frac, int d, std::uint64_t seed,
                                 int floor_paths, int attempt_cap) {
  if (frac <= 0.0 || frac > 1.0) throw std::invalid_argument("reservoir fraction out of (0,1]");
  if (d < 1 || d >= h.k()) throw std::invalid_argument("degree parameter out of range");
  if (floor_paths < 1) throw std::invalid_argument("witness floor must be positive");

  int len = (d == 1) ? 2 : 1;
  int interior_need = len * (h.k() - 1) - 1;  // interior vertices of one path
  int r = std::max(static_cast<int>(std::ceil(frac * h.n())), interior_need);
  r = std::min(r, h.n());

  ReservoirResult result;
  std::vector<int> ids(static_cast<std::size_t>(h.n()));
  for (int i = 0; i < h.n(); ++i) ids[static_cast<std::size_t>(i)] = i;

  for (int attempt = 0; attempt < attempt_cap; ++attempt) {
    result.attempts = attempt + 1;
    Rng rng(Rng::derive(seed, static_cast<std::uint64_t>(attempt)));
    std::vector<int> pool = ids;
    rng.shuffle(pool);
    pool.resize(static_cast<std::size_t>(r));
    std::sort(pool.begin(), pool.end());
    VertexSet rset = VertexSet::from_vector(pool);

    Reservoir res;
    res.vertices = rset;
    res.path_length = len;
    res.witness_counts.assign(static_cast<std::size_t>(h.n()),
                              std::vector<long long>(static_cast<std::size_t>(h.n()), 0));
    long long worst = -1;
    bool ok = true;
    for (int u = 0; u < h.n() && ok; ++u) {
      if (rset.test(u)) continue;
      for (int v = u + 1; v < h.n(); ++v) {
        if (rset.test(v)) continue;
        // Interiors must stay inside the reservoir, so forbid its complement.
        VertexSet forbidden = VertexSet::full(h.n()).minus(rset);
        forbidden.reset(u);
        forbidden.reset(v);
        auto paths = loose_paths(h, u, v, len, forbidden);
        long long c = static_cast<long long>(paths.size());
        res.witness_counts[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)] = c;
        res.witness_counts[static_cast<std::size_t>(v)][static_cast<std::size_t>(u)] = c;
        if (worst < 0 || c < worst) worst = c;
        if (c < floor_paths) {
          ok = false;
          break;
        }
      }
    }
    if (ok) {
      res.min_witness = worst;
      res.attempts_used = attempt + 1;
      result.reservoir = res;
      return result;
    }
  }
  std::ostringstream why;
  why << "no reservoir of size " << r << " verified after " << attempt_cap << " attempts";
  result.error = why.str();
  return result;
}

}  // namespace hxt
