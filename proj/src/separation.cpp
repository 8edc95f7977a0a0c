#include "hxt/separation.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>
#include <vector>

#include "hxt/rng.hpp"

namespace hxt {

long long cut_cross_edges(const DiamondGraph& g, const VertexSet& side_a) {
  long long cross = 0;
  for (const auto& [u, v] : g.edges)
    if (side_a.test(u) != side_a.test(v)) ++cross;
  return cross;
}

namespace {

// cross / (a*b) < best.cross / (best.a * best.b), exact.
bool ratio_less(long long cross, long long ab, long long bcross, long long bab) {
  return static_cast<__int128>(cross) * bab < static_cast<__int128>(bcross) * ab;
}

struct Best {
  bool any = false;
  long long cross = 0;
  long long ab = 1;
  VertexSet side;
};

void consider(Best& best, long long cross, long long ab, const VertexSet& side) {
  if (!best.any || ratio_less(cross, ab, best.cross, best.ab)) {
    best.any = true;
    best.cross = cross;
    best.ab = ab;
    best.side = side;
  }
}

void exact_scan(const DiamondGraph& g, Best& best) {
  int n = g.n;
  VertexSet side;
  side.set(0);
  // Depth-first over vertices 1..n-1, cross count maintained incrementally.
  std::function<void(int, long long, int)> rec = [&](int v, long long cross, int size_a) {
    if (v == n) {
      if (size_a >= 1 && size_a <= n - 1)
        consider(best, cross, static_cast<long long>(size_a) * (n - size_a), side);
      return;
    }
    long long to_a = 0, to_b = 0;
    for (int u = 0; u < v; ++u) {
      if (!g.has(u, v)) continue;
      if (side.test(u))
        ++to_a;
      else
        ++to_b;
    }
    side.set(v);
    rec(v + 1, cross + to_b, size_a + 1);
    side.reset(v);
    rec(v + 1, cross + to_a, size_a);
  };
  rec(1, 0, 1);
}

void heuristic_scan(const DiamondGraph& g, Best& best, std::uint64_t seed, int restarts) {
  int n = g.n;
  for (int r = 0; r < restarts; ++r) {
    Rng rng(Rng::derive(seed, static_cast<std::uint64_t>(r)));
    VertexSet side;
    side.set(0);
    for (int v = 1; v < n; ++v)
      if (rng.bernoulli(0.5)) side.set(v);
    int size_a = static_cast<int>(side.count());
    if (size_a == n) {
      side.reset(n - 1);
      --size_a;
    }
    long long cross = cut_cross_edges(g, side);
    bool improved = true;
    while (improved) {
      improved = false;
      int pick = -1;
      long long pick_cross = 0;
      int pick_size = 0;
      for (int v = 1; v < n; ++v) {
        bool in_a = side.test(v);
        int na = (in_a ? size_a - 1 : size_a + 1);
        if (na < 1 || na > n - 1) continue;
        long long delta = 0;
        for (int u = 0; u < n; ++u) {
          if (u == v || !g.has(u, v)) continue;
          bool same = (side.test(u) == in_a);
          delta += same ? 1 : -1;  // moving v turns same-side into cross
        }
        long long nc = cross + delta;
        long long nab = static_cast<long long>(na) * (n - na);
        long long cab = static_cast<long long>(size_a) * (n - size_a);
        bool better = ratio_less(nc, nab, cross, cab);
        if (better && (pick < 0 || ratio_less(nc, nab, pick_cross,
                                              static_cast<long long>(pick_size) * (n - pick_size)))) {
          pick = v;
          pick_cross = nc;
          pick_size = na;
        }
      }
      if (pick >= 0) {
        if (side.test(pick))
          side.reset(pick);
        else
          side.set(pick);
        size_a = pick_size;
        cross = pick_cross;
        improved = true;
      }
    }
    if (cut_cross_edges(g, side) != cross) continue;  // defensive: drop stale state
    consider(best, cross, static_cast<long long>(size_a) * (n - size_a), side);
  }
}

}  // namespace

SeparationResult find_separation(const DiamondGraph& g, const Rational& mu, int exact_cap,
                                 std::uint64_t seed, int restarts) {
  if (g.n < 2) throw std::invalid_argument("separation needs at least two vertices");
  Best best;
  bool exact = g.n <= exact_cap;
  if (exact)
    exact_scan(g, best);
  else
    heuristic_scan(g, best, seed, restarts);
  if (!best.any) throw std::logic_error("separation scan produced no cut");

  SeparationResult out;
  out.exact = exact;
  out.side_a = best.side;
  out.side_b = VertexSet::full(g.n).minus(best.side);
  out.cross_edges = cut_cross_edges(g, best.side);
  if (out.cross_edges != best.cross) throw std::logic_error("cross-edge bookkeeping drifted");
  out.ratio = Rational(best.cross) / Rational(best.ab);
  out.separable = !(mu < out.ratio);
  return out;
}

}  // namespace hxt
