#include "hxt/diamonds.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_map>

namespace hxt {

namespace {

std::unordered_map<VertexSet, std::vector<int>, VertexSetHash> tip_buckets(const Hypergraph& h) {
  std::unordered_map<VertexSet, std::vector<int>, VertexSetHash> buckets;
  for (int e = 0; e < h.edge_count(); ++e) {
    const VertexSet& m = h.edge_mask(e);
    for (int v : h.edge(e)) {
      VertexSet shared = m;
      shared.reset(v);
      buckets[shared].push_back(v);
    }
  }
  return buckets;
}

}  // namespace

DiamondCounts count_diamonds(const Hypergraph& h) {
  DiamondCounts out;
  out.pair_counts.assign(static_cast<std::size_t>(h.n()),
                         std::vector<long long>(static_cast<std::size_t>(h.n()), 0));
  for (auto& [shared, tips] : tip_buckets(h)) {
    long long t = static_cast<long long>(tips.size());
    out.total += t * (t - 1) / 2;
    for (std::size_t i = 0; i < tips.size(); ++i)
      for (std::size_t j = i + 1; j < tips.size(); ++j) {
        ++out.pair_counts[static_cast<std::size_t>(tips[i])][static_cast<std::size_t>(tips[j])];
        ++out.pair_counts[static_cast<std::size_t>(tips[j])][static_cast<std::size_t>(tips[i])];
      }
  }
  return out;
}

std::vector<int> diamond_tips(const Hypergraph& h, const VertexSet& shared) {
  if (static_cast<int>(shared.count()) != h.k() - 1)
    throw std::invalid_argument("diamond core must have k-1 vertices");
  std::vector<int> tips;
  for (int v = 0; v < h.n(); ++v) {
    if (shared.test(v)) continue;
    VertexSet m = shared;
    m.set(v);
    if (h.has_edge(m)) tips.push_back(v);
  }
  return tips;
}

DiamondGraph diamond_graph(const Hypergraph& h, const Rational& gamma) {
  if (!(Rational(0) < gamma)) throw std::invalid_argument("gamma must be positive");
  DiamondGraph g;
  g.n = h.n();
  g.gamma = gamma;
  g.threshold = gamma * Rational(binomial(h.n(), h.k() - 1));
  g.adj.assign(static_cast<std::size_t>(h.n()),
               std::vector<char>(static_cast<std::size_t>(h.n()), 0));
  DiamondCounts counts = count_diamonds(h);
  for (int u = 0; u < h.n(); ++u)
    for (int v = u + 1; v < h.n(); ++v) {
      Rational c(counts.pair_counts[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)]);
      if (!(c < g.threshold)) {
        g.adj[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)] = 1;
        g.adj[static_cast<std::size_t>(v)][static_cast<std::size_t>(u)] = 1;
        g.edges.push_back({u, v});
      }
    }
  return g;
}

}  // namespace hxt
