#include "hxt/blowup.hpp"

#include <algorithm>
#include <stdexcept>

namespace hxt {

int Blowup::cluster_of(int result_vertex) const {
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    const auto& cl = clusters[c];
    if (!cl.empty() && result_vertex >= cl.front() && result_vertex <= cl.back())
      return static_cast<int>(c);
  }
  throw std::invalid_argument("vertex outside every cluster");
}

namespace {

// Walk all transversals of the chosen clusters, one vertex per cluster.
template <typename F>
void for_each_transversal(const std::vector<std::vector<int>>& clusters, F&& f) {
  std::vector<std::size_t> idx(clusters.size(), 0);
  std::vector<int> cur(clusters.size());
  while (true) {
    for (std::size_t i = 0; i < clusters.size(); ++i) cur[i] = clusters[i][idx[i]];
    f(cur);
    std::size_t i = clusters.size();
    while (i > 0) {
      --i;
      if (++idx[i] < clusters[i].size()) break;
      idx[i] = 0;
      if (i == 0) return;
    }
  }
}

}  // namespace

Blowup blow_up(const Hypergraph& h, const std::vector<int>& sizes) {
  if (static_cast<int>(sizes.size()) != h.n())
    throw std::invalid_argument("one cluster size per base vertex required");
  long long total = 0;
  for (int s : sizes) {
    if (s < 1) throw std::invalid_argument("cluster sizes must be positive");
    total += s;
  }
  if (total > kMaxVertices) throw std::invalid_argument("blow-up exceeds vertex cap");

  std::vector<std::vector<int>> clusters(static_cast<std::size_t>(h.n()));
  int next = 0;
  for (int v = 0; v < h.n(); ++v)
    for (int i = 0; i < sizes[static_cast<std::size_t>(v)]; ++i)
      clusters[static_cast<std::size_t>(v)].push_back(next++);

  Hypergraph result(static_cast<int>(total), h.k());
  for (int id = 0; id < h.edge_count(); ++id) {
    std::vector<std::vector<int>> edge_clusters;
    for (int v : h.edge(id)) edge_clusters.push_back(clusters[static_cast<std::size_t>(v)]);
    for_each_transversal(edge_clusters,
                         [&](const std::vector<int>& t) { result.add_edge(t); });
  }
  return Blowup{h, std::move(clusters), std::move(result)};
}

Hypergraph collapse(const Blowup& b) {
  std::vector<int> owner(static_cast<std::size_t>(b.result.n()), -1);
  for (std::size_t c = 0; c < b.clusters.size(); ++c)
    for (int v : b.clusters[c]) owner[static_cast<std::size_t>(v)] = static_cast<int>(c);

  Hypergraph out(b.base.n(), b.base.k());
  for (int id = 0; id < b.result.edge_count(); ++id) {
    std::vector<int> q;
    for (int v : b.result.edge(id)) q.push_back(owner[static_cast<std::size_t>(v)]);
    std::sort(q.begin(), q.end());
    q.erase(std::unique(q.begin(), q.end()), q.end());
    if (static_cast<int>(q.size()) != b.base.k())
      throw std::logic_error("blow-up edge does not cross k distinct clusters");
    VertexSet mask = VertexSet::from_vector(q);
    if (!out.has_edge(mask)) out.add_edge(q);
  }
  return out;
}

namespace {

struct BlowupCounter {
  const Hypergraph& h;
  int m;
  long long count = 0;
  std::vector<std::vector<int>> chosen;
  VertexSet used;

  explicit BlowupCounter(const Hypergraph& hh, int mm) : h(hh), m(mm) {}

  // Necessary degree condition for a partial transversal to still extend.
  bool viable(const std::vector<int>& partial, int clusters_left) const {
    VertexSet s = VertexSet::from_vector(partial);
    if (clusters_left == 0) return h.has_edge(s);
    long long need = 1;
    for (int i = 0; i < clusters_left; ++i) need *= m;
    return h.degree(s) >= need;
  }

  bool check_new_cluster() {
    int j = static_cast<int>(chosen.size());
    int left = h.k() - j;
    std::vector<std::size_t> idx(static_cast<std::size_t>(j), 0);
    std::vector<int> cur(static_cast<std::size_t>(j));
    while (true) {
      for (int i = 0; i < j; ++i)
        cur[static_cast<std::size_t>(i)] =
            chosen[static_cast<std::size_t>(i)][idx[static_cast<std::size_t>(i)]];
      if (!viable(cur, left)) return false;
      int i = j;
      while (i > 0) {
        --i;
        if (++idx[static_cast<std::size_t>(i)] < chosen[static_cast<std::size_t>(i)].size())
          break;
        idx[static_cast<std::size_t>(i)] = 0;
        if (i == 0) return true;
      }
    }
  }

  // Clusters are canonicalized by strictly increasing minimum vertex.
  void extend_cluster(std::vector<int>& cluster, int next_min) {
    if (static_cast<int>(cluster.size()) == m) {
      chosen.push_back(cluster);
      if (check_new_cluster()) {
        if (static_cast<int>(chosen.size()) == h.k())
          ++count;
        else
          recurse_clusters();
      }
      chosen.pop_back();
      return;
    }
    for (int v = next_min; v < h.n(); ++v) {
      if (used.test(v)) continue;
      used.set(v);
      cluster.push_back(v);
      extend_cluster(cluster, v + 1);
      cluster.pop_back();
      used.reset(v);
    }
  }

  void recurse_clusters() {
    int start = 0;
    if (!chosen.empty()) start = chosen.back().front() + 1;
    for (int first = start; first < h.n(); ++first) {
      if (used.test(first)) continue;
      used.set(first);
      std::vector<int> cluster{first};
      extend_cluster(cluster, first + 1);
      used.reset(first);
    }
  }
};

}  // namespace

long long count_edge_blowups(const Hypergraph& h, int m, int guard_km) {
  if (m < 1) throw std::invalid_argument("blow-up order must be positive");
  if (h.k() * m > guard_km)
    throw std::invalid_argument("k*m exceeds the exact-counting guard");
  if (m == 1) return h.edge_count();
  BlowupCounter counter(h, m);
  counter.recurse_clusters();
  return counter.count;
}

}  // namespace hxt
