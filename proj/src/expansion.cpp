#include "hxt/expansion.hpp"

#include <algorithm>
#include <ostream>
#include <queue>
#include <stdexcept>

namespace hxt {

int ExpansionTree::base_degree(int v) const {
  int d = 0;
  for (const auto& [a, b] : base_edges)
    if (a == v || b == v) ++d;
  return d;
}

int expansion_order(int n_base, int k) {
  if (n_base < 1) throw std::invalid_argument("base tree needs a vertex");
  if (k < 2) throw std::invalid_argument("uniformity must be at least 2");
  return n_base + (n_base - 1) * (k - 2);
}

ExpansionTree expand_tree(const Tree& t, int k) {
  if (k < 2) throw std::invalid_argument("uniformity must be at least 2");
  int N = expansion_order(t.n(), k);
  if (N > kMaxVertices) throw std::invalid_argument("expansion exceeds the vertex capacity");
  ExpansionTree x;
  x.k = k;
  x.n_base = t.n();
  x.base_edges = t.edges();
  x.target = Hypergraph(N, k);
  int next = t.n();
  for (const auto& [a, b] : x.base_edges) {
    std::vector<int> edge = {a, b};
    std::vector<int> block;
    for (int j = 0; j < k - 2; ++j) block.push_back(next++);
    edge.insert(edge.end(), block.begin(), block.end());
    std::sort(edge.begin(), edge.end());
    x.target.add_edge(edge);
    x.fresh.push_back(std::move(block));
  }
  return x;
}

Hypergraph loose_cycle(int m, int k) {
  if (m < 3) throw std::invalid_argument("loose cycles need at least three edges");
  if (k < 2) throw std::invalid_argument("uniformity must be at least 2");
  int N = m * (k - 1);
  if (N > kMaxVertices) throw std::invalid_argument("cycle exceeds the vertex capacity");
  Hypergraph h(N, k);
  for (int i = 0; i < m; ++i) {
    std::vector<int> edge = {i * (k - 1), ((i + 1) % m) * (k - 1)};
    for (int j = 1; j <= k - 2; ++j) edge.push_back(i * (k - 1) + j);
    std::sort(edge.begin(), edge.end());
    h.add_edge(edge);
  }
  return h;
}

bool is_valid_order(const Hypergraph& h, const std::vector<int>& order) {
  if (static_cast<int>(order.size()) != h.edge_count()) return false;
  std::vector<char> used(order.size(), 0);
  VertexSet covered;
  for (std::size_t i = 0; i < order.size(); ++i) {
    int id = order[i];
    if (id < 0 || id >= h.edge_count() || used[static_cast<std::size_t>(id)]) return false;
    used[static_cast<std::size_t>(id)] = 1;
    const VertexSet& m = h.edge_mask(id);
    if (i == 0) {
      covered = m;
      continue;
    }
    if (m.intersect_count(covered) != 1) return false;
    covered |= m;
  }
  return true;
}

std::vector<int> expansion_valid_order(const ExpansionTree& x, int root_base_vertex) {
  if (root_base_vertex < 0 || root_base_vertex >= x.n_base)
    throw std::invalid_argument("root must be a base vertex");
  // BFS over the base tree; discovering an edge through one endpoint means it
  // meets everything placed so far in that endpoint alone.
  std::vector<std::vector<std::pair<int, int>>> adj(static_cast<std::size_t>(x.n_base));
  for (std::size_t i = 0; i < x.base_edges.size(); ++i) {
    auto [a, b] = x.base_edges[i];
    adj[static_cast<std::size_t>(a)].push_back({b, static_cast<int>(i)});
    adj[static_cast<std::size_t>(b)].push_back({a, static_cast<int>(i)});
  }
  std::vector<int> order;
  std::vector<char> vis(static_cast<std::size_t>(x.n_base), 0);
  std::queue<int> q;
  q.push(root_base_vertex);
  vis[static_cast<std::size_t>(root_base_vertex)] = 1;
  while (!q.empty()) {
    int v = q.front();
    q.pop();
    for (auto [w, id] : adj[static_cast<std::size_t>(v)]) {
      if (vis[static_cast<std::size_t>(w)]) continue;
      vis[static_cast<std::size_t>(w)] = 1;
      order.push_back(id);
      q.push(w);
    }
  }
  if (order.size() != x.base_edges.size()) throw std::logic_error("base tree was not connected");
  return order;
}

void serialize_expansion(const ExpansionTree& x, std::ostream& out) {
  std::vector<std::string> notes;
  std::string anchors = "anchors: 0..";
  anchors += std::to_string(x.n_base - 1);
  notes.push_back(anchors);
  notes.push_back("fresh vertices follow in base edge order, " + std::to_string(x.k - 2) +
                  " per edge");
  serialize_hypergraph(x.target, out, notes);
}

}  // namespace hxt
