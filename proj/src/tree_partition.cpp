#include "hxt/tree_partition.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace hxt {

namespace {

// Subtree sizes restricted to vertices still unassigned.
void live_sizes(const RootedTree& r, const std::vector<char>& live, std::vector<int>& size) {
  size.assign(live.size(), 0);
  for (auto it = r.bfs_order.rbegin(); it != r.bfs_order.rend(); ++it) {
    int v = *it;
    if (!live[static_cast<std::size_t>(v)]) continue;
    size[static_cast<std::size_t>(v)] = 1;
    for (int c : r.children[static_cast<std::size_t>(v)])
      size[static_cast<std::size_t>(v)] += size[static_cast<std::size_t>(c)];
  }
}

void collect_live(const RootedTree& r, const std::vector<char>& live, int v, std::vector<int>& out) {
  if (!live[static_cast<std::size_t>(v)]) return;
  out.push_back(v);
  for (int c : r.children[static_cast<std::size_t>(v)]) collect_live(r, live, c, out);
}

}  // namespace

TreePartition partition_tree(const Tree& t, int root, int m_prime) {
  if (m_prime < 1) throw std::invalid_argument("part size floor must be positive");
  if (m_prime > t.n()) throw std::invalid_argument("part size floor exceeds the tree");
  RootedTree r = root_tree(t, root);
  int delta = std::max(t.max_degree(), 1);
  long long ceiling = 2LL * delta * m_prime;

  TreePartition out;
  out.root = root;
  out.m_prime = m_prime;
  std::vector<char> live(static_cast<std::size_t>(t.n()), 1);
  std::vector<int> owner(static_cast<std::size_t>(t.n()), -1);
  int remaining = t.n();
  std::vector<int> size;

  while (remaining > ceiling) {
    live_sizes(r, live, size);
    int best = -1;
    for (int v = 0; v < t.n(); ++v) {
      if (!live[static_cast<std::size_t>(v)] || size[static_cast<std::size_t>(v)] < m_prime) continue;
      if (best < 0 || r.depth[static_cast<std::size_t>(v)] > r.depth[static_cast<std::size_t>(best)] ||
          (r.depth[static_cast<std::size_t>(v)] == r.depth[static_cast<std::size_t>(best)] && v < best))
        best = v;
    }
    if (best < 0) throw std::logic_error("no cuttable subtree despite size budget");
    TreePart part;
    part.head = best;
    part.parent_vertex = r.parent[static_cast<std::size_t>(best)];
    collect_live(r, live, best, part.vertices);
    std::sort(part.vertices.begin(), part.vertices.end());
    for (int v : part.vertices) {
      live[static_cast<std::size_t>(v)] = 0;
      owner[static_cast<std::size_t>(v)] = static_cast<int>(out.parts.size());
    }
    remaining -= static_cast<int>(part.vertices.size());
    out.parts.push_back(std::move(part));
  }

  TreePart rest;
  rest.head = root;
  rest.parent_vertex = -1;
  collect_live(r, live, root, rest.vertices);
  std::sort(rest.vertices.begin(), rest.vertices.end());
  for (int v : rest.vertices) owner[static_cast<std::size_t>(v)] = static_cast<int>(out.parts.size());
  out.parts.push_back(std::move(rest));

  // Earlier pieces hang off later ones, so resolve parent links at the end.
  for (auto& part : out.parts)
    part.parent_part = (part.parent_vertex >= 0) ? owner[static_cast<std::size_t>(part.parent_vertex)] : -1;
  return out;
}

bool validate_partition(const Tree& t, const TreePartition& p, std::string* why) {
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  int delta = std::max(t.max_degree(), 1);
  long long ceiling = 2LL * delta * p.m_prime;
  std::set<int> seen;
  for (const auto& part : p.parts) {
    long long sz = static_cast<long long>(part.vertices.size());
    if (sz < p.m_prime || sz > ceiling) return fail("part size outside [m', 2*Delta*m']");
    for (int v : part.vertices)
      if (!seen.insert(v).second) return fail("vertex assigned twice");
    // Connectivity of the induced piece.
    std::set<int> inside(part.vertices.begin(), part.vertices.end());
    std::vector<int> stack = {part.head};
    std::set<int> vis = {part.head};
    if (!inside.count(part.head)) return fail("part head missing from its own piece");
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (int w : t.neighbors(v))
        if (inside.count(w) && !vis.count(w)) {
          vis.insert(w);
          stack.push_back(w);
        }
    }
    if (vis.size() != inside.size()) return fail("part does not induce a connected subtree");
  }
  if (static_cast<int>(seen.size()) != t.n()) return fail("parts do not cover the tree");
  if (p.parts.empty() || p.parts.back().parent_vertex != -1)
    return fail("root piece must come last with no parent");
  if (why) why->clear();
  return true;
}

}  // namespace hxt
