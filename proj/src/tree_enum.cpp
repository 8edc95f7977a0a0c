#include "hxt/tree_enum.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace hxt {

std::vector<std::vector<int>> enumerate_rooted_level_sequences(int n, int cap) {
  if (n < 1) throw std::invalid_argument("need at least one vertex");
  if (n > cap) throw std::invalid_argument("rooted tree enumeration above configured cap");
  std::vector<std::vector<int>> out;
  std::vector<int> L(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) L[static_cast<std::size_t>(i)] = i + 1;  // the path
  out.push_back(L);
  if (n <= 2) return out;
  while (true) {
    // Find the rightmost entry that can still drop.
    int p = n - 1;
    while (p >= 0 && L[static_cast<std::size_t>(p)] <= 2) --p;
    if (p < 0) break;
    int q = p - 1;
    while (L[static_cast<std::size_t>(q)] != L[static_cast<std::size_t>(p)] - 1) --q;
    for (int i = p; i < n; ++i) L[static_cast<std::size_t>(i)] = L[static_cast<std::size_t>(i - (p - q))];
    out.push_back(L);
  }
  return out;
}

Tree tree_from_level_sequence(const std::vector<int>& levels) {
  int n = static_cast<int>(levels.size());
  if (n < 1 || levels[0] != 1) throw std::invalid_argument("level sequence must start at 1");
  std::vector<std::pair<int, int>> edges;
  for (int i = 1; i < n; ++i) {
    if (levels[static_cast<std::size_t>(i)] < 2)
      throw std::invalid_argument("only the root may sit at level 1");
    int j = i - 1;
    while (j >= 0 && levels[static_cast<std::size_t>(j)] != levels[static_cast<std::size_t>(i)] - 1) --j;
    if (j < 0) throw std::invalid_argument("level sequence skips a level");
    edges.push_back({j, i});
  }
  return Tree(n, std::move(edges));
}

namespace {

std::string rooted_cert(const Tree& t, int v, int parent) {
  std::vector<std::string> parts;
  for (int w : t.neighbors(v))
    if (w != parent) parts.push_back(rooted_cert(t, w, v));
  std::sort(parts.begin(), parts.end());
  std::string s = "(";
  for (const auto& p : parts) s += p;
  s += ")";
  return s;
}

}  // namespace

std::vector<int> tree_centroids(const Tree& t) {
  int n = t.n();
  if (n == 1) return {0};
  RootedTree r = root_tree(t, 0);
  std::vector<int> out;
  int best = n + 1;
  for (int v = 0; v < n; ++v) {
    int heavy = n - r.subtree_size[static_cast<std::size_t>(v)];
    for (int c : r.children[static_cast<std::size_t>(v)])
      heavy = std::max(heavy, r.subtree_size[static_cast<std::size_t>(c)]);
    if (heavy < best) {
      best = heavy;
      out.clear();
    }
    if (heavy == best) out.push_back(v);
  }
  return out;
}

std::string free_tree_certificate(const Tree& t) {
  auto cs = tree_centroids(t);
  if (cs.size() == 1) return "C" + rooted_cert(t, cs[0], -1);
  // Two centroids are adjacent; split on that edge and order the halves.
  std::string a = rooted_cert(t, cs[0], cs[1]);
  std::string b = rooted_cert(t, cs[1], cs[0]);
  if (b < a) std::swap(a, b);
  return "B" + a + "|" + b;
}

std::vector<Tree> enumerate_free_trees(int n, int cap) {
  auto sequences = enumerate_rooted_level_sequences(n, cap);
  std::map<std::string, Tree> reps;
  for (const auto& levels : sequences) {
    Tree t = tree_from_level_sequence(levels);
    reps.try_emplace(free_tree_certificate(t), std::move(t));
  }
  std::vector<Tree> out;
  out.reserve(reps.size());
  for (auto& [cert, t] : reps) out.push_back(std::move(t));
  return out;
}

}  // namespace hxt
