#include "hxt/tree.hpp"

#include <algorithm>
#include <fstream>
#include <queue>
#include <set>
#include <sstream>
#include <stdexcept>

#include "hxt/rng.hpp"

namespace hxt {

Tree::Tree(int n, std::vector<std::pair<int, int>> edges) : n_(n), edges_(std::move(edges)) {
  if (n_ < 1) throw std::invalid_argument("tree needs at least one vertex");
  if (static_cast<int>(edges_.size()) != n_ - 1)
    throw std::invalid_argument("tree must have exactly n-1 edges");
  adj_.assign(static_cast<std::size_t>(n_), {});
  std::set<std::pair<int, int>> seen;
  for (auto& [a, b] : edges_) {
    if (a < 0 || a >= n_ || b < 0 || b >= n_) throw std::invalid_argument("tree edge out of range");
    if (a == b) throw std::invalid_argument("tree edge is a loop");
    if (a > b) std::swap(a, b);
    if (!seen.insert({a, b}).second) throw std::invalid_argument("duplicate tree edge");
    adj_[static_cast<std::size_t>(a)].push_back(b);
    adj_[static_cast<std::size_t>(b)].push_back(a);
  }
  for (auto& nb : adj_) std::sort(nb.begin(), nb.end());
  // n-1 edges + connected implies acyclic, so one BFS settles validity.
  std::vector<char> vis(static_cast<std::size_t>(n_), 0);
  std::queue<int> q;
  q.push(0);
  vis[0] = 1;
  int reached = 1;
  while (!q.empty()) {
    int v = q.front();
    q.pop();
    for (int w : adj_[static_cast<std::size_t>(v)]) {
      if (!vis[static_cast<std::size_t>(w)]) {
        vis[static_cast<std::size_t>(w)] = 1;
        ++reached;
        q.push(w);
      }
    }
  }
  if (reached != n_) throw std::invalid_argument("tree edge list is disconnected");
}

int Tree::max_degree() const {
  int d = 0;
  for (int v = 0; v < n_; ++v) d = std::max(d, degree(v));
  return d;
}

RootedTree root_tree(const Tree& t, int root) {
  if (root < 0 || root >= t.n()) throw std::invalid_argument("root out of range");
  RootedTree r;
  r.root = root;
  r.parent.assign(static_cast<std::size_t>(t.n()), -1);
  r.children.assign(static_cast<std::size_t>(t.n()), {});
  r.depth.assign(static_cast<std::size_t>(t.n()), 0);
  r.subtree_size.assign(static_cast<std::size_t>(t.n()), 1);
  std::vector<char> vis(static_cast<std::size_t>(t.n()), 0);
  std::queue<int> q;
  q.push(root);
  vis[static_cast<std::size_t>(root)] = 1;
  while (!q.empty()) {
    int v = q.front();
    q.pop();
    r.bfs_order.push_back(v);
    for (int w : t.neighbors(v)) {
      if (vis[static_cast<std::size_t>(w)]) continue;
      vis[static_cast<std::size_t>(w)] = 1;
      r.parent[static_cast<std::size_t>(w)] = v;
      r.children[static_cast<std::size_t>(v)].push_back(w);
      r.depth[static_cast<std::size_t>(w)] = r.depth[static_cast<std::size_t>(v)] + 1;
      q.push(w);
    }
  }
  for (auto it = r.bfs_order.rbegin(); it != r.bfs_order.rend(); ++it) {
    int p = r.parent[static_cast<std::size_t>(*it)];
    if (p >= 0) r.subtree_size[static_cast<std::size_t>(p)] += r.subtree_size[static_cast<std::size_t>(*it)];
  }
  return r;
}

DegreeClass classify_degrees(const Tree& t, int q_cap) {
  DegreeClass c;
  c.all_odd = true;
  for (int v = 0; v < t.n(); ++v) {
    int d = t.degree(v);
    c.max_degree = std::max(c.max_degree, d);
    if (d % 2 == 0) {
      c.all_odd = false;
      c.has_even_vertex = true;
    }
  }
  if (t.n() == 1) c.all_odd = false;  // the single vertex has degree zero
  for (int q = 2; q <= q_cap; ++q) {
    bool all = true;
    for (int v = 0; v < t.n() && all; ++v)
      if (t.degree(v) % q != 1) all = false;
    if (all && t.n() >= 2) c.one_mod_q.push_back(q);
  }
  return c;
}

Tree random_tree(int n, int max_degree, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("tree needs at least one vertex");
  if (n >= 2 && max_degree < 2 && n > 2)
    throw std::invalid_argument("max degree too small for a tree of this size");
  if (n == 1) return Tree(1, {});
  if (n == 2) return Tree(2, {{0, 1}});
  for (std::uint64_t attempt = 0;; ++attempt) {
    Rng rng(Rng::derive(seed, attempt));
    std::vector<int> pruefer(static_cast<std::size_t>(n - 2));
    for (auto& x : pruefer) x = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
    std::vector<int> deg(static_cast<std::size_t>(n), 1);
    for (int x : pruefer) ++deg[static_cast<std::size_t>(x)];
    if (*std::max_element(deg.begin(), deg.end()) > max_degree) continue;
    // Standard Pruefer decode.
    std::priority_queue<int, std::vector<int>, std::greater<int>> leaves;
    std::vector<int> d = deg;
    for (int v = 0; v < n; ++v)
      if (d[static_cast<std::size_t>(v)] == 1) leaves.push(v);
    std::vector<std::pair<int, int>> edges;
    for (int x : pruefer) {
      int leaf = leaves.top();
      leaves.pop();
      edges.push_back({leaf, x});
      if (--d[static_cast<std::size_t>(x)] == 1) leaves.push(x);
    }
    int a = leaves.top();
    leaves.pop();
    int b = leaves.top();
    edges.push_back({a, b});
    return Tree(n, std::move(edges));
  }
}

Tree parse_tree(std::istream& in) {
  std::string line;
  int n = -1, lineno = 0;
  std::vector<std::pair<int, int>> edges;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::istringstream ss(line);
    std::vector<long long> vals;
    long long x;
    while (ss >> x) vals.push_back(x);
    if (!ss.eof()) {
      std::string junk;
      ss.clear();
      ss >> junk;
      if (!junk.empty())
        throw std::invalid_argument("line " + std::to_string(lineno) + ": unexpected token");
    }
    if (vals.empty()) continue;
    if (n < 0) {
      if (vals.size() != 1 || vals[0] < 1 || vals[0] > 100000)
        throw std::invalid_argument("tree header must be a single vertex count");
      n = static_cast<int>(vals[0]);
      continue;
    }
    if (vals.size() != 2)
      throw std::invalid_argument("line " + std::to_string(lineno) + ": expected \"u v\"");
    edges.emplace_back(static_cast<int>(vals[0]), static_cast<int>(vals[1]));
  }
  if (n < 0) throw std::invalid_argument("missing tree header line");
  return Tree(n, std::move(edges));
}

Tree parse_tree_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  return parse_tree(in);
}

void serialize_tree(const Tree& t, std::ostream& out) {
  out << t.n() << "\n";
  for (const auto& [a, b] : t.edges()) out << a << " " << b << "\n";
}

}  // namespace hxt
