#include "hxt/oracle.hpp"

#include <algorithm>
#include <stdexcept>

namespace hxt {

bool check_embedding(const Hypergraph& host, const ExpansionTree& x, const std::vector<int>& map,
                     bool spanning) {
  int N = x.target.n();
  if (static_cast<int>(map.size()) != N) return false;
  VertexSet used;
  for (int v = 0; v < N; ++v) {
    int w = map[static_cast<std::size_t>(v)];
    if (w < 0 || w >= host.n() || used.test(w)) return false;
    used.set(w);
  }
  if (spanning && static_cast<int>(used.count()) != host.n()) return false;
  for (int e = 0; e < x.target.edge_count(); ++e) {
    VertexSet img;
    for (int v : x.target.edge(e)) img.set(map[static_cast<std::size_t>(v)]);
    if (!host.has_edge(img)) return false;
  }
  return true;
}

namespace {

struct Searcher {
  const Hypergraph& host;
  const ExpansionTree& x;
  const OracleOptions& opt;
  std::vector<int> order;        // base edge ids in a valid order
  std::vector<int> connector;    // base vertex already placed when the edge arrives
  std::vector<int> newcomer;     // base vertex the edge introduces
  std::vector<int> map;          // target vertex -> host vertex, -1 unset
  VertexSet used;
  long long nodes = 0;
  bool out_of_budget = false;

  Searcher(const Hypergraph& h, const ExpansionTree& xt, const OracleOptions& o)
      : host(h), x(xt), opt(o) {}

  bool tick() {
    if (++nodes > opt.node_budget) {
      out_of_budget = true;
      return false;
    }
    return true;
  }

  void place_fresh(int edge_id, const std::vector<int>& rest) {
    // rest is ascending; fresh ids inside one edge are interchangeable.
    const auto& block = x.fresh[static_cast<std::size_t>(edge_id)];
    for (std::size_t j = 0; j < block.size(); ++j) {
      map[static_cast<std::size_t>(block[j])] = rest[j];
      used.set(rest[j]);
    }
  }

  void unplace_fresh(int edge_id) {
    for (int f : x.fresh[static_cast<std::size_t>(edge_id)]) {
      used.reset(map[static_cast<std::size_t>(f)]);
      map[static_cast<std::size_t>(f)] = -1;
    }
  }

  bool extend(std::size_t pos) {
    if (pos == order.size()) return true;
    int eid = order[pos];
    int conn = connector[pos];
    int child = newcomer[pos];
    int hc = map[static_cast<std::size_t>(conn)];
    for (int fid : host.incident(hc)) {
      const VertexSet& fmask = host.edge_mask(fid);
      VertexSet others = fmask;
      others.reset(hc);
      if (others.intersects(used)) continue;
      std::vector<int> rest = others.to_vector();
      for (std::size_t ci = 0; ci < rest.size(); ++ci) {
        if (!tick()) return false;
        int hchild = rest[ci];
        std::vector<int> fresh_hosts;
        for (std::size_t j = 0; j < rest.size(); ++j)
          if (j != ci) fresh_hosts.push_back(rest[j]);
        map[static_cast<std::size_t>(child)] = hchild;
        used.set(hchild);
        place_fresh(eid, fresh_hosts);
        if (extend(pos + 1)) return true;
        if (out_of_budget) return false;
        unplace_fresh(eid);
        used.reset(hchild);
        map[static_cast<std::size_t>(child)] = -1;
      }
    }
    return false;
  }
};

}  // namespace

OracleResult brute_force_embed(const Hypergraph& host, const ExpansionTree& x,
                               const OracleOptions& opt) {
  if (host.k() != x.k) throw std::invalid_argument("host and target uniformity differ");
  int N = x.target.n();
  if (opt.spanning && host.n() != N) return {OracleStatus::None, std::nullopt, 0};
  if (host.n() < N) return {OracleStatus::None, std::nullopt, 0};

  if (x.base_edges.empty()) {
    // Lone vertex: map it anywhere (spanning only fits a one-vertex host).
    std::vector<int> m = {0};
    if (check_embedding(host, x, m, opt.spanning))
      return {OracleStatus::Found, m, 1};
    return {OracleStatus::None, std::nullopt, 1};
  }

  // Root at the anchor of largest base degree, smallest id on ties.
  int root = 0;
  for (int v = 1; v < x.n_base; ++v)
    if (x.base_degree(v) > x.base_degree(root)) root = v;

  Searcher s(host, x, opt);
  s.order = expansion_valid_order(x, root);
  s.connector.resize(s.order.size());
  s.newcomer.resize(s.order.size());
  {
    std::vector<char> seen(static_cast<std::size_t>(x.n_base), 0);
    seen[static_cast<std::size_t>(root)] = 1;
    for (std::size_t i = 0; i < s.order.size(); ++i) {
      auto [a, b] = x.base_edges[static_cast<std::size_t>(s.order[i])];
      if (seen[static_cast<std::size_t>(a)] && !seen[static_cast<std::size_t>(b)]) {
        s.connector[i] = a;
        s.newcomer[i] = b;
      } else if (seen[static_cast<std::size_t>(b)] && !seen[static_cast<std::size_t>(a)]) {
        s.connector[i] = b;
        s.newcomer[i] = a;
      } else {
        throw std::logic_error("edge order is not valid for the base tree");
      }
      seen[static_cast<std::size_t>(s.newcomer[i])] = 1;
    }
  }
  s.map.assign(static_cast<std::size_t>(N), -1);

  // First edge: every host edge, every placement of the two anchors.
  int e0 = s.order[0];
  int conn0 = s.connector[0];
  for (int fid = 0; fid < host.edge_count(); ++fid) {
    const std::vector<int>& fverts = host.edge(fid);
    for (int ri = 0; ri < host.k(); ++ri) {
      int hroot = fverts[static_cast<std::size_t>(ri)];
      if (!s.tick())
        return {OracleStatus::Timeout, std::nullopt, s.nodes};
      s.map[static_cast<std::size_t>(conn0)] = hroot;
      s.used.set(hroot);
      // Remaining k-1 vertices host the newcomer anchor + fresh block; reuse
      // the generic step by pretending the first edge arrives at its root.
      VertexSet others = host.edge_mask(fid);
      others.reset(hroot);
      std::vector<int> rest = others.to_vector();
      bool done = false;
      for (std::size_t ci = 0; ci < rest.size() && !done; ++ci) {
        int hchild = rest[ci];
        std::vector<int> fresh_hosts;
        for (std::size_t j = 0; j < rest.size(); ++j)
          if (j != ci) fresh_hosts.push_back(rest[j]);
        s.map[static_cast<std::size_t>(s.newcomer[0])] = hchild;
        s.used.set(hchild);
        s.place_fresh(e0, fresh_hosts);
        if (s.extend(1)) {
          done = true;
          break;
        }
        if (s.out_of_budget) return {OracleStatus::Timeout, std::nullopt, s.nodes};
        s.unplace_fresh(e0);
        s.used.reset(hchild);
        s.map[static_cast<std::size_t>(s.newcomer[0])] = -1;
      }
      if (done) {
        if (!check_embedding(host, x, s.map, opt.spanning))
          throw std::logic_error("search produced a map that fails verification");
        return {OracleStatus::Found, s.map, s.nodes};
      }
      s.used.reset(hroot);
      s.map[static_cast<std::size_t>(conn0)] = -1;
    }
  }
  return {OracleStatus::None, std::nullopt, s.nodes};
}

}  // namespace hxt
