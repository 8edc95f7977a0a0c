#include "hxt/immersion.hpp"

#include <algorithm>
#include <map>
#include <queue>

#include "hxt/rng.hpp"

namespace hxt {

VertexSet ImmersionItem::vertices() const {
  VertexSet s;
  for (const VertexSet& e : edges) s |= e;
  return s;
}

ImmersionItem item_from_component(const HalfComponent& comp) {
  ImmersionItem item;
  item.is_star = comp.is_star;
  item.center = comp.center;
  item.edges = comp.edges;
  item.leaves = comp.leaves;
  return item;
}

std::vector<ImmersionItem> items_from_gadget_half(const Gadget& g, int side) {
  std::vector<ImmersionItem> out;
  for (const HalfComponent& comp : half_components(g, side))
    out.push_back(item_from_component(comp));
  return out;
}

bool verify_immersed(const PartialEmbedding& pe, const ImmersionItem& item,
                     std::string* why) {
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  int tv = pe.to_target(item.center);
  if (tv < 0) return fail("designated vertex not covered");
  if (item.is_star) {
    int t = static_cast<int>(item.edges.size());
    if (pe.embedded_degree(tv) != t) return fail("star centre degree mismatch");
    for (const VertexSet& e : item.edges) {
      std::optional<int> eid = pe.find_edge_by_image(e);
      if (!eid) return fail("star edge not an embedded image");
      const std::vector<int>& verts = pe.target().target.edge(*eid);
      if (std::find(verts.begin(), verts.end(), tv) == verts.end())
        return fail("star edge misses the centre vertex");
    }
    return true;
  }
  if (pe.embedded_degree(tv) != 1) return fail("designated vertex rides more than one edge");
  std::optional<int> eid = pe.find_edge_by_image(item.edges[0]);
  if (!eid) return fail("edge not an embedded image");
  const std::vector<int>& verts = pe.target().target.edge(*eid);
  if (std::find(verts.begin(), verts.end(), tv) == verts.end())
    return fail("designated vertex outside its edge");
  return true;
}

namespace {

std::vector<int> tree_distances(const std::vector<std::vector<int>>& adj, int from) {
  std::vector<int> dist(adj.size(), -1);
  std::queue<int> q;
  dist[static_cast<std::size_t>(from)] = 0;
  q.push(from);
  while (!q.empty()) {
    int v = q.front();
    q.pop();
    for (int w : adj[static_cast<std::size_t>(v)]) {
      if (dist[static_cast<std::size_t>(w)] == -1) {
        dist[static_cast<std::size_t>(w)] = dist[static_cast<std::size_t>(v)] + 1;
        q.push(w);
      }
    }
  }
  return dist;
}

}  // namespace

ImmersionResult immerse_embed(const Hypergraph& host, const ExpansionTree& x,
                              const std::vector<int>& verts, int root,
                              const ImmersionTask& task, const PartialEmbedding* base,
                              int spacing, int restarts, std::uint64_t seed,
                              const VertexSet& allowed) {
  ImmersionResult res;
  VertexSet pool = allowed.empty() ? host.vertex_mask() : allowed;
  VertexSet in_sub;
  for (int v : verts) in_sub.set(v);
  if (!in_sub.test(root)) {
    res.error = "root outside the subtree";
    return res;
  }
  // Pairwise item disjointness and free-of-base checks are hard errors.
  VertexSet item_verts;
  for (const ImmersionItem& it : task.items) {
    VertexSet iv = it.vertices();
    if (iv.intersects(item_verts)) {
      res.error = "immersion items share vertices";
      return res;
    }
    if (base && iv.intersects(base->image())) {
      res.error = "immersion item collides with the seed embedding";
      return res;
    }
    item_verts |= iv;
  }

  // Subtree adjacency and the base-edge ids inside it.
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(x.n_base));
  std::map<std::pair<int, int>, int> edge_id;
  for (int e = 0; e < static_cast<int>(x.base_edges.size()); ++e) {
    auto [a, b] = x.base_edges[static_cast<std::size_t>(e)];
    if (!in_sub.test(a) || !in_sub.test(b)) continue;
    adj[static_cast<std::size_t>(a)].push_back(b);
    adj[static_cast<std::size_t>(b)].push_back(a);
    edge_id[{std::min(a, b), std::max(a, b)}] = e;
  }
  for (auto& nb : adj) std::sort(nb.begin(), nb.end());

  // BFS structure of the subtree.
  std::vector<int> parent(static_cast<std::size_t>(x.n_base), -2);
  std::vector<int> order;
  {
    std::queue<int> q;
    parent[static_cast<std::size_t>(root)] = -1;
    q.push(root);
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      order.push_back(v);
      for (int w : adj[static_cast<std::size_t>(v)])
        if (parent[static_cast<std::size_t>(w)] == -2) {
          parent[static_cast<std::size_t>(w)] = v;
          q.push(w);
        }
    }
  }
  if (order.size() != verts.size()) {
    res.error = "subtree is not connected";
    return res;
  }

  // Candidate tree vertices per item kind.
  auto star_ok = [&](int v, int t) {
    if (x.base_degree(v) != t) return false;
    if (static_cast<int>(adj[static_cast<std::size_t>(v)].size()) != t) return false;
    return true;
  };

  for (int attempt = 0; attempt < std::max(1, restarts); ++attempt) {
    Rng rng(Rng::derive(seed, static_cast<std::uint64_t>(attempt)));
    res.restarts_used = attempt + 1;

    // Select spaced tree vertices, stars first.
    std::vector<int> item_order;
    for (std::size_t i = 0; i < task.items.size(); ++i)
      if (task.items[i].is_star) item_order.push_back(static_cast<int>(i));
    for (std::size_t i = 0; i < task.items.size(); ++i)
      if (!task.items[i].is_star) item_order.push_back(static_cast<int>(i));

    std::vector<int> assign(task.items.size(), -1);
    std::vector<int> chosen;
    bool selected = true;
    for (int ii : item_order) {
      const ImmersionItem& it = task.items[static_cast<std::size_t>(ii)];
      std::vector<int> cands;
      for (int v : order) {
        if (it.is_star) {
          if (!star_ok(v, static_cast<int>(it.edges.size()))) continue;
        } else {
          if (v == root) continue;
        }
        bool far = true;
        for (int c : chosen) {
          std::vector<int> dist = tree_distances(adj, c);
          if (dist[static_cast<std::size_t>(v)] >= 0 &&
              dist[static_cast<std::size_t>(v)] < spacing) {
            far = false;
            break;
          }
        }
        if (far && std::find(chosen.begin(), chosen.end(), v) == chosen.end())
          cands.push_back(v);
      }
      if (cands.empty()) {
        selected = false;
        break;
      }
      int v = cands[static_cast<std::size_t>(rng.below(cands.size()))];
      assign[static_cast<std::size_t>(ii)] = v;
      chosen.push_back(v);
    }
    if (!selected) {
      res.error = "not enough spaced tree vertices for the item family";
      continue;
    }

    PartialEmbedding pe = base ? *base : PartialEmbedding(host, x);
    bool ok = true;
    std::vector<char> edge_done(x.base_edges.size(), 0);
    for (int e = 0; e < static_cast<int>(x.base_edges.size()); ++e)
      if (pe.edge_embedded(e)) edge_done[static_cast<std::size_t>(e)] = 1;

    // Pin items.
    for (std::size_t ii = 0; ii < task.items.size() && ok; ++ii) {
      const ImmersionItem& it = task.items[ii];
      int v = assign[ii];
      try {
        if (it.is_star) {
          pe.assign(v, it.center);
          const std::vector<int>& nbs = adj[static_cast<std::size_t>(v)];
          for (std::size_t j = 0; j < nbs.size(); ++j) {
            int e = edge_id.at({std::min(v, nbs[j]), std::max(v, nbs[j])});
            pe.assign(nbs[j], it.leaves[j]);
            VertexSet interior = it.edges[j];
            interior.reset(it.center);
            interior.reset(it.leaves[j]);
            std::vector<int> iv = interior.to_vector();
            const std::vector<int>& fresh = x.fresh[static_cast<std::size_t>(e)];
            for (std::size_t p = 0; p < fresh.size(); ++p) pe.assign(fresh[p], iv[p]);
            pe.mark_edge(e);
            edge_done[static_cast<std::size_t>(e)] = 1;
          }
        } else {
          int p = parent[static_cast<std::size_t>(v)];
          int e = edge_id.at({std::min(v, p), std::max(v, p)});
          VertexSet rest = it.edges[0];
          rest.reset(it.center);
          std::vector<int> others = rest.to_vector();
          pe.assign(p, others[0]);
          pe.assign(v, others[1]);
          const std::vector<int>& fresh = x.fresh[static_cast<std::size_t>(e)];
          std::vector<int> slots;
          slots.push_back(it.center);
          for (std::size_t q = 2; q < others.size(); ++q) slots.push_back(others[q]);
          for (std::size_t p2 = 0; p2 < fresh.size(); ++p2) pe.assign(fresh[p2], slots[p2]);
          pe.mark_edge(e);
          edge_done[static_cast<std::size_t>(e)] = 1;
        }
      } catch (const std::invalid_argument&) {
        ok = false;
      }
    }
    if (!ok) {
      res.error = "item placement collided";
      continue;
    }

    // Embed the rest of the subtree greedily in BFS edge order.
    for (int v : order) {
      if (!ok) break;
      int p = parent[static_cast<std::size_t>(v)];
      if (p < 0) {
        if (pe.to_host(v) < 0) {
          // Free root: place it anywhere allowed.
          std::vector<int> opts;
          for (int hv = 0; hv < host.n(); ++hv)
            if (pool.test(hv) && pe.to_target(hv) < 0) opts.push_back(hv);
          if (opts.empty()) {
            ok = false;
            break;
          }
          pe.assign(v, opts[static_cast<std::size_t>(rng.below(opts.size()))]);
        }
        continue;
      }
      int e = edge_id.at({std::min(v, p), std::max(v, p)});
      if (edge_done[static_cast<std::size_t>(e)]) continue;
      int hp = pe.to_host(p);
      if (hp < 0) {
        ok = false;  // BFS order should prevent this
        break;
      }
      int hv = pe.to_host(v);
      std::vector<int> cand(host.incident(hp).begin(), host.incident(hp).end());
      rng.shuffle(cand);
      bool placed = false;
      for (int eid : cand) {
        const VertexSet& mask = host.edge_mask(eid);
        if (hv >= 0 && !mask.test(hv)) continue;
        VertexSet rest = mask;
        rest.reset(hp);
        if (hv >= 0) rest.reset(hv);
        bool free_ok = true;
        for (int u : rest.to_vector()) {
          if (pe.to_target(u) >= 0 || !pool.test(u)) {
            free_ok = false;
            break;
          }
        }
        if (!free_ok) continue;
        std::vector<int> rv = rest.to_vector();
        std::size_t at = 0;
        if (hv < 0) {
          pe.assign(v, rv[at]);
          ++at;
        }
        const std::vector<int>& fresh = x.fresh[static_cast<std::size_t>(e)];
        for (std::size_t p2 = 0; p2 < fresh.size(); ++p2, ++at) pe.assign(fresh[p2], rv[at]);
        pe.mark_edge(e);
        edge_done[static_cast<std::size_t>(e)] = 1;
        placed = true;
        break;
      }
      if (!placed) {
        ok = false;
        break;
      }
    }
    if (!ok) {
      res.error = "greedy embedding ran out of host edges";
      continue;
    }

    // The seed may live in a different part of the tree, so connectivity of
    // the union is not required here; callers re-check it once connected.
    std::string why;
    if (!pe.validate(&why, false)) {
      res.error = "embedding failed validation: " + why;
      continue;
    }
    bool witnessed = true;
    for (const ImmersionItem& it : task.items) {
      if (!verify_immersed(pe, it, &why)) {
        witnessed = false;
        res.error = "item not immersed: " + why;
        break;
      }
    }
    if (!witnessed) continue;
    res.embedding = std::move(pe);
    res.item_vertex = assign;
    res.error.clear();
    return res;
  }
  if (res.error.empty()) res.error = "immersion failed within the restart budget";
  return res;
}

}  // namespace hxt
