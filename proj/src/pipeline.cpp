#include "hxt/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <set>
#include <stdexcept>

#include "hxt/almost.hpp"
#include "hxt/cycle_embed.hpp"
#include "hxt/diamonds.hpp"
#include "hxt/immersion.hpp"
#include "hxt/paths.hpp"
#include "hxt/rng.hpp"
#include "hxt/separation.hpp"
#include "hxt/tree.hpp"
#include "hxt/tree_partition.hpp"

namespace hxt {

namespace {

struct AttemptFail {
  std::string stage;
  std::string message;
  std::optional<AbsorbFailure> absorb;
};

void note_stage(PipelineTrace& tr, std::string stage, std::string status,
                const PartialEmbedding* pe,
                std::vector<std::pair<std::string, long long>> counts = {}) {
  StageRecord rec;
  rec.stage = std::move(stage);
  rec.status = std::move(status);
  if (pe) rec.covered = pe->image().count();
  rec.counts = std::move(counts);
  tr.stages.push_back(std::move(rec));
}

std::nullopt_t fail_stage(PipelineTrace& tr, AttemptFail& fail, const std::string& stage,
                          const std::string& message, const PartialEmbedding* pe = nullptr) {
  note_stage(tr, stage, message, pe);
  fail.stage = stage;
  fail.message = message;
  return std::nullopt;
}

std::vector<int> subtree_vertices(const RootedTree& rt, int top) {
  std::vector<int> out;
  std::vector<int> stack{top};
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    out.push_back(v);
    for (int c : rt.children[static_cast<std::size_t>(v)]) stack.push_back(c);
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Deepest vertex whose subtree size lies in [lo, hi], smallest id on depth
// ties; when the window is empty, the largest proper subtree.
int pick_subtree_root(const RootedTree& rt, int n, double lo, double hi) {
  int best = -1;
  for (int v = 0; v < n; ++v) {
    if (v == rt.root) continue;
    double s = rt.subtree_size[static_cast<std::size_t>(v)];
    if (s < lo || s > hi) continue;
    if (best < 0 || rt.depth[static_cast<std::size_t>(v)] > rt.depth[static_cast<std::size_t>(best)])
      best = v;
  }
  if (best >= 0) return best;
  for (int v = 0; v < n; ++v) {
    if (v == rt.root) continue;
    if (best < 0 ||
        rt.subtree_size[static_cast<std::size_t>(v)] > rt.subtree_size[static_cast<std::size_t>(best)])
      best = v;
  }
  return best;
}

std::map<std::pair<int, int>, int> base_edge_ids(const ExpansionTree& x) {
  std::map<std::pair<int, int>, int> ids;
  for (int e = 0; e < static_cast<int>(x.base_edges.size()); ++e) {
    auto [a, b] = x.base_edges[static_cast<std::size_t>(e)];
    ids[{std::min(a, b), std::max(a, b)}] = e;
  }
  return ids;
}

// Unembedded base edges holding a degree-one endpoint outside `inside`,
// ascending by edge id.
std::vector<int> prunable_leaves(const Tree& t, const ExpansionTree& x,
                                 const PartialEmbedding& pe, const std::set<int>& inside) {
  std::vector<int> out;
  for (int e = 0; e < static_cast<int>(x.base_edges.size()); ++e) {
    if (pe.edge_embedded(e)) continue;
    auto [a, b] = x.base_edges[static_cast<std::size_t>(e)];
    if ((t.degree(a) == 1 && !inside.count(a)) || (t.degree(b) == 1 && !inside.count(b)))
      out.push_back(e);
  }
  return out;
}

// Places a target edge whose remaining slots (uncovered endpoints first,
// then the fresh block) land on exactly the given free host vertices.
void lay_edge_onto(PartialEmbedding& pe, int edge_id, const std::vector<int>& hosts) {
  const ExpansionTree& x = pe.target();
  auto [a, b] = x.base_edges[static_cast<std::size_t>(edge_id)];
  std::vector<int> slots;
  if (pe.to_host(a) < 0) slots.push_back(a);
  if (pe.to_host(b) < 0) slots.push_back(b);
  for (int f : x.fresh[static_cast<std::size_t>(edge_id)]) slots.push_back(f);
  if (slots.size() != hosts.size())
    throw std::invalid_argument("lay_edge_onto: slot and host counts differ");
  for (std::size_t i = 0; i < slots.size(); ++i) pe.assign(slots[i], hosts[i]);
  pe.mark_edge(edge_id);
}

// Cross-part edges the greedy cover still owes, each of which routes k-2
// interiors through the reservoir. `forced` marks one extra edge as a
// connector regardless of parts; pass -1 for none.
int count_connectors(const Tree& t, const ExpansionTree& x, const PartialEmbedding& pe,
                     const std::vector<int>& skip_edges, int root, int part_floor, int forced) {
  TreePartition partition = partition_tree(t, root, part_floor);
  std::vector<int> part_of(static_cast<std::size_t>(t.n()), -1);
  for (std::size_t p = 0; p < partition.parts.size(); ++p)
    for (int v : partition.parts[p].vertices)
      part_of[static_cast<std::size_t>(v)] = static_cast<int>(p);
  std::set<int> skip(skip_edges.begin(), skip_edges.end());
  int conn = 0;
  for (int e = 0; e < static_cast<int>(x.base_edges.size()); ++e) {
    if (pe.edge_embedded(e) || skip.count(e)) continue;
    auto [a, b] = x.base_edges[static_cast<std::size_t>(e)];
    if (part_of[static_cast<std::size_t>(a)] != part_of[static_cast<std::size_t>(b)] ||
        e == forced)
      ++conn;
  }
  return conn;
}

// Draws `size` free vertices, spending ones outside `spare` first so the
// absorption furniture keeps its loose tips when the pool allows it.
VertexSet sample_reservoir_verts(const Hypergraph& h, const VertexSet& taken,
                                 const VertexSet& spare, long long size, Rng rng) {
  VertexSet pool = h.vertex_mask().minus(taken);
  std::vector<int> first = pool.minus(spare).to_vector();
  std::vector<int> later = (pool & spare).to_vector();
  rng.shuffle(first);
  rng.shuffle(later);
  VertexSet out;
  long long got = 0;
  for (int v : first) {
    if (got >= size) break;
    out.set(v);
    ++got;
  }
  for (int v : later) {
    if (got >= size) break;
    out.set(v);
    ++got;
  }
  return out;
}

struct SliceOutcome {
  std::optional<PartialEmbedding> embedding;
  bool sliced = false;  // per-part slices held; false after the pooled fallback
  int trials = 0;
  int parts_used = 0;
  int connector_count = 0;
  std::string error;
};

// Greedy cover like almost_embed, but the free pool is cut into per-part
// slices first (sample-and-verify with retries) so each part's tips and
// interiors come from its own slice. Reserved vertices are never drawn.
// The final trial runs with every slice widened to the whole pool.
SliceOutcome sliced_almost(const PartialEmbedding& start, const Tree& t,
                           const VertexSet& reservoir, const VertexSet& reserved,
                           const std::vector<int>& skip_edges, int forced_connector,
                           const Config& cfg, std::uint64_t seed) {
  SliceOutcome out;
  const Hypergraph& h = start.host();
  const ExpansionTree& x = start.target();
  const int k = h.k();

  TreePartition partition = partition_tree(t, 0, std::min(cfg.part_size, t.n()));
  std::vector<int> part_of(static_cast<std::size_t>(t.n()), -1);
  for (std::size_t p = 0; p < partition.parts.size(); ++p)
    for (int v : partition.parts[p].vertices) part_of[static_cast<std::size_t>(v)] = static_cast<int>(p);

  std::set<int> skip(skip_edges.begin(), skip_edges.end());

  // Dependency sweep, tagging each edge with the part that pays for it: the
  // part of the endpoint the edge covers (for edges closing between two
  // covered vertices, the smaller endpoint's part).
  struct SEdge {
    GreedyEdge ge;
    int consumer = -1;
    bool tip = false;
  };
  std::vector<SEdge> order;
  std::vector<char> picked(x.base_edges.size(), 0);
  std::vector<char> reach(static_cast<std::size_t>(t.n()), 0);
  for (int v = 0; v < t.n(); ++v)
    if (start.to_host(v) >= 0) reach[static_cast<std::size_t>(v)] = 1;
  bool progress = true;
  while (progress) {
    progress = false;
    for (int e = 0; e < static_cast<int>(x.base_edges.size()); ++e) {
      if (picked[static_cast<std::size_t>(e)] || start.edge_embedded(e) || skip.count(e)) continue;
      auto [a, b] = x.base_edges[static_cast<std::size_t>(e)];
      if (!reach[static_cast<std::size_t>(a)] && !reach[static_cast<std::size_t>(b)]) continue;
      SEdge se;
      se.ge.edge_id = e;
      se.ge.connector =
          part_of[static_cast<std::size_t>(a)] != part_of[static_cast<std::size_t>(b)] ||
          e == forced_connector;
      int fresh_end = !reach[static_cast<std::size_t>(a)] ? a
                      : (!reach[static_cast<std::size_t>(b)] ? b : -1);
      se.tip = fresh_end >= 0;
      se.consumer = part_of[static_cast<std::size_t>(fresh_end >= 0 ? fresh_end : std::min(a, b))];
      order.push_back(se);
      picked[static_cast<std::size_t>(e)] = 1;
      reach[static_cast<std::size_t>(a)] = 1;
      reach[static_cast<std::size_t>(b)] = 1;
      progress = true;
    }
  }
  for (int e = 0; e < static_cast<int>(x.base_edges.size()); ++e)
    if (!picked[static_cast<std::size_t>(e)] && !start.edge_embedded(e) && !skip.count(e)) {
      out.error = "remaining edges are not reachable from the covered set";
      return out;
    }
  for (const SEdge& se : order)
    if (se.ge.connector) ++out.connector_count;

  const int np = static_cast<int>(partition.parts.size());
  std::vector<long long> need(static_cast<std::size_t>(np), 0);
  for (const SEdge& se : order)
    need[static_cast<std::size_t>(se.consumer)] +=
        (se.tip ? 1 : 0) + (se.ge.connector ? 0 : k - 2);

  VertexSet pool_all = h.vertex_mask().minus(start.image()).minus(reservoir).minus(reserved);
  long long total_need = 0;
  for (long long nd : need) total_need += nd;
  if (total_need > pool_all.count()) {
    out.error = "slice budget infeasible: need " + std::to_string(total_need) + ", pool " +
                std::to_string(pool_all.count());
    return out;
  }

  CycleTiling tiling = tile_loose_cycles(h, pool_all, cfg.tile_length, Rng::derive(seed, 3));
  std::vector<int> prefer;
  for (const std::vector<int>& cyc : tiling.cycles) prefer.insert(prefer.end(), cyc.begin(), cyc.end());

  std::vector<int> part_order;
  {
    std::vector<char> seen(static_cast<std::size_t>(np), 0);
    for (const SEdge& se : order)
      if (!seen[static_cast<std::size_t>(se.consumer)]) {
        seen[static_cast<std::size_t>(se.consumer)] = 1;
        part_order.push_back(se.consumer);
      }
  }
  out.parts_used = static_cast<int>(part_order.size());

  const std::vector<int> pool_vec = pool_all.to_vector();
  const VertexSet res_free = reservoir.minus(start.image());

  std::string last_err = "no slice attempt ran";
  for (int trial = 0; trial <= cfg.part_restarts; ++trial) {
    const bool use_slices = trial < cfg.part_restarts;
    std::vector<VertexSet> slice(static_cast<std::size_t>(np));
    if (use_slices) {
      Rng rng(Rng::derive(seed, 100 + static_cast<std::uint64_t>(trial)));
      std::vector<int> shuffled = pool_vec;
      rng.shuffle(shuffled);
      std::size_t at = 0;
      for (int j : part_order)
        for (long long i = 0; i < need[static_cast<std::size_t>(j)]; ++i)
          slice[static_cast<std::size_t>(j)].set(shuffled[at++]);

      // Support pre-check: a slice vertex with no host edge inside its own
      // slice plus the covered and reservoir vertices can never be used.
      bool support_ok = true;
      for (int j : part_order) {
        VertexSet ctx = slice[static_cast<std::size_t>(j)] | start.image() | res_free;
        for (int w : slice[static_cast<std::size_t>(j)].to_vector()) {
          bool reachable = false;
          for (int eid : h.incident(w))
            if (ctx.contains(h.edge_mask(eid))) {
              reachable = true;
              break;
            }
          if (!reachable) {
            support_ok = false;
            break;
          }
        }
        if (!support_ok) break;
      }
      if (!support_ok) {
        last_err = "slice support check failed";
        continue;
      }
    } else {
      for (int j : part_order) slice[static_cast<std::size_t>(j)] = pool_all;
    }

    PartialEmbedding pe = start;
    bool all_ok = true;
    for (int j : part_order) {
      GreedySpec spec;
      for (const SEdge& se : order)
        if (se.consumer == j) spec.edges.push_back(se.ge);
      if (spec.edges.empty()) continue;
      spec.allowed = slice[static_cast<std::size_t>(j)];
      spec.reservoir = res_free;
      spec.prefer_edges = prefer;
      spec.restarts = cfg.stage_restarts;
      spec.seed = Rng::derive(seed, 1000 + 17ull * static_cast<std::uint64_t>(trial) +
                                        static_cast<std::uint64_t>(j));
      std::string why;
      std::optional<PartialEmbedding> got = greedy_embed_edges(pe, spec, &why);
      if (!got) {
        last_err = "part " + std::to_string(j) + ": " + why;
        all_ok = false;
        break;
      }
      pe = std::move(*got);
    }
    if (!all_ok) continue;
    out.embedding = std::move(pe);
    out.sliced = use_slices;
    out.trials = trial + 1;
    return out;
  }
  out.error = last_err;
  out.trials = cfg.part_restarts + 1;
  return out;
}

// Reservoir, tuple immersion in one subtree, greedy cover of the rest, then
// one absorption switch per pruned leaf. Shared by the depth-d pipeline and
// the inseparable branch of the pair-degree one.
std::optional<PartialEmbedding> core_attempt(const Hypergraph& host, const ExpansionTree& x,
                                             const Tree& t, int d, const Config& cfg,
                                             std::uint64_t sa, PipelineTrace& tr,
                                             AttemptFail& fail) {
  const int n = t.n();
  const int k = host.k();

  RootedTree rt = root_tree(t, 0);
  int top = pick_subtree_root(rt, n, cfg.nu * n, cfg.nu * n * t.max_degree());
  if (top < 0) return fail_stage(tr, fail, "subtree", "tree has no proper subtree");
  std::vector<int> verts = subtree_vertices(rt, top);
  note_stage(tr, "subtree", "ok", nullptr,
             {{"root", top}, {"size", static_cast<long long>(verts.size())}});

  std::vector<AbsorbingTuple> family =
      sample_absorbing_family(host, cfg.family_target, Rng::derive(sa, 2), VertexSet());
  note_stage(tr, "family", "ok", nullptr, {{"tuples", static_cast<long long>(family.size())}});

  // Immerse as many tuple coordinates as fit, shedding tuples on failure.
  std::optional<ImmersionResult> ir;
  int kept = 0;
  std::string imm_err = "no immersion attempt ran";
  for (int m = static_cast<int>(family.size()); m >= 0; --m) {
    ImmersionTask task;
    for (int i = 0; i < m; ++i)
      for (const Diamond& dm : family[static_cast<std::size_t>(i)].diamonds)
        task.items.push_back(tuple_coordinate_item(dm));
    ImmersionResult r =
        immerse_embed(host, x, verts, top, task, nullptr, cfg.immersion_distance,
                      cfg.stage_restarts, Rng::derive(sa, 30 + static_cast<std::uint64_t>(m)),
                      host.vertex_mask());
    if (r.embedding) {
      ir = std::move(r);
      kept = m;
      break;
    }
    imm_err = r.error;
  }
  if (!ir) return fail_stage(tr, fail, "immerse", imm_err);
  PartialEmbedding pe = *ir->embedding;
  note_stage(tr, "immerse", "ok", &pe,
             {{"tuples_kept", kept}, {"restarts", ir->restarts_used}});

  std::set<int> inside(verts.begin(), verts.end());
  std::vector<int> cand = prunable_leaves(t, x, pe, inside);
  int K = std::min({kept, std::max(1, static_cast<int>(cfg.alpha * n)),
                    static_cast<int>(cand.size())});
  std::vector<int> skip(cand.begin(), cand.begin() + K);
  note_stage(tr, "prune", "ok", &pe,
             {{"pruned", K}, {"candidates", static_cast<long long>(cand.size())}});

  // Size the reservoir to the cover's connector demand. Absorption later
  // accounts for exactly K*(k-1) free vertices, which caps the slack the
  // greedy cover can afford to fence off; d stays a search knob for the
  // caller and is recorded below for the trace.
  const int conn_need =
      count_connectors(t, x, pe, skip, rt.root, std::min(cfg.part_size, n), -1);
  const long long res_lo = static_cast<long long>(conn_need) * (k - 2);
  const long long res_hi = res_lo + static_cast<long long>(K) * (k - 1);
  long long res_size = static_cast<long long>(
      std::ceil(cfg.reservoir_frac * static_cast<double>(host.n())));
  res_size = std::clamp(res_size, res_lo, res_hi);
  VertexSet spare;
  for (int i = 0; i < kept; ++i) spare = spare | family[static_cast<std::size_t>(i)].vertices();
  VertexSet R =
      sample_reservoir_verts(host, pe.image(), spare, res_size, Rng(Rng::derive(sa, 1)));
  if (static_cast<long long>(R.count()) < res_size)
    return fail_stage(tr, fail, "reservoir",
                      "free pool cannot supply " + std::to_string(res_size) +
                          " reservoir vertices",
                      &pe);
  note_stage(tr, "reservoir", "ok", &pe,
             {{"size", res_size}, {"connectors", conn_need}, {"depth", d}});

  AlmostResult am = almost_embed(pe, t, rt.root, skip, R, cfg, Rng::derive(sa, 4));
  if (!am.embedding) return fail_stage(tr, fail, "almost", am.error, &pe);
  pe = *am.embedding;
  note_stage(tr, "almost", "ok", &pe,
             {{"connectors", am.connector_count},
              {"parts", static_cast<long long>(am.partition.parts.size())},
              {"cycles", am.cycle_count}});

  if (K > 0) {
    AbsorbPool pool;
    pool.tuples.assign(family.begin(), family.begin() + kept);
    AbsorbResult ar = absorb_loop(pe, pool, skip, nullptr, Rng::derive(sa, 5));
    if (!ar.invariants_ok)
      throw std::logic_error("absorption invariant breached: " + ar.error);
    if (!ar.embedding) {
      fail.absorb = ar.failure;
      return fail_stage(tr, fail, "absorb",
                        ar.error.empty() ? "absorption failed" : ar.error, &pe);
    }
    pe = *ar.embedding;
    for (const AbsorbStep& st : ar.steps)
      tr.switch_log.push_back("absorb edge " + std::to_string(st.edge_id) +
                              (st.used_parity ? " via parity absorber " : " via tuple ") +
                              std::to_string(st.pool_index) + " at host " +
                              std::to_string(st.anchor_image));
    note_stage(tr, "absorb", "ok", &pe, {{"steps", static_cast<long long>(ar.steps.size())}});
  }

  if (!pe.complete())
    throw std::logic_error("pipeline accounting error: embedding incomplete after absorption");
  std::string why;
  if (!verify_spanning_embedding(pe, &why))
    throw std::logic_error("spanning audit failed: " + why);
  note_stage(tr, "verify", "ok", &pe);
  return pe;
}

// The separable branch of the pair-degree pipeline. `part` carries the two
// sides of the separated diamond graph.
std::optional<PartialEmbedding> split_attempt(const Hypergraph& host, const ExpansionTree& x,
                                              const Tree& t, int k, const Bipartition& part,
                                              const Config& cfg, std::uint64_t sa,
                                              PipelineTrace& tr, AttemptFail& fail) {
  const int n = t.n();

  // Step 1: immersion subtree plus an even-degree star vertex outside it.
  RootedTree rt = root_tree(t, 0);
  std::vector<int> vcands;
  for (int v = 0; v < n; ++v)
    if (v != rt.root && rt.subtree_size[static_cast<std::size_t>(v)] >= 2) vcands.push_back(v);
  double lo = cfg.nu * n;
  double hi = cfg.nu * n * t.max_degree();
  std::stable_sort(vcands.begin(), vcands.end(), [&](int a, int b) {
    auto sz = [&](int v) { return rt.subtree_size[static_cast<std::size_t>(v)]; };
    bool wa = sz(a) >= lo && sz(a) <= hi;
    bool wb = sz(b) >= lo && sz(b) <= hi;
    if (wa != wb) return wa;
    if (wa) return rt.depth[static_cast<std::size_t>(a)] > rt.depth[static_cast<std::size_t>(b)];
    return sz(a) > sz(b);
  });

  int v_top = -1, u_star = -1;
  for (int v : vcands) {
    int xv = rt.parent[static_cast<std::size_t>(v)];
    std::vector<char> in_sub(static_cast<std::size_t>(n), 0);
    for (int w : subtree_vertices(rt, v)) in_sub[static_cast<std::size_t>(w)] = 1;
    std::set<int> anc;
    for (int w = xv; w >= 0; w = rt.parent[static_cast<std::size_t>(w)]) anc.insert(w);
    int best = -1;
    bool best_anc = false;
    for (int w = 0; w < n; ++w) {
      if (in_sub[static_cast<std::size_t>(w)] || w == xv) continue;
      if (t.degree(w) % 2 != 0) continue;
      bool is_anc = anc.count(w) > 0;
      if (best < 0 || (is_anc && !best_anc) ||
          (is_anc == best_anc &&
           rt.depth[static_cast<std::size_t>(w)] > rt.depth[static_cast<std::size_t>(best)])) {
        best = w;
        best_anc = is_anc;
      }
    }
    if (best >= 0) {
      v_top = v;
      u_star = best;
      break;
    }
  }
  if (v_top < 0) {
    // No subtree/star split exists in this tree shape; the uniform route
    // still applies, just without the anchored endgame.
    note_stage(tr, "split", "no admissible split; uniform route", nullptr);
    return core_attempt(host, x, t, 2, cfg, Rng::derive(sa, 99), tr, fail);
  }
  const int xv = rt.parent[static_cast<std::size_t>(v_top)];
  const int tstar = t.degree(u_star);
  std::vector<int> T0v = subtree_vertices(rt, v_top);
  note_stage(tr, "split", "ok", nullptr,
             {{"subtree_root", v_top},
              {"subtree_size", static_cast<long long>(T0v.size())},
              {"star_vertex", u_star},
              {"star_degree", tstar}});

  // Step 2: anchor pair. The star half hosts u_star's edges directly; the
  // chain halves become immersion items inside the subtree.
  std::optional<Gadget> Lopt =
      build_anchor_gadget(host, part, tstar, Rng::derive(sa, 2), VertexSet(), cfg.chain_max_len);
  if (!Lopt)
    return fail_stage(tr, fail, "anchor",
                      "no anchor gadget of star size " + std::to_string(tstar));
  const Gadget L = *Lopt;

  PartialEmbedding pe(host, x);
  std::vector<HalfComponent> half1 = half_components(L, 1);
  const HalfComponent* star = nullptr;
  for (const HalfComponent& c : half1)
    if (c.is_star) star = &c;
  if (!star) return fail_stage(tr, fail, "anchor", "anchor gadget lacks its star half");
  std::map<std::pair<int, int>, int> eid = base_edge_ids(x);
  std::vector<int> nbs = t.neighbors(u_star);
  std::sort(nbs.begin(), nbs.end());
  if (nbs.size() != star->edges.size())
    return fail_stage(tr, fail, "anchor", "anchor star size mismatch");
  pe.assign(u_star, star->center);
  for (std::size_t j = 0; j < nbs.size(); ++j) {
    pe.assign(nbs[j], star->leaves[j]);
    VertexSet ints = star->edges[j];
    ints.reset(star->center);
    ints.reset(star->leaves[j]);
    std::vector<int> iv = ints.to_vector();
    int e = eid.at({std::min(u_star, nbs[j]), std::max(u_star, nbs[j])});
    const std::vector<int>& fresh = x.fresh[static_cast<std::size_t>(e)];
    for (std::size_t i = 0; i < fresh.size(); ++i) pe.assign(fresh[i], iv[i]);
    pe.mark_edge(e);
  }
  std::string vwhy;
  if (!pe.validate(&vwhy, false))
    throw std::logic_error("anchor star placement invalid: " + vwhy);
  const VertexSet U0 = L.x2;
  std::vector<ImmersionItem> a0;
  for (const HalfComponent& c : half1)
    if (!c.is_star) a0.push_back(item_from_component(c));
  note_stage(tr, "anchor", "ok", &pe,
             {{"chain_items", static_cast<long long>(a0.size())},
              {"boundary", L.boundary_size()}});

  // Step 3: absorption furniture, sized by what the endgame can pay for.
  // The pruning budget K is fixed first because every reserved balancer
  // boundary and the spare anchor must fit inside K*(k-1) free vertices.
  std::set<int> inside(T0v.begin(), T0v.end());
  std::vector<int> cand = prunable_leaves(t, x, pe, inside);
  if (cand.empty())
    return fail_stage(tr, fail, "prune", "no prunable leaf outside the immersion subtree", &pe);
  const int K_target =
      std::min(std::max(1, static_cast<int>(cfg.alpha * n)), static_cast<int>(cand.size()));

  std::map<int, int> degc;
  for (int w : T0v) ++degc[t.degree(w)];
  int t_pool = degc.begin()->first;
  for (const auto& [dg, c] : degc)
    if (c > degc[t_pool]) t_pool = dg;

  VertexSet forb = L.vertices();
  std::vector<Gadget> pools =
      build_even_balancers(host, part, t_pool, 4, Rng::derive(sa, 3), forb, cfg.chain_max_len);
  for (const Gadget& g : pools) forb = forb | g.vertices();
  std::vector<AbsorbingTuple> family =
      sample_absorbing_family(host, cfg.family_target, Rng::derive(sa, 4), forb);
  note_stage(tr, "harvest", "ok", &pe,
             {{"pools", static_cast<long long>(pools.size())},
              {"tuples", static_cast<long long>(family.size())},
              {"pool_degree", t_pool}});

  Rng side_rng(Rng::derive(sa, 5));
  const int first_side = 1 + static_cast<int>(side_rng.below(2));
  auto side_of = [&](int i) { return i % 2 == 0 ? first_side : 3 - first_side; };
  auto opp_boundary = [](const Gadget& g, int side) { return side == 1 ? g.x2 : g.x1; };

  std::vector<int> spacings;
  for (int s : {cfg.immersion_distance, 3, 2})
    if (s >= 2 && (spacings.empty() || s < spacings.back())) spacings.push_back(s);

  std::optional<ImmersionResult> ir;
  int kept_m = 0, kept_p = 0, used_spacing = 0;
  std::string imm_err = "no immersion attempt ran";
  const int M = static_cast<int>(family.size());
  const int P = static_cast<int>(pools.size());
  for (int sp : spacings) {
    for (int m = M; m >= 0 && !ir; --m) {
      const int cap = (std::min(K_target, m + 1) * (k - 1) - 1) / 2;
      for (int p = std::min(P, cap); p >= 0; --p) {
        ImmersionTask task;
        task.items = a0;
        VertexSet reserved_opp;
        for (int i = 0; i < p; ++i) {
          std::vector<ImmersionItem> its =
              items_from_gadget_half(pools[static_cast<std::size_t>(i)], side_of(i));
          task.items.insert(task.items.end(), its.begin(), its.end());
          reserved_opp = reserved_opp | opp_boundary(pools[static_cast<std::size_t>(i)], side_of(i));
        }
        for (int i = 0; i < m; ++i)
          for (const Diamond& dm : family[static_cast<std::size_t>(i)].diamonds)
            task.items.push_back(tuple_coordinate_item(dm));
        VertexSet allow = host.vertex_mask().minus(U0).minus(reserved_opp);
        ImmersionResult r = immerse_embed(
            host, x, T0v, v_top, task, &pe, sp, cfg.stage_restarts,
            Rng::derive(sa, 600 + 37ull * static_cast<std::uint64_t>(sp) +
                                7ull * static_cast<std::uint64_t>(m) +
                                static_cast<std::uint64_t>(p)),
            allow);
        if (r.embedding) {
          ir = std::move(r);
          kept_m = m;
          kept_p = p;
          used_spacing = sp;
          break;
        }
        imm_err = r.error;
      }
    }
    if (ir) break;
  }
  if (!ir) return fail_stage(tr, fail, "immerse", imm_err, &pe);
  pe = *ir->embedding;
  note_stage(tr, "immerse", "ok", &pe,
             {{"tuples_kept", kept_m},
              {"pools_kept", kept_p},
              {"spacing", used_spacing},
              {"restarts", ir->restarts_used}});

  std::vector<BalanceItem> bal;
  VertexSet reserved_opp;
  for (int i = 0; i < kept_p; ++i) {
    bal.push_back({pools[static_cast<std::size_t>(i)], side_of(i), false});
    reserved_opp = reserved_opp | opp_boundary(pools[static_cast<std::size_t>(i)], side_of(i));
  }
  const int K = std::min(K_target, kept_m + 1);
  std::vector<int> skip(cand.begin(), cand.begin() + K);
  note_stage(tr, "prune", "ok", &pe,
             {{"pruned", K}, {"candidates", static_cast<long long>(cand.size())}});

  // Reservoir sized to the connector demand, with the subtree's parent edge
  // always routed as a connector. The free budget K*(k-1) must also pay for
  // the spare anchor boundary and every reserved balancer boundary, which
  // caps the slack.
  const int e0 = eid.at({std::min(xv, v_top), std::max(xv, v_top)});
  const int conn_need = count_connectors(t, x, pe, skip, 0, std::min(cfg.part_size, n), e0);
  const long long res_lo = static_cast<long long>(conn_need) * (k - 2);
  const long long reserved_free = static_cast<long long>((U0 | reserved_opp).count());
  const long long res_hi =
      res_lo + static_cast<long long>(K) * (k - 1) - reserved_free;
  if (res_hi < res_lo)
    return fail_stage(tr, fail, "reservoir",
                      "free budget of " + std::to_string(K * (k - 1)) +
                          " cannot cover the reserved boundaries",
                      &pe);
  long long res_size = static_cast<long long>(
      std::ceil(cfg.reservoir_frac * static_cast<double>(host.n())));
  res_size = std::clamp(res_size, res_lo, res_hi);
  VertexSet spare;
  for (int i = 0; i < kept_m; ++i)
    spare = spare | family[static_cast<std::size_t>(i)].vertices();
  VertexSet R = sample_reservoir_verts(host, pe.image() | U0 | reserved_opp, spare, res_size,
                                       Rng(Rng::derive(sa, 1)));
  if (static_cast<long long>(R.count()) < res_size)
    return fail_stage(tr, fail, "reservoir",
                      "free pool cannot supply " + std::to_string(res_size) +
                          " reservoir vertices",
                      &pe);
  note_stage(tr, "reservoir", "ok", &pe, {{"size", res_size}, {"connectors", conn_need}});

  // Step 4: sliced greedy cover; the subtree joins the rest through its
  // parent edge routed via the reservoir.
  SliceOutcome so =
      sliced_almost(pe, t, R, U0 | reserved_opp, skip, e0, cfg, Rng::derive(sa, 6));
  if (!so.embedding) return fail_stage(tr, fail, "almost", so.error, &pe);
  pe = *so.embedding;
  note_stage(tr, "almost", so.sliced ? "ok" : "ok (pooled fallback)", &pe,
             {{"sliced", so.sliced ? 1 : 0},
              {"trials", so.trials},
              {"parts", so.parts_used},
              {"connectors", so.connector_count}});

  // Step 5: balancing flips toward an even free split, sparing the anchor.
  const long long window = 2 + ((k - 1) % 2);
  BalanceResult br = balance_leftover(pe, bal, part, window, U0);
  for (const auto& entry : br.ledger) tr.parity_ledger.push_back(entry);
  if (!br.embedding) return fail_stage(tr, fail, "balance", br.error, &pe);
  pe = *br.embedding;
  if (br.flips > 0)
    tr.switch_log.push_back("balance: " + std::to_string(br.flips) + " flip(s)");
  note_stage(tr, "balance", "ok", &pe,
             {{"flips", br.flips}, {"pool", static_cast<long long>(bal.size())}});

  // Step 6: absorb all pruned leaves but the last, steering each step's
  // consumed split toward balance and sparing the anchor.
  std::vector<char> retired(static_cast<std::size_t>(kept_m), 0);
  if (K >= 2) {
    AbsorbPool pool;
    pool.tuples.assign(family.begin(), family.begin() + kept_m);
    std::vector<int> firstk(skip.begin(), skip.end() - 1);
    AbsorbOptions opts;
    opts.z_rule = true;
    opts.exclude = U0;
    AbsorbResult ar = absorb_loop(pe, pool, firstk, &part, Rng::derive(sa, 7), opts);
    if (!ar.invariants_ok)
      throw std::logic_error("absorption invariant breached: " + ar.error);
    if (!ar.embedding) {
      fail.absorb = ar.failure;
      return fail_stage(tr, fail, "absorb",
                        ar.error.empty() ? "absorption failed" : ar.error, &pe);
    }
    pe = *ar.embedding;
    for (const AbsorbStep& st : ar.steps) {
      if (!st.used_parity && st.pool_index >= 0)
        retired[static_cast<std::size_t>(st.pool_index)] = 1;
      tr.switch_log.push_back("absorb edge " + std::to_string(st.edge_id) + " via tuple " +
                              std::to_string(st.pool_index) + " at host " +
                              std::to_string(st.anchor_image));
    }
    for (const auto& entry : ar.splits) tr.parity_ledger.push_back(entry);
    note_stage(tr, "absorb", "ok", &pe, {{"steps", static_cast<long long>(ar.steps.size())}});
  }
  std::vector<AbsorbingTuple> live;
  for (int i = 0; i < kept_m; ++i)
    if (!retired[static_cast<std::size_t>(i)]) live.push_back(family[static_cast<std::size_t>(i)]);

  // Step 7: the last leaf must consume every remaining free vertex. Close
  // directly, else absorb; if neither fits, swap the anchor pair (freeing
  // x1, covering x2, flipping the free split's side) and try once more.
  const int e_last = skip.back();
  auto [la, lb] = x.base_edges[static_cast<std::size_t>(e_last)];
  bool closed = false;
  for (int round = 0; round < 2 && !closed; ++round) {
    VertexSet freev = host.vertex_mask().minus(pe.image());
    if (static_cast<int>(freev.count()) != k - 1)
      return fail_stage(tr, fail, "final",
                        "free budget off: " + std::to_string(freev.count()) + " free, expected " +
                            std::to_string(k - 1),
                        &pe);
    const int hp = pe.to_host(la) >= 0 ? pe.to_host(la) : pe.to_host(lb);
    VertexSet mask = freev;
    mask.set(hp);
    if (host.has_edge(mask)) {
      lay_edge_onto(pe, e_last, freev.to_vector());
      tr.switch_log.push_back(round == 0 ? "final: direct close"
                                         : "final: direct close after anchor flip");
      closed = true;
      break;
    }
    if (!live.empty()) {
      AbsorbPool pool2;
      pool2.tuples = live;
      AbsorbResult ar2 = absorb_loop(pe, pool2, {e_last}, &part,
                                     Rng::derive(sa, 8 + static_cast<std::uint64_t>(round)),
                                     AbsorbOptions{});
      if (!ar2.invariants_ok)
        throw std::logic_error("absorption invariant breached: " + ar2.error);
      if (ar2.embedding) {
        pe = *ar2.embedding;
        for (const auto& entry : ar2.splits) tr.parity_ledger.push_back(entry);
        tr.switch_log.push_back(round == 0 ? "final: absorbed"
                                           : "final: absorbed after anchor flip");
        closed = true;
        break;
      }
    }
    if (round == 0) {
      try {
        Switch sw = switch_from_gadget_half(pe, L, 1);
        pe = apply_switch(pe, sw);
        tr.switch_log.push_back("anchor flip 1->2");
      } catch (const std::invalid_argument& ex) {
        return fail_stage(tr, fail, "final",
                          std::string("anchor flip unavailable: ") + ex.what(), &pe);
      }
    }
  }
  if (!closed) {
    VertexSet freev = host.vertex_mask().minus(pe.image());
    const int hp = pe.to_host(la) >= 0 ? pe.to_host(la) : pe.to_host(lb);
    std::string msg = "last leaf unabsorbable: free split A=" +
                      std::to_string((freev & part.a).count()) + " B=" +
                      std::to_string((freev & part.b).count()) + ", parent pi=" +
                      std::to_string(pi_of(host, part, hp));
    return fail_stage(tr, fail, "final", msg, &pe);
  }

  if (!pe.complete())
    throw std::logic_error("pipeline accounting error: embedding incomplete after the endgame");
  std::string why;
  if (!verify_spanning_embedding(pe, &why))
    throw std::logic_error("spanning audit failed: " + why);
  note_stage(tr, "verify", "ok", &pe);
  return pe;
}

}  // namespace

bool verify_spanning_embedding(const PartialEmbedding& pe, std::string* why) {
  const Hypergraph& h = pe.host();
  const ExpansionTree& x = pe.target();
  const int nt = x.target.n();
  if (h.n() != nt) {
    if (why) *why = "host and expansion orders differ";
    return false;
  }
  std::vector<int> owner(static_cast<std::size_t>(h.n()), -1);
  for (int tv = 0; tv < nt; ++tv) {
    int hv = pe.to_host(tv);
    if (hv < 0) {
      if (why) *why = "target vertex " + std::to_string(tv) + " is unmapped";
      return false;
    }
    if (owner[static_cast<std::size_t>(hv)] >= 0) {
      if (why)
        *why = "target vertices " + std::to_string(owner[static_cast<std::size_t>(hv)]) +
               " and " + std::to_string(tv) + " share host vertex " + std::to_string(hv);
      return false;
    }
    owner[static_cast<std::size_t>(hv)] = tv;
  }
  for (int e = 0; e < static_cast<int>(x.base_edges.size()); ++e) {
    auto [a, b] = x.base_edges[static_cast<std::size_t>(e)];
    VertexSet mask;
    mask.set(pe.to_host(a));
    mask.set(pe.to_host(b));
    for (int f : x.fresh[static_cast<std::size_t>(e)]) mask.set(pe.to_host(f));
    if (static_cast<int>(mask.count()) != h.k()) {
      if (why) *why = "edge " + std::to_string(e) + " image is degenerate";
      return false;
    }
    if (!h.has_edge(mask)) {
      if (why) *why = "edge " + std::to_string(e) + " image is not a host edge";
      return false;
    }
    if (!pe.edge_embedded(e)) {
      if (why) *why = "edge " + std::to_string(e) + " is not marked embedded";
      return false;
    }
  }
  return true;
}

BalanceResult balance_leftover(const PartialEmbedding& start, std::vector<BalanceItem>& pool,
                               const Bipartition& part, long long window,
                               const VertexSet& exclude) {
  BalanceResult res;
  PartialEmbedding pe = start;
  auto split_of = [&](const PartialEmbedding& q) {
    VertexSet freev = q.host().vertex_mask().minus(q.image()).minus(exclude);
    return std::pair<long long, long long>{(freev & part.a).count(), (freev & part.b).count()};
  };
  std::pair<long long, long long> split = split_of(pe);
  res.ledger.push_back(split);
  long long diff = split.first - split.second;
  while (std::llabs(diff) > window) {
    int best = -1;
    long long best_new = diff;
    for (int i = 0; i < static_cast<int>(pool.size()); ++i) {
      const BalanceItem& item = pool[static_cast<std::size_t>(i)];
      if (item.used) continue;
      const Gadget& g = item.gadget;
      const VertexSet& from_x = item.side == 1 ? g.x1 : g.x2;
      const VertexSet& to_x = item.side == 1 ? g.x2 : g.x1;
      if (to_x.intersects(exclude) || to_x.intersects(pe.image())) continue;
      long long da = (from_x & part.a).count() - (to_x & part.a).count();
      long long db = (from_x & part.b).count() - (to_x & part.b).count();
      long long nd = diff + da - db;
      if (std::llabs(nd) < std::llabs(best_new)) {
        best = i;
        best_new = nd;
      }
    }
    if (best < 0) {
      res.error = "balance pool exhausted at free difference " + std::to_string(diff);
      return res;
    }
    BalanceItem& chosen = pool[static_cast<std::size_t>(best)];
    try {
      Switch sw = switch_from_gadget_half(pe, chosen.gadget, chosen.side);
      pe = apply_switch(pe, sw);
    } catch (const std::invalid_argument&) {
      chosen.used = true;  // stale: some rider moved away since immersion
      continue;
    }
    chosen.used = true;
    ++res.flips;
    split = split_of(pe);
    res.ledger.push_back(split);
    diff = split.first - split.second;
  }
  res.embedding = std::move(pe);
  return res;
}

PipelineResult pipeline_embed_thm1(const Hypergraph& host, const ExpansionTree& x, int d,
                                   const Config& cfg, std::uint64_t seed) {
  const int k = x.k;
  if (k < 3) throw std::invalid_argument("pipelines need k >= 3");
  if (host.k() != k) throw std::invalid_argument("host uniformity differs from the expansion");
  if (d < 1 || d > k - 1) throw std::invalid_argument("codegree depth must lie in [1, k-1]");
  if (host.n() != x.target.n())
    throw std::invalid_argument("host order must match the expansion order");
  Tree t(x.n_base, x.base_edges);

  PipelineResult res;
  for (int a = 0; a < std::max(1, cfg.pipeline_attempts); ++a) {
    PipelineTrace tr;
    tr.branch = "direct";
    AttemptFail f;
    std::optional<PartialEmbedding> got =
        core_attempt(host, x, t, d, cfg, Rng::derive(seed, 1 + static_cast<std::uint64_t>(a)),
                     tr, f);
    res.trace = std::move(tr);
    res.attempts_used = a + 1;
    if (got) {
      res.embedding = std::move(got);
      res.failure.reset();
      return res;
    }
    res.failure = FailureReport{f.stage, f.message, f.absorb};
  }
  return res;
}

PipelineResult pipeline_embed_thm2(const Hypergraph& host, const ExpansionTree& x,
                                   const Config& cfg, std::uint64_t seed) {
  const int k = x.k;
  if (k < 3) throw std::invalid_argument("pipelines need k >= 3");
  if (host.k() != k) throw std::invalid_argument("host uniformity differs from the expansion");
  if (host.n() != x.target.n())
    throw std::invalid_argument("host order must match the expansion order");
  Tree t(x.n_base, x.base_edges);
  if (!classify_degrees(t).has_even_vertex)
    throw std::invalid_argument("base tree needs a vertex of even degree");

  auto to_rat = [](double v) { return Rational(std::llround(v * 1000.0), 1000); };
  DiamondGraph dg = diamond_graph(host, to_rat(cfg.gamma));
  SeparationResult sep = find_separation(dg, to_rat(cfg.mu), cfg.exact_separation_cap,
                                         Rng::derive(seed, 9001), cfg.part_restarts);

  StageRecord sep_rec;
  sep_rec.stage = "separation";
  sep_rec.status = sep.separable ? "separable" : "not separable";
  sep_rec.counts = {{"diamond_edges", static_cast<long long>(dg.edges.size())},
                    {"cross", sep.cross_edges},
                    {"side_a", sep.side_a.count()},
                    {"side_b", sep.side_b.count()},
                    {"exact", sep.exact ? 1 : 0}};

  Bipartition part;
  part.a = sep.side_a;
  part.b = sep.side_b;

  PipelineResult res;
  for (int a = 0; a < std::max(1, cfg.pipeline_attempts); ++a) {
    PipelineTrace tr;
    tr.branch = sep.separable ? "separable" : "inseparable";
    tr.stages.push_back(sep_rec);
    AttemptFail f;
    std::uint64_t sa = Rng::derive(seed, 1000 + static_cast<std::uint64_t>(a));
    std::optional<PartialEmbedding> got =
        sep.separable ? split_attempt(host, x, t, k, part, cfg, sa, tr, f)
                      : core_attempt(host, x, t, 2, cfg, sa, tr, f);
    res.trace = std::move(tr);
    res.attempts_used = a + 1;
    if (got) {
      res.embedding = std::move(got);
      res.failure.reset();
      return res;
    }
    res.failure = FailureReport{f.stage, f.message, f.absorb};
  }
  return res;
}

}  // namespace hxt
