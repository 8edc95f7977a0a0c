#include "hxt/absorb.hpp"

#include <algorithm>

#include "hxt/immersion.hpp"
#include "hxt/rng.hpp"

namespace hxt {

std::vector<int> AbsorbingTuple::tips() const {
  std::vector<int> out;
  for (const Diamond& d : diamonds) out.push_back(d.tip_v);
  return out;
}

std::vector<int> AbsorbingTuple::spares() const {
  std::vector<int> out;
  for (const Diamond& d : diamonds) out.push_back(d.tip_u);
  return out;
}

VertexSet AbsorbingTuple::vertices() const {
  VertexSet s = central;
  for (const Diamond& d : diamonds) s |= d.vertices();
  return s;
}

bool verify_absorbing_tuple(const Hypergraph& h, const AbsorbingTuple& t, std::string* why) {
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  if (t.w < 0 || t.w >= h.n()) return fail("central vertex out of range");
  if (static_cast<int>(t.diamonds.size()) != h.k() - 1)
    return fail("coordinate count must be k-1");
  if (!h.has_edge(t.central)) return fail("central edge missing from the host");
  VertexSet tips_mask;
  for (const Diamond& d : t.diamonds) tips_mask.set(d.tip_v);
  VertexSet expect = tips_mask;
  expect.set(t.w);
  if (!(t.central == expect)) return fail("central edge does not match w plus the tips");
  VertexSet seen;
  for (const Diamond& d : t.diamonds) {
    std::string dwhy;
    if (!verify_diamond(h, d, &dwhy)) return fail("coordinate diamond invalid: " + dwhy);
    VertexSet dv = d.vertices();
    if (dv.intersects(seen)) return fail("coordinate diamonds overlap");
    seen |= dv;
    VertexSet hit = dv & t.central;
    VertexSet tip_only;
    tip_only.set(d.tip_v);
    if (!(hit == tip_only)) return fail("a diamond touches the central edge beyond its tip");
  }
  return true;
}

std::vector<AbsorbingTuple> sample_absorbing_family(const Hypergraph& h, int count_target,
                                                    std::uint64_t seed,
                                                    const VertexSet& forbidden) {
  std::vector<AbsorbingTuple> out;
  Rng rng(seed);
  std::vector<int> edge_order(static_cast<std::size_t>(h.edge_count()));
  for (int i = 0; i < h.edge_count(); ++i) edge_order[static_cast<std::size_t>(i)] = i;
  rng.shuffle(edge_order);

  VertexSet used = forbidden;
  for (int eid : edge_order) {
    if (static_cast<int>(out.size()) >= count_target) break;
    if (h.edge_mask(eid).intersects(used)) continue;
    std::vector<int> members = h.edge(eid);
    rng.shuffle(members);
    for (int w : members) {
      AbsorbingTuple t;
      t.w = w;
      t.central = h.edge_mask(eid);
      VertexSet local = used | t.central;
      bool ok = true;
      for (int v : h.edge(eid)) {
        if (v == w) continue;
        std::vector<int> around(h.incident(v).begin(), h.incident(v).end());
        rng.shuffle(around);
        bool found = false;
        for (int de : around) {
          VertexSet core = h.edge_mask(de);
          core.reset(v);
          if (core.intersects(local)) continue;
          // Spare tip: any free vertex closing the second half.
          std::vector<int> spare_opts;
          for (int u = 0; u < h.n(); ++u) {
            if (u == v || local.test(u) || core.test(u)) continue;
            VertexSet other = core;
            other.set(u);
            if (h.has_edge(other)) spare_opts.push_back(u);
          }
          if (spare_opts.empty()) continue;
          int spare = spare_opts[static_cast<std::size_t>(rng.below(spare_opts.size()))];
          Diamond d;
          d.tip_u = spare;
          d.tip_v = v;
          d.shared = core;
          t.diamonds.push_back(d);
          local |= d.vertices();
          found = true;
          break;
        }
        if (!found) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      std::sort(t.diamonds.begin(), t.diamonds.end(),
                [](const Diamond& a, const Diamond& b) { return a.tip_v < b.tip_v; });
      std::string why;
      if (!verify_absorbing_tuple(h, t, &why))
        throw std::logic_error("sampled tuple failed verification: " + why);
      used |= t.vertices();
      out.push_back(std::move(t));
      break;
    }
  }
  return out;
}

namespace {

// Backtracking assignment of the z's onto coordinates; candidate lists are
// tiny, so exhaustive search is fine.
// When a_target >= 0, exactly that many picks must land in part->a.
bool sdr_assign_counted(const std::vector<std::vector<int>>& options, std::size_t at,
                        std::vector<int>& pick, const Bipartition* part, int a_target,
                        int a_so_far) {
  if (a_target >= 0) {
    int remaining = static_cast<int>(options.size() - at);
    if (a_so_far > a_target || a_so_far + remaining < a_target) return false;
  }
  if (at == options.size()) return a_target < 0 || a_so_far == a_target;
  for (std::size_t j = 0; j < options[at].size(); ++j) {
    int z = options[at][j];
    bool clash = false;
    for (std::size_t i = 0; i < at; ++i)
      if (pick[i] == z) clash = true;
    if (clash) continue;
    pick[at] = z;
    int a_next = a_so_far + ((a_target >= 0 && part && part->a.test(z)) ? 1 : 0);
    if (sdr_assign_counted(options, at + 1, pick, part, a_target, a_next)) return true;
  }
  pick[at] = -1;
  return false;
}

std::optional<std::vector<int>> match_z(const Hypergraph& h, const AbsorbingTuple& t,
                                        const std::vector<int>& zs,
                                        const Bipartition* part = nullptr,
                                        int a_target = -1) {
  std::vector<std::vector<int>> options(t.diamonds.size());
  VertexSet tv = t.vertices();
  for (std::size_t i = 0; i < t.diamonds.size(); ++i) {
    const Diamond& d = t.diamonds[i];
    for (int z : zs) {
      if (tv.test(z) && z != d.tip_u) continue;
      VertexSet e = d.shared;
      e.set(z);
      if (e.count() != h.k()) continue;
      if (h.has_edge(e)) options[i].push_back(z);
    }
    // Prefer the tuple's own spare so engineered pools stay self-contained.
    std::stable_partition(options[i].begin(), options[i].end(),
                          [&](int z) { return z == d.tip_u; });
    if (options[i].empty()) return std::nullopt;
  }
  std::vector<int> pick(options.size(), -1);
  if (!sdr_assign_counted(options, 0, pick, part, a_target, 0)) return std::nullopt;
  return pick;
}

}  // namespace

bool tuple_can_absorb(const Hypergraph& h, const AbsorbingTuple& t, int w,
                      const std::vector<int>& z) {
  VertexSet rebound;
  rebound.set(w);
  for (const Diamond& d : t.diamonds) rebound.set(d.tip_v);
  if (rebound.count() != h.k()) return false;
  if (!h.has_edge(rebound)) return false;
  return match_z(h, t, z).has_value();
}

int count_absorbers(const Hypergraph& h, const std::vector<AbsorbingTuple>& family, int w,
                    const std::vector<int>& z) {
  int count = 0;
  for (const AbsorbingTuple& t : family)
    if (tuple_can_absorb(h, t, w, z)) ++count;
  return count;
}

CoverageReport coverage_report(const Hypergraph& h, const std::vector<AbsorbingTuple>& family,
                               int samples, std::uint64_t seed) {
  CoverageReport rep;
  rep.samples = samples;
  Rng rng(seed);
  long long total = 0;
  int min_count = -1;
  for (int s = 0; s < samples; ++s) {
    int w = static_cast<int>(rng.below(static_cast<std::uint64_t>(h.n())));
    VertexSet zset;
    while (static_cast<int>(zset.count()) < h.k() - 1) {
      int v = static_cast<int>(rng.below(static_cast<std::uint64_t>(h.n())));
      if (v != w) zset.set(v);
    }
    int c = count_absorbers(h, family, w, zset.to_vector());
    total += c;
    if (c == 0) ++rep.zero_samples;
    if (min_count < 0 || c < min_count) min_count = c;
  }
  rep.min_count = std::max(0, min_count);
  rep.avg_count = samples > 0 ? static_cast<double>(total) / samples : 0.0;
  return rep;
}

ImmersionItem tuple_coordinate_item(const Diamond& d) {
  ImmersionItem item;
  item.is_star = false;
  item.center = d.tip_v;
  item.edges.push_back(d.edge_v());
  return item;
}

namespace {

bool tuple_immersed(const PartialEmbedding& pe, const AbsorbingTuple& t, std::string* why) {
  for (const Diamond& d : t.diamonds)
    if (!verify_immersed(pe, tuple_coordinate_item(d), why)) return false;
  return true;
}

bool absorber_immersed(const PartialEmbedding& pe, const ParityAbsorber& pa, std::string* why) {
  for (const ImmersionItem& item : items_from_gadget_half(pa.gadget, 2))
    if (!verify_immersed(pe, item, why)) return false;
  return true;
}

// The target edge must have exactly one base endpoint covered; returns that
// endpoint (parent) and the uncovered one (child).
bool leaf_roles(const PartialEmbedding& pe, int edge_id, int* parent, int* child,
                std::string* msg) {
  const ExpansionTree& x = pe.target();
  auto [a, b] = x.base_edges[static_cast<std::size_t>(edge_id)];
  bool am = pe.to_host(a) >= 0;
  bool bm = pe.to_host(b) >= 0;
  if (am == bm) {
    *msg = am ? "both endpoints already covered" : "neither endpoint covered";
    return false;
  }
  *parent = am ? a : b;
  *child = am ? b : a;
  return true;
}

void lay_edge(PartialEmbedding& pe, int edge_id, int child, const std::vector<int>& hosts) {
  const ExpansionTree& x = pe.target();
  std::vector<int> sorted = hosts;
  std::sort(sorted.begin(), sorted.end());
  std::size_t at = 0;
  pe.assign(child, sorted[at++]);
  for (int f : x.fresh[static_cast<std::size_t>(edge_id)]) pe.assign(f, sorted[at++]);
  pe.mark_edge(edge_id);
}

}  // namespace

namespace {

// Step 6 tie-break: how many of the k-1 fresh vertices should come from A.
// From the scarcer side take at most half, as much as the parity of pi(w)
// allows; from the plentiful side at least half, as little as it allows.
int z_rule_target(int k, int pi, long long free_a, long long free_b) {
  if (free_a <= free_b) {
    int best = -1;
    for (int z = 0; z <= k - 1; ++z)
      if (z % 2 == pi % 2 && 2 * z <= k - 1) best = z;
    if (best >= 0) return best;
    for (int z = 0; z <= k - 1; ++z)
      if (z % 2 == pi % 2) return z;
  } else {
    for (int z = 0; z <= k - 1; ++z)
      if (z % 2 == pi % 2 && 2 * z >= k - 1) return z;
    for (int z = k - 1; z >= 0; --z)
      if (z % 2 == pi % 2) return z;
  }
  return -1;
}

}  // namespace

AbsorbResult absorb_loop(const PartialEmbedding& start, const AbsorbPool& pool,
                         const std::vector<int>& leaf_edges, const Bipartition* part,
                         std::uint64_t seed, const AbsorbOptions& opts) {
  AbsorbResult res;
  PartialEmbedding pe = start;
  const Hypergraph& h = pe.host();
  const int k = h.k();
  std::vector<char> tuple_used(pool.tuples.size(), 0);
  std::vector<char> parity_used(pool.parity.size(), 0);

  auto diagnose = [&](int edge_id, int hp, const std::string& message) {
    AbsorbFailure f;
    f.edge_id = edge_id;
    f.parent_image = hp;
    f.message = message;
    if (part) {
      VertexSet free = h.vertex_mask().minus(pe.image());
      f.free_a = static_cast<int>((free & part->a).count());
      f.free_b = static_cast<int>((free & part->b).count());
      f.parent_pi = pi_of(h, *part, hp);
    }
    res.failure = f;
    res.error = message;
  };

  int step_index = 0;
  for (int edge_id : leaf_edges) {
    if (pe.edge_embedded(edge_id)) continue;
    int parent = -1, child = -1;
    std::string msg;
    if (!leaf_roles(pe, edge_id, &parent, &child, &msg)) {
      res.error = "edge " + std::to_string(edge_id) + ": " + msg;
      return res;
    }
    int hp = pe.to_host(parent);
    int before = pe.image().count();

    std::vector<int> free_verts;
    for (int v = 0; v < h.n(); ++v)
      if (!pe.image().test(v) && !opts.exclude.test(v)) free_verts.push_back(v);

    int a_target = -1;
    if (opts.z_rule && part) {
      long long fa = 0, fb = 0;
      for (int v : free_verts) (part->a.test(v) ? fa : fb) += 1;
      a_target = z_rule_target(k, pi_of(h, *part, hp), fa, fb);
    }

    Rng rng(Rng::derive(seed, static_cast<std::uint64_t>(step_index)));
    std::vector<int> trial(pool.tuples.size());
    for (std::size_t i = 0; i < trial.size(); ++i) trial[i] = static_cast<int>(i);
    rng.shuffle(trial);

    bool delivered = false;
    for (int pass = 0; pass < 2 && !delivered; ++pass) {
      // First pass honors the balance rule; the second drops it rather than
      // letting an achievable step fail over the tie-break.
      if (pass == 1 && a_target < 0) break;
      int want_a = pass == 0 ? a_target : -1;
      for (int ti : trial) {
        if (tuple_used[static_cast<std::size_t>(ti)]) continue;
        const AbsorbingTuple& t = pool.tuples[static_cast<std::size_t>(ti)];
        VertexSet rebound;
        rebound.set(hp);
        for (const Diamond& d : t.diamonds) rebound.set(d.tip_v);
        if (rebound.count() != k) continue;
        if (!h.has_edge(rebound)) continue;
        std::string iwhy;
        if (!tuple_immersed(pe, t, &iwhy)) continue;
        std::optional<std::vector<int>> zs = match_z(h, t, free_verts, part, want_a);
        if (!zs) continue;

        Switch sw;
        sw.kind = Switch::Kind::Diamond;
        for (std::size_t i = 0; i < t.diamonds.size(); ++i) {
          VertexMove mv;
          mv.target_vertex = pe.to_target(t.diamonds[i].tip_v);
          mv.from_host = t.diamonds[i].tip_v;
          mv.to_host = (*zs)[i];
          sw.moves.push_back(mv);
        }
        pe = apply_switch(pe, sw);
        lay_edge(pe, edge_id, child, t.tips());
        tuple_used[static_cast<std::size_t>(ti)] = 1;

        AbsorbStep step;
        step.edge_id = edge_id;
        step.used_parity = false;
        step.pool_index = ti;
        step.anchor_image = hp;
        step.newly_covered = *zs;
        std::sort(step.newly_covered.begin(), step.newly_covered.end());
        res.steps.push_back(step);
        delivered = true;
        break;
      }
    }

    if (!delivered) {
      for (std::size_t pj = 0; pj < pool.parity.size(); ++pj) {
        if (parity_used[pj]) continue;
        const ParityAbsorber& pa = pool.parity[pj];
        if (pa.target.intersects(pe.image())) continue;
        if (pa.target.intersects(opts.exclude)) continue;
        VertexSet rebound = pa.witness;
        rebound.set(hp);
        if (rebound.count() != k) continue;
        if (!h.has_edge(rebound)) continue;
        std::string iwhy;
        if (!absorber_immersed(pe, pa, &iwhy)) continue;

        Switch sw = switch_from_gadget_half(pe, pa.gadget, 2);
        pe = apply_switch(pe, sw);
        lay_edge(pe, edge_id, child, pa.witness.to_vector());
        parity_used[pj] = 1;

        AbsorbStep step;
        step.edge_id = edge_id;
        step.used_parity = true;
        step.pool_index = static_cast<int>(pj);
        step.anchor_image = hp;
        step.newly_covered = pa.target.to_vector();
        res.steps.push_back(step);
        delivered = true;
        break;
      }
    }

    if (!delivered) {
      diagnose(edge_id, hp, "no pool item can deliver this edge");
      return res;
    }

    if (part) {
      VertexSet free_now = h.vertex_mask().minus(pe.image()).minus(opts.exclude);
      res.splits.emplace_back(static_cast<long long>((free_now & part->a).count()),
                              static_cast<long long>((free_now & part->b).count()));
    }

    // Per-step ledger: image grew by exactly k-1 fresh vertices, one pool
    // item retired, and everything unretired is still switch-ready.
    if (pe.image().count() != before + (k - 1)) {
      res.invariants_ok = false;
      res.error = "image did not grow by k-1";
      return res;
    }
    std::string vwhy;
    for (std::size_t i = 0; i < pool.tuples.size(); ++i)
      if (!tuple_used[i] && !tuple_immersed(pe, pool.tuples[i], &vwhy)) {
        res.invariants_ok = false;
        res.error = "a live tuple lost its immersion: " + vwhy;
        return res;
      }
    for (std::size_t i = 0; i < pool.parity.size(); ++i)
      if (!parity_used[i] && !absorber_immersed(pe, pool.parity[i], &vwhy)) {
        res.invariants_ok = false;
        res.error = "a live absorber lost its immersion: " + vwhy;
        return res;
      }
    ++step_index;
  }

  res.embedding = std::move(pe);
  return res;
}

}  // namespace hxt
