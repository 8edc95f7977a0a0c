#include "hxt/extremal.hpp"

#include <algorithm>
#include <functional>
#include <sstream>
#include <stdexcept>

#include "hxt/expansion.hpp"

namespace hxt {

namespace {

void for_each_ksubset(int n, int k, const std::function<void(const std::vector<int>&)>& fn) {
  std::vector<int> pick(static_cast<std::size_t>(k));
  std::function<void(int, int)> rec = [&](int start, int depth) {
    if (depth == k) {
      fn(pick);
      return;
    }
    for (int v = start; v <= n - (k - depth); ++v) {
      pick[static_cast<std::size_t>(depth)] = v;
      rec(v + 1, depth + 1);
    }
  };
  rec(0, 0);
}

}  // namespace

bool parity_split_exists(int N) {
  if (N < 2) return false;
  if (N % 2 == 1) return true;         // one of the two halves is even
  return (N / 2) % 2 == 0;             // equal halves, need N/2 even
}

ParityConstruction build_parity_construction(int N, int k) {
  if (k < 2) throw std::invalid_argument("uniformity must be at least 2");
  if (N < k) throw std::invalid_argument("order below uniformity");
  if (!parity_split_exists(N)) {
    std::ostringstream why;
    why << "no near-balanced split with an even first side exists at order " << N;
    throw std::invalid_argument(why.str());
  }
  int a = N / 2;
  if (N % 2 == 1 && a % 2 == 1) a = N - a;  // take the even half
  if (a % 2 == 1) throw std::logic_error("split selection failed");

  ParityConstruction out;
  out.parts.a = VertexSet::interval(0, a);
  out.parts.b = VertexSet::interval(a, N);
  Hypergraph h(N, k);
  for_each_ksubset(N, k, [&](const std::vector<int>& s) {
    int hits = 0;
    for (int v : s)
      if (v < a) ++hits;
    if (hits % 2 == 1) h.add_edge(s);
  });
  out.host = std::move(h);
  return out;
}

long long ModQConstruction::color_sum() const {
  long long s = 0;
  for (int c : color) s += c;
  return s;
}

ModQConstruction build_modq_construction(int N, int k, int q) {
  if (k < 2) throw std::invalid_argument("uniformity must be at least 2");
  if (q < 2) throw std::invalid_argument("modulus must be at least 2");
  if (N < std::max(k, q)) throw std::invalid_argument("order too small for the colour classes");

  ModQConstruction out;
  out.q = q;
  out.color.assign(static_cast<std::size_t>(N), 0);
  // First N mod q classes take the ceiling size, ids assigned in blocks.
  int base = N / q, extra = N % q, v = 0;
  for (int i = 1; i <= q; ++i) {
    int size = base + (i <= extra ? 1 : 0);
    for (int j = 0; j < size; ++j) out.color[static_cast<std::size_t>(v++)] = i;
  }
  if (out.color_sum() % q == 1 % q) {
    // Recolour the last class-1 vertex to bump the total off 1 (mod q).
    int last = -1;
    for (int u = 0; u < N; ++u)
      if (out.color[static_cast<std::size_t>(u)] == 1) last = u;
    if (last < 0) throw std::logic_error("no class-1 vertex available for adjustment");
    out.color[static_cast<std::size_t>(last)] = 2;
    out.adjusted = true;
  }

  Hypergraph h(N, k);
  for_each_ksubset(N, k, [&](const std::vector<int>& s) {
    long long sum = 0;
    for (int u : s) sum += out.color[static_cast<std::size_t>(u)];
    if (sum % q == 1 % q) h.add_edge(s);
  });
  out.host = std::move(h);
  return out;
}

bool verify_parity_host(const Hypergraph& h, const Bipartition& parts, std::string* why) {
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  if (!parts.valid_for(h.n())) return fail("split does not cover the vertex set");
  long long expected = 0;
  bool ok = true;
  for_each_ksubset(h.n(), h.k(), [&](const std::vector<int>& s) {
    if (!ok) return;
    VertexSet m = VertexSet::from_vector(s);
    bool odd = (m.intersect_count(parts.a) % 2) == 1;
    bool present = h.has_edge(m);
    if (odd != present) ok = false;
    if (odd) ++expected;
  });
  if (!ok) return fail("edge set disagrees with the odd-intersection rule");
  if (expected != h.edge_count()) return fail("edge count mismatch");
  if (why) why->clear();
  return true;
}

bool verify_modq_host(const Hypergraph& h, const std::vector<int>& color, int q, std::string* why) {
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  if (static_cast<int>(color.size()) != h.n()) return fail("colour list length mismatch");
  for (int c : color)
    if (c < 1 || c > q) return fail("colour out of range");
  bool ok = true;
  long long expected = 0;
  for_each_ksubset(h.n(), h.k(), [&](const std::vector<int>& s) {
    if (!ok) return;
    long long sum = 0;
    for (int u : s) sum += color[static_cast<std::size_t>(u)];
    bool in = (sum % q) == 1 % q;
    if (in != h.has_edge(VertexSet::from_vector(s))) ok = false;
    if (in) ++expected;
  });
  if (!ok) return fail("edge set disagrees with the colour-sum rule");
  if (expected != h.edge_count()) return fail("edge count mismatch");
  if (why) why->clear();
  return true;
}

namespace {

// Shared core: every host edge contributes `1` to the left residue, every
// placed vertex contributes degree * weight to the right. The right side is
// placement-independent exactly when all base degrees are 1 (mod modulus),
// because fresh expansion vertices always have degree one.
Certificate counting_certificate(const Tree& t, int k, int host_n, int modulus,
                                 long long total_weight, const char* family) {
  Certificate cert;
  cert.modulus = modulus;
  cert.degree_residues.reserve(static_cast<std::size_t>(t.n()));
  bool uniform = true;
  for (int v = 0; v < t.n(); ++v) {
    int r = ((t.degree(v) - 1) % modulus + modulus) % modulus;
    cert.degree_residues.push_back(r);
    if (r != 0) uniform = false;
  }
  std::ostringstream reason;
  if (t.n() < 2) {
    cert.reason = "single-vertex tree carries no congruence";
    return cert;
  }
  if (expansion_order(t.n(), k) != host_n) {
    cert.reason = "expansion does not span the host, counting argument void";
    return cert;
  }
  if (!uniform) {
    reason << family << " congruence needs every degree == 1 (mod " << modulus
           << "); tree violates it";
    cert.reason = reason.str();
    return cert;
  }
  long long m = t.n() - 1;
  cert.edge_side = m % modulus;
  cert.vertex_side = ((total_weight % modulus) + modulus) % modulus;
  if (cert.edge_side != cert.vertex_side) {
    cert.blocked = true;
    reason << "summing over the " << m << " hyperedges forces residue " << cert.edge_side
           << " (mod " << modulus << ") but summing over vertices forces " << cert.vertex_side;
  } else {
    reason << "both counts agree at residue " << cert.edge_side << ", no obstruction";
  }
  cert.reason = reason.str();
  return cert;
}

}  // namespace

Certificate parity_certificate(const ParityConstruction& c, const Tree& t, int k) {
  return counting_certificate(t, k, c.host.n(), 2,
                              static_cast<long long>(c.parts.a.count()), "parity");
}

Certificate modq_certificate(const ModQConstruction& c, const Tree& t, int k) {
  return counting_certificate(t, k, c.host.n(), c.q, c.color_sum(), "colour-sum");
}

namespace {

bool replay_common(const Certificate& cert, const Certificate& fresh, std::string* why) {
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  if (fresh.blocked != cert.blocked) return fail("blocked flag does not replay");
  if (fresh.modulus != cert.modulus) return fail("modulus does not replay");
  if (fresh.edge_side != cert.edge_side || fresh.vertex_side != cert.vertex_side)
    return fail("residues do not replay");
  if (fresh.degree_residues != cert.degree_residues) return fail("degree residues do not replay");
  if (why) why->clear();
  return true;
}

}  // namespace

bool replay_certificate(const Certificate& cert, const ParityConstruction& c, const Tree& t,
                        int k, std::string* why) {
  std::string host_why;
  if (!verify_parity_host(c.host, c.parts, &host_why)) {
    if (why) *why = "host fails its defining rule: " + host_why;
    return false;
  }
  return replay_common(cert, parity_certificate(c, t, k), why);
}

bool replay_certificate(const Certificate& cert, const ModQConstruction& c, const Tree& t,
                        int k, std::string* why) {
  std::string host_why;
  if (!verify_modq_host(c.host, c.color, c.q, &host_why)) {
    if (why) *why = "host fails its defining rule: " + host_why;
    return false;
  }
  return replay_common(cert, modq_certificate(c, t, k), why);
}

}  // namespace hxt
