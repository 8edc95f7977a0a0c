#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "hxt/hypergraph.hpp"
#include "hxt/rng.hpp"

namespace hxt {

// Three edges over a common (k-3)-set base whose triple parts realise the
// fixed two-two-zero intersection pattern against one side of a bipartition.
// `swapped` selects which side plays the two-heavy role.
struct ProtoBalancer {
  VertexSet base;
  std::array<VertexSet, 3> triples;
  bool swapped = false;

  VertexSet edge(int i) const;
  VertexSet vertices() const;
};

bool verify_proto_balancer(const Hypergraph& h, const Bipartition& part,
                           const ProtoBalancer& pb, std::string* why = nullptr);

struct ProtoSearch {
  std::vector<ProtoBalancer> found;
  bool exhaustive = false;
  std::uint64_t nodes = 0;
};

// Enumerates proto-balancers in deterministic order: bases ascending, then
// the forced shape (common pair from the heavy side, two mates and a third
// vertex from the other side), both orientations. Stops at `limit` finds or
// `node_budget` loop steps.
ProtoSearch find_proto_balancers(const Hypergraph& h, const Bipartition& part,
                                 int limit = 1000,
                                 std::uint64_t node_budget = 50'000'000);

// Expansion of a two-by-t complete bipartite graph, coloured: anchors x1 in
// side A and x2 in side B, shared leaves y_1..y_t (the first t_a in A, the
// rest in B), and per-leaf edge pairs f1[i] through x1 and f2[i] through x2
// whose interiors differ in B-count by +1 on A-leaves and -1 on B-leaves.
struct Balancer {
  int t_a = 0;
  int t_b = 0;
  int x1 = -1;
  int x2 = -1;
  std::vector<int> y;
  std::vector<VertexSet> f1, f2;

  int t() const { return t_a + t_b; }
  int capacity() const { return 1 + t_b - t_a; }
  VertexSet interior1(int i) const;
  VertexSet interior2(int i) const;
  VertexSet half_vertices(int side) const;  // side 1 or 2
  VertexSet vertices() const;
};

bool verify_balancer(const Hypergraph& h, const Bipartition& part,
                     const Balancer& b, std::string* why = nullptr);

// Randomized backtracking search for (t_a,t_b)-balancers avoiding
// `forbidden`. Every result is re-verified before being returned.
std::vector<Balancer> find_balancers(const Hypergraph& h, const Bipartition& part,
                                     int t_a, int t_b, int limit,
                                     std::uint64_t seed,
                                     const VertexSet& forbidden = VertexSet(),
                                     std::uint64_t node_budget = 2'000'000);

}  // namespace hxt
