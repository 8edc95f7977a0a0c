#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hxt/balancers.hpp"
#include "hxt/chains.hpp"
#include "hxt/hypergraph.hpp"

namespace hxt {

// Edge-disjoint bundle of diamond-chains and balancers that splits into two
// isomorphic halves. Each half is a disjoint union of single edges and
// t-stars; x1 and x2 are the vertices covered by exactly one half. A flip
// flag on a constituent records that its natural first half was assigned to
// the second half of the bundle (this is how composition reroutes them).
struct Gadget {
  int k = 0;
  VertexSet x1, x2;
  std::vector<DiamondChain> chains;
  std::vector<char> chain_flip;
  std::vector<Balancer> balancers;
  std::vector<char> balancer_flip;

  VertexSet vertices() const;
  VertexSet half_cover(int side) const;  // side 1 or 2
  int star_t() const;                    // 0 when no balancer is present
  int boundary_size() const { return static_cast<int>(x1.count()); }
};

// One piece of a half: a lone edge with its switchable tip, or a t-star.
// `constituent` indexes chains first and then balancers; `slot` is the
// diamond index within a chain (0 for balancers).
struct HalfComponent {
  bool is_star = false;
  int center = -1;
  std::vector<VertexSet> edges;
  std::vector<int> leaves;  // star leaves y_i, aligned with edges; empty for lone edges
  int constituent = -1;
  int slot = 0;

  VertexSet vertices() const;
};

// Components of one half in deterministic order; components at the same
// index in the two sides are switch partners.
std::vector<HalfComponent> half_components(const Gadget& g, int side);

bool verify_gadget(const Hypergraph& h, const Bipartition& part, const Gadget& g,
                   std::string* why = nullptr);

Gadget chain_to_gadget(const Hypergraph& h, const DiamondChain& c);
Gadget balancer_to_gadget(const Hypergraph& h, const Bipartition& part, const Balancer& b);

// Concatenates constituents, applying an extra flip where requested, then
// recomputes the boundary pair and re-verifies everything. Throws
// std::invalid_argument when the result is not a gadget.
Gadget gadget_merge(const Hypergraph& h, const Bipartition& part,
                    const std::vector<std::pair<const Gadget*, bool>>& parts);

// Disjoint union: boundaries unite.
Gadget gadget_union(const Hypergraph& h, const Bipartition& part, const Gadget& g1,
                    const Gadget& g2);

// Composition: the inner gadget's boundary must sit inside the outer one's,
// the gadgets must otherwise be disjoint, and the result's boundary is the
// set difference. The inner constituents join with their halves flipped.
Gadget gadget_compose(const Hypergraph& h, const Bipartition& part,
                      const Gadget& outer, const Gadget& inner);

// Gadget whose two boundary sets are 2-subsets of A and of B respectively,
// built from balancers of the given star size plus matching chains. For odd
// t one balancer suffices (capacity 2); for even t two capacity-1 bundles
// are united.
std::vector<Gadget> build_even_balancers(const Hypergraph& h, const Bipartition& part,
                                         int t, int count, std::uint64_t seed,
                                         const VertexSet& forbidden = VertexSet(),
                                         int chain_max_len = 4);

// Even-t variant with singleton boundaries {x1} in A and {x2} in B and
// exactly one balancer inside: the interiors are chained away pairwise and
// only the anchors stay exposed.
std::optional<Gadget> build_anchor_gadget(const Hypergraph& h, const Bipartition& part,
                                          int t, std::uint64_t seed,
                                          const VertexSet& forbidden = VertexSet(),
                                          int chain_max_len = 4);

}  // namespace hxt
