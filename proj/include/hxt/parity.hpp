#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hxt/gadgets.hpp"
#include "hxt/hypergraph.hpp"

namespace hxt {

// Per-vertex bit recording which parity of |W ∩ A| dominates among the
// neighbour (k-1)-sets W of the vertex: 0 when at least a sixth of all
// possible (k-1)-sets around it are even, 1 otherwise. The comparison is
// exact (6 * even-count against C(n-1, k-1)). Vertices with no neighbours
// default to 0 and are flagged.
struct PiType {
  std::vector<int> pi;
  std::vector<long long> even_neighbors;
  std::vector<long long> odd_neighbors;
  std::vector<char> degenerate;
};

PiType pi_type(const Hypergraph& h, const Bipartition& part);
int pi_of(const Hypergraph& h, const Bipartition& part, int w);

// Builds an (x1_set, x2_set, t)-gadget between two disjoint (k-1)-sets of
// equal |· ∩ A| parity: side-aligned chains when the A-counts agree, and a
// recursive bridge through an even-balancer when they differ. Returns
// nothing when the searches fail; throws std::invalid_argument on malformed
// or parity-mismatched inputs.
std::optional<Gadget> build_parity_gadget(const Hypergraph& h, const Bipartition& part,
                                          const VertexSet& x1_set, const VertexSet& x2_set,
                                          int t, std::uint64_t seed,
                                          const VertexSet& forbidden = VertexSet(),
                                          int chain_max_len = 4);

// A witness neighbour set of w together with a gadget whose first boundary
// is the set to be absorbed and whose second is the witness. The second
// half is the piece meant to sit inside an embedding; switching it frees
// the witness and covers the target set, after which the witness plus w
// carries one new edge.
struct ParityAbsorber {
  int w = -1;
  VertexSet target;   // the (k-1)-set the absorber can cover
  VertexSet witness;  // neighbour set of w, freed by the switch
  Gadget gadget;      // boundary (target, witness); half2 is the absorber

  int size() const;  // vertices the embedded half occupies
};

bool verify_parity_absorber(const Hypergraph& h, const Bipartition& part,
                            const ParityAbsorber& pa, std::string* why = nullptr);

// Up to `limit` absorbers for (w, target), pairwise disjoint outside the
// shared target set and w. Throws std::invalid_argument when |target ∩ A|
// does not match pi(w) modulo 2.
std::vector<ParityAbsorber> find_parity_absorbers(const Hypergraph& h,
                                                  const Bipartition& part, int w,
                                                  const VertexSet& target, int t,
                                                  int limit, std::uint64_t seed,
                                                  const VertexSet& forbidden = VertexSet());

}  // namespace hxt
