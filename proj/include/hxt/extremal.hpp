#pragma once

#include <string>
#include <vector>

#include "hxt/hypergraph.hpp"
#include "hxt/tree.hpp"

namespace hxt {

// Host whose edges are exactly the k-sets meeting side A in an odd number of
// vertices, over a near-balanced split with |A| even. Spanning expansions of
// trees with all degrees odd cannot embed here.
struct ParityConstruction {
  Hypergraph host{2, 2};
  Bipartition parts;
};

// Not every order admits the required split: |A| must be even and the sides
// may differ by at most one, which rules out N == 2 (mod 4).
bool parity_split_exists(int N);

ParityConstruction build_parity_construction(int N, int k);

// Host on colour classes V_1..V_q (colour of v in V_i is i) whose edges are
// the k-sets with colour sum == 1 (mod q). If the total colour sum lands on
// 1 (mod q) one vertex is moved from V_1 to V_2 to knock it off.
struct ModQConstruction {
  Hypergraph host{2, 2};
  int q = 2;
  std::vector<int> color;  // 1-based colour per vertex
  bool adjusted = false;

  long long color_sum() const;
};

ModQConstruction build_modq_construction(int N, int k, int q);

// Membership checks that re-derive the edge set from scratch, so a doctored
// host cannot pass.
bool verify_parity_host(const Hypergraph& h, const Bipartition& parts, std::string* why = nullptr);
bool verify_modq_host(const Hypergraph& h, const std::vector<int>& color, int q,
                      std::string* why = nullptr);

// Counting argument that a spanning k-expansion of `tree` cannot land in the
// construction. Both sides of the congruence are recorded so the claim can
// be replayed from raw data.
struct Certificate {
  bool blocked = false;
  int modulus = 2;
  long long edge_side = 0;    // residue forced by summing over hyperedges
  long long vertex_side = 0;  // residue forced by summing over vertices
  std::vector<int> degree_residues;  // per base vertex, (deg - 1) mod modulus
  std::string reason;
};

Certificate parity_certificate(const ParityConstruction& c, const Tree& t, int k);
Certificate modq_certificate(const ModQConstruction& c, const Tree& t, int k);

// Recompute every stored quantity from the construction and the tree.
bool replay_certificate(const Certificate& cert, const ParityConstruction& c, const Tree& t,
                        int k, std::string* why = nullptr);
bool replay_certificate(const Certificate& cert, const ModQConstruction& c, const Tree& t,
                        int k, std::string* why = nullptr);

}  // namespace hxt
