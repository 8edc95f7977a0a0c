#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hxt/chains.hpp"
#include "hxt/embedding.hpp"
#include "hxt/hypergraph.hpp"
#include "hxt/immersion.hpp"
#include "hxt/parity.hpp"

namespace hxt {

// A central edge {w} ∪ {v_1..v_{k-1}} whose non-central vertices each carry
// a diamond (spare tip w_i, shared set S_i). Once the v_i-side halves are
// immersed, the tuple can deliver one new edge at any covered vertex w'
// with {w'} ∪ v⃗ present: switch each rider from v_i to a free z_i with
// S_i ∪ {z_i} present, then lay the new edge on {w'} ∪ v⃗.
struct AbsorbingTuple {
  int w = -1;                    // default central vertex
  VertexSet central;             // {w} ∪ tips, an edge of the host
  std::vector<Diamond> diamonds; // diamond i: tip_u = spare, tip_v = v_i

  std::vector<int> tips() const;
  std::vector<int> spares() const;
  VertexSet vertices() const;
};

bool verify_absorbing_tuple(const Hypergraph& h, const AbsorbingTuple& t,
                            std::string* why = nullptr);

// Immersion requirement of one tuple coordinate: a degree-one rider on the
// designated tip of the tip-side diamond edge. The absorber checks retired
// and pending coordinates against exactly this shape.
ImmersionItem tuple_coordinate_item(const Diamond& d);

// Greedy, seeded, vertex-disjoint sampling of up to `count_target` tuples
// avoiding `forbidden`. Returns what it found; callers judge sufficiency.
std::vector<AbsorbingTuple> sample_absorbing_family(const Hypergraph& h, int count_target,
                                                    std::uint64_t seed,
                                                    const VertexSet& forbidden = VertexSet());

// Whether the tuple could absorb the pair (w, z⃗) in principle: the rebound
// central edge exists and some assignment of the z's onto coordinates has
// every S_i ∪ {z} present. Ignores embedding state.
bool tuple_can_absorb(const Hypergraph& h, const AbsorbingTuple& t, int w,
                      const std::vector<int>& z);

int count_absorbers(const Hypergraph& h, const std::vector<AbsorbingTuple>& family, int w,
                    const std::vector<int>& z);

struct CoverageReport {
  int samples = 0;
  int min_count = 0;
  int zero_samples = 0;
  double avg_count = 0.0;
};

// Samples random (w, z⃗) pairs and counts matching tuples for each.
CoverageReport coverage_report(const Hypergraph& h, const std::vector<AbsorbingTuple>& family,
                               int samples, std::uint64_t seed);

struct AbsorbPool {
  std::vector<AbsorbingTuple> tuples;
  std::vector<ParityAbsorber> parity;
};

struct AbsorbStep {
  int edge_id = -1;                // target edge delivered this step
  bool used_parity = false;
  int pool_index = -1;
  int anchor_image = -1;           // covered host vertex the new edge leans on
  std::vector<int> newly_covered;  // exactly k-1 previously free host vertices
};

struct AbsorbFailure {
  int edge_id = -1;
  int parent_image = -1;
  int free_a = -1;   // free-vertex split when a partition is supplied
  int free_b = -1;
  int parent_pi = -1;
  std::string message;
};

struct AbsorbResult {
  std::optional<PartialEmbedding> embedding;
  std::vector<AbsorbStep> steps;
  std::optional<AbsorbFailure> failure;
  bool invariants_ok = true;  // grow-by-(k-1), retire-one, rest-stay-immersed
  std::vector<std::pair<long long, long long>> splits;  // free A/B after each step
  std::string error;
};

struct AbsorbOptions {
  // Steer each step's newly covered set toward the balance window: pick
  // |z⃗ ∩ A| extremal subject to matching pi(parent image) mod 2, capped at
  // the half-way point from the scarcer side. Needs `part`.
  bool z_rule = false;
  VertexSet exclude;  // host vertices never to consume (reserved anchors)
};

// Delivers the listed target edges one per step from the pool. Each edge
// must have exactly one base endpoint already covered. Stops at the first
// edge no pool item matches and reports the diagnosis; `part` enables the
// parity split in it.
AbsorbResult absorb_loop(const PartialEmbedding& pe, const AbsorbPool& pool,
                         const std::vector<int>& leaf_edges, const Bipartition* part,
                         std::uint64_t seed, const AbsorbOptions& opts = AbsorbOptions());

}  // namespace hxt
