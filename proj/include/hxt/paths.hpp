#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hxt/hypergraph.hpp"

namespace hxt {

// Loose path between two anchors: edges e_1..e_len with x1 in e_1 only,
// x2 in e_len only, consecutive edges sharing exactly one vertex and
// non-consecutive edges disjoint.
struct LoosePath {
  std::vector<int> anchors;             // x1, shared vertices, x2
  std::vector<std::vector<int>> edges;  // ascending vertex lists
};

bool validate_loose_path(const Hypergraph& h, const LoosePath& p, int x1, int x2,
                         const VertexSet& forbidden, std::string* why = nullptr);

// Exhaustive for len <= 2; randomized greedy with restarts beyond that
// (seed and cap control the search, every result is re-validated).
std::vector<LoosePath> loose_paths(const Hypergraph& h, int x1, int x2, int len,
                                   const VertexSet& forbidden, int max_results = 1 << 20,
                                   std::uint64_t seed = 0, int restarts = 64);

struct Reservoir {
  VertexSet vertices;
  int path_length = 1;                       // connecting-path length used
  std::vector<std::vector<long long>> witness_counts;  // per vertex pair
  long long min_witness = 0;
  int attempts_used = 0;
};

struct ReservoirResult {
  std::optional<Reservoir> reservoir;
  int attempts = 0;
  std::string error;
};

// Las Vegas: sample a reservoir of ceil(frac*n) vertices and verify by
// exhaustive path counting that every pair of outside vertices has at least
// `floor` connecting paths of the d-dependent length (2 when d == 1, else 1)
// with all interior vertices inside the reservoir. Pairs touching the
// reservoir are exempt: connections are only ever drawn between embedded
// images, which live outside it. Retries up to attempt_cap.
ReservoirResult select_reservoir(const Hypergraph& h, double frac, int d,
                                 std::uint64_t seed, int floor_paths = 1,
                                 int attempt_cap = 50);

}  // namespace hxt
