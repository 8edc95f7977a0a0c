#pragma once

#include <cstdint>

#include "hxt/bitset.hpp"
#include "hxt/diamonds.hpp"
#include "hxt/rational.hpp"

namespace hxt {

// Quality of a two-sided cut of the diamond graph, measured as
// cross / (|A| * |B|) and compared exactly.
struct SeparationResult {
  bool separable = false;   // the reported cut meets the bound
  bool exact = false;       // exhaustive verdict (two-sided) vs heuristic (one-sided)
  VertexSet side_a, side_b;
  long long cross_edges = 0;
  Rational ratio;           // of the best cut found
};

long long cut_cross_edges(const DiamondGraph& g, const VertexSet& side_a);

// Exhaustive below `exact_cap` vertices (scans subsets containing vertex 0),
// randomized local descent above. A heuristic "not separable" is only a
// failure to find, never a proof.
SeparationResult find_separation(const DiamondGraph& g, const Rational& mu, int exact_cap = 22,
                                 std::uint64_t seed = 0, int restarts = 60);

}  // namespace hxt
