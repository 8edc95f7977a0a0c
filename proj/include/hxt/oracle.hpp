#pragma once

#include <optional>
#include <vector>

#include "hxt/expansion.hpp"
#include "hxt/hypergraph.hpp"

namespace hxt {

enum class OracleStatus { Found, None, Timeout };

struct OracleResult {
  OracleStatus status = OracleStatus::None;
  std::optional<std::vector<int>> embedding;  // target vertex -> host vertex
  long long nodes = 0;                        // search nodes visited
};

struct OracleOptions {
  bool spanning = true;
  long long node_budget = 100000000;
};

// Exhaustive backtracking over edge images along a valid order. Fresh
// vertices inside one target edge are interchangeable, so they are assigned
// in ascending host order; anchor placements are enumerated in full, which
// keeps the search exhaustive up to that harmless symmetry. `None` is
// therefore a proof of non-embeddability, `Timeout` is not.
OracleResult brute_force_embed(const Hypergraph& host, const ExpansionTree& x,
                               const OracleOptions& opt = {});

// Independent check that a returned map is a genuine embedding.
bool check_embedding(const Hypergraph& host, const ExpansionTree& x,
                     const std::vector<int>& map, bool spanning);

}  // namespace hxt
