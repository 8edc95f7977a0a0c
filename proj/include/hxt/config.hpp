#pragma once

#include <cstdint>
#include <map>
#include <string>

namespace hxt {

// Numeric knobs shared across searches and the embedding pipelines. Values
// are desk-scale engineering defaults; anything that feeds a correctness
// decision is re-verified exactly downstream, so these only steer searches.
struct Config {
  double epsilon = 0.05;         // slack used when generating test instances
  double reservoir_frac = 0.1;   // reservoir size as a fraction of the host
  int reservoir_floor = 1;       // required connecting paths per vertex pair
  int attempt_cap = 50;          // retry cap for sample-and-verify loops

  std::uint64_t oracle_node_budget = 100000000;  // backtracking oracle
  std::uint64_t search_node_budget = 2000000;    // gadget searches

  int tree_enum_cap = 12;        // max vertices for exhaustive tree listing
  int exact_separation_cap = 22; // max graph size for exact ratio-cut scan
  int blowup_count_guard = 9;    // cap on k*m for exact blow-up counting
  int chain_max_len = 4;         // iterative-deepening cap for chains

  double gamma = 0.10;           // codegree fraction kept in the diamond graph
  double mu = 0.125;             // ratio-cut threshold deciding separability

  // pipeline shape
  double nu = 0.30;              // target fraction for the reserved subtree
  double alpha = 0.10;           // fraction of vertices left for absorption
  int family_target = 6;         // absorbing tuples to sample
  int tile_length = 3;           // odd loose-cycle length used for tiling
  int part_size = 8;             // m' handed to the tree partition
  int part_restarts = 60;        // greedy restarts per part
  int stage_restarts = 12;       // restarts of a whole pipeline stage
  int pipeline_attempts = 10;    // full-pipeline retries before giving up
  int immersion_distance = 5;    // min pairwise tree distance of item centers

  std::uint64_t seed = 0;
  int workers = 1;

  std::map<std::string, std::string> describe() const {
    return {
        {"epsilon", std::to_string(epsilon)},
        {"reservoir_frac", std::to_string(reservoir_frac)},
        {"reservoir_floor", std::to_string(reservoir_floor)},
        {"attempt_cap", std::to_string(attempt_cap)},
        {"oracle_node_budget", std::to_string(oracle_node_budget)},
        {"search_node_budget", std::to_string(search_node_budget)},
        {"tree_enum_cap", std::to_string(tree_enum_cap)},
        {"exact_separation_cap", std::to_string(exact_separation_cap)},
        {"blowup_count_guard", std::to_string(blowup_count_guard)},
        {"chain_max_len", std::to_string(chain_max_len)},
        {"gamma", std::to_string(gamma)},
        {"mu", std::to_string(mu)},
        {"nu", std::to_string(nu)},
        {"alpha", std::to_string(alpha)},
        {"family_target", std::to_string(family_target)},
        {"tile_length", std::to_string(tile_length)},
        {"part_size", std::to_string(part_size)},
        {"part_restarts", std::to_string(part_restarts)},
        {"stage_restarts", std::to_string(stage_restarts)},
        {"pipeline_attempts", std::to_string(pipeline_attempts)},
        {"immersion_distance", std::to_string(immersion_distance)},
        {"seed", std::to_string(seed)},
        {"workers", std::to_string(workers)},
    };
  }
};

}  // namespace hxt
