#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hxt/absorb.hpp"
#include "hxt/config.hpp"
#include "hxt/embedding.hpp"
#include "hxt/gadgets.hpp"
#include "hxt/hypergraph.hpp"

namespace hxt {

// One pipeline stage as it ran: name, outcome, image size afterwards and a
// few stage-specific counters (sizes, retries, kept items).
struct StageRecord {
  std::string stage;
  std::string status;  // "ok" or the failure text
  long long covered = -1;
  std::vector<std::pair<std::string, long long>> counts;
};

struct FailureReport {
  std::string stage;
  std::string message;
  std::optional<AbsorbFailure> absorb;  // set when the absorption step diagnosed it
};

struct PipelineTrace {
  std::string branch;  // "direct", "inseparable" or "separable"
  std::vector<StageRecord> stages;
  std::vector<std::string> switch_log;
  // Free-vertex split (A, B) after each balancing flip and absorption step.
  std::vector<std::pair<long long, long long>> parity_ledger;
};

struct PipelineResult {
  std::optional<PartialEmbedding> embedding;
  std::optional<FailureReport> failure;
  PipelineTrace trace;  // successful attempt's trace, or the last attempt's
  int attempts_used = 0;

  bool ok() const { return embedding.has_value(); }
};

// Full re-check of a finished embedding straight from the vertex map: total,
// injective onto the whole host, and every target edge lands on a host edge.
// Shares no state with the incremental bookkeeping it audits.
bool verify_spanning_embedding(const PartialEmbedding& pe, std::string* why = nullptr);

// An immersed gadget held in reserve for balancing; firing it exchanges its
// two boundary sets inside the free set and retires it.
struct BalanceItem {
  Gadget gadget;
  int side = 1;  // half currently immersed
  bool used = false;
};

struct BalanceResult {
  std::optional<PartialEmbedding> embedding;  // set on success only
  int flips = 0;
  std::vector<std::pair<long long, long long>> ledger;  // free (A, B) per state
  std::string error;
};

// Fires pool items, each at most once, until the free-vertex difference
// |A| - |B| (excluded vertices not counted) is within `window`. Each flip is
// chosen to shrink the difference the most; stale items are skipped.
BalanceResult balance_leftover(const PartialEmbedding& pe, std::vector<BalanceItem>& pool,
                               const Bipartition& part, long long window,
                               const VertexSet& exclude = VertexSet());

// Randomized spanning-embedding pipeline for hosts dense at codegree depth
// d: reserve a connector pool, immerse absorbing tuples in one subtree,
// cover everything but a few pruned leaves greedily, then absorb the pruned
// leaves one switch apiece. Throws std::invalid_argument on malformed input
// and std::logic_error if a produced embedding ever fails its audit. The
// host and the expansion must outlive the returned embedding.
PipelineResult pipeline_embed_thm1(const Hypergraph& host, const ExpansionTree& x, int d,
                                   const Config& cfg, std::uint64_t seed);

// Pipeline for base trees with an even-degree vertex on hosts that may be
// only pair-degree dense. Splits on separability of the diamond graph: the
// inseparable branch runs the uniform machinery; the separable branch works
// relative to the two sides with an anchor pair, balancing flips and a
// parity-steered absorption endgame.
PipelineResult pipeline_embed_thm2(const Hypergraph& host, const ExpansionTree& x,
                                   const Config& cfg, std::uint64_t seed);

}  // namespace hxt
