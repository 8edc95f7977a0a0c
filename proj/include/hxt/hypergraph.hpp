#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "hxt/bitset.hpp"
#include "hxt/rational.hpp"

namespace hxt {

// k-uniform hypergraph on vertices 0..n-1. Edges are stored canonically
// (ascending vertex lists, no duplicates) together with 512-bit masks and
// per-vertex incidence lists; those three views back every search below.
class Hypergraph {
  int n_ = 0;
  int k_ = 2;
  std::vector<VertexSet> edge_masks_;
  std::vector<std::vector<int>> edge_verts_;
  std::vector<std::vector<int>> incidence_;
  std::unordered_map<VertexSet, int, VertexSetHash> index_;

public:
  Hypergraph(int n, int k);
  Hypergraph(int n, int k, const std::vector<std::vector<int>>& edges);

  static Hypergraph complete(int n, int k);

  int n() const { return n_; }
  int k() const { return k_; }
  int edge_count() const { return static_cast<int>(edge_masks_.size()); }

  const std::vector<int>& edge(int id) const { return edge_verts_[static_cast<std::size_t>(id)]; }
  const VertexSet& edge_mask(int id) const { return edge_masks_[static_cast<std::size_t>(id)]; }
  const std::vector<int>& incident(int v) const { return incidence_[static_cast<std::size_t>(v)]; }

  bool has_edge(const VertexSet& mask) const { return index_.count(mask) > 0; }
  std::optional<int> edge_id(const VertexSet& mask) const;

  // Throws on duplicates or malformed edges; returns the new edge id.
  int add_edge(const std::vector<int>& verts);

  // Number of edges containing every vertex of s. |s| <= k required.
  long long degree(const VertexSet& s) const;

  VertexSet vertex_mask() const { return VertexSet::full(n_); }
};

struct DegreeProfile {
  int d = 0;
  long long min_degree = 0;
  long long max_degree = 0;
  std::vector<int> min_witness;  // a d-set attaining the minimum
  Rational normalized_min;       // min_degree / binom(n-d, k-d)
};

DegreeProfile min_d_degree(const Hypergraph& h, int d);

// True iff normalized minimum degree at d_prime is at least the one at d,
// for d_prime <= d. Exact comparison.
bool check_degree_monotonicity(const Hypergraph& h, int d, int d_prime);

// Link of s: (k-|s|)-uniform hypergraph on the same vertex ids whose edges e
// satisfy e ∪ s being an edge of h. |s| <= k-1 required.
Hypergraph link(const Hypergraph& h, const VertexSet& s);

// Keeps each k-set of the complete k-graph independently with probability p.
Hypergraph random_hypergraph(int n, int k, double p, std::uint64_t seed);

// Text format: first line "k n", one edge per line as ascending vertex ids,
// '#' starts a comment. Partitions are a single line of n symbols, either
// A/B or digits.
Hypergraph parse_hypergraph(std::istream& in);
Hypergraph parse_hypergraph_file(const std::string& path);
void serialize_hypergraph(const Hypergraph& h, std::ostream& out,
                          const std::vector<std::string>& comments = {});

std::vector<int> parse_partition(const std::string& line, int n);
std::vector<int> parse_partition_file(const std::string& path, int n);
std::string partition_to_string(const std::vector<int>& labels, bool as_letters);

// Two-class partition view used by the gadget layer.
struct Bipartition {
  VertexSet a, b;

  static Bipartition from_labels(const std::vector<int>& labels);
  int side(int v) const { return a.test(v) ? 0 : 1; }
  bool valid_for(int n) const;
};

}  // namespace hxt
