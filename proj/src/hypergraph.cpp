#include "hxt/hypergraph.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "hxt/rng.hpp"

namespace hxt {

Hypergraph::Hypergraph(int n, int k) : n_(n), k_(k) {
  if (n < 0 || n > kMaxVertices)
    throw std::invalid_argument("vertex count out of range: " + std::to_string(n));
  if (k < 2) throw std::invalid_argument("uniformity must be at least 2");
  incidence_.resize(static_cast<std::size_t>(n));
}

Hypergraph::Hypergraph(int n, int k, const std::vector<std::vector<int>>& edges)
    : Hypergraph(n, k) {
  for (const auto& e : edges) add_edge(e);
}

Hypergraph Hypergraph::complete(int n, int k) {
  Hypergraph h(n, k);
  std::vector<int> pick(static_cast<std::size_t>(k));
  // lexicographic enumeration of ascending k-tuples
  for (int i = 0; i < k; ++i) pick[static_cast<std::size_t>(i)] = i;
  if (k > n) return h;
  while (true) {
    h.add_edge(pick);
    int i = k - 1;
    while (i >= 0 && pick[static_cast<std::size_t>(i)] == n - k + i) --i;
    if (i < 0) break;
    ++pick[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j)
      pick[static_cast<std::size_t>(j)] = pick[static_cast<std::size_t>(j - 1)] + 1;
  }
  return h;
}

int Hypergraph::add_edge(const std::vector<int>& verts) {
  if (static_cast<int>(verts.size()) != k_)
    throw std::invalid_argument("edge arity mismatch: got " + std::to_string(verts.size()) +
                                ", expected " + std::to_string(k_));
  std::vector<int> sorted = verts;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    int v = sorted[i];
    if (v < 0 || v >= n_) throw std::invalid_argument("edge vertex out of range");
    if (i > 0 && sorted[i - 1] == v) throw std::invalid_argument("repeated vertex in edge");
  }
  VertexSet mask = VertexSet::from_vector(sorted);
  if (index_.count(mask)) throw std::invalid_argument("duplicate edge");
  int id = edge_count();
  index_.emplace(mask, id);
  edge_masks_.push_back(mask);
  edge_verts_.push_back(std::move(sorted));
  for (int v : edge_verts_.back()) incidence_[static_cast<std::size_t>(v)].push_back(id);
  return id;
}

std::optional<int> Hypergraph::edge_id(const VertexSet& mask) const {
  auto it = index_.find(mask);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

long long Hypergraph::degree(const VertexSet& s) const {
  int sz = s.count();
  if (sz > k_) throw std::invalid_argument("degree set larger than uniformity");
  if (sz == 0) return edge_count();
  int pivot = s.lowest();
  if (pivot >= n_) throw std::invalid_argument("degree set vertex out of range");
  long long c = 0;
  for (int id : incidence_[static_cast<std::size_t>(pivot)])
    if (edge_masks_[static_cast<std::size_t>(id)].contains(s)) ++c;
  return c;
}

DegreeProfile min_d_degree(const Hypergraph& h, int d) {
  if (d < 1 || d >= h.k())
    throw std::invalid_argument("degree order must satisfy 1 <= d < k");
  if (d > h.n()) throw std::invalid_argument("degree order exceeds vertex count");
  DegreeProfile p;
  p.d = d;
  p.min_degree = -1;
  std::vector<int> pick(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) pick[static_cast<std::size_t>(i)] = i;
  while (true) {
    long long deg = h.degree(VertexSet::from_vector(pick));
    if (p.min_degree < 0 || deg < p.min_degree) {
      p.min_degree = deg;
      p.min_witness = pick;
    }
    p.max_degree = std::max(p.max_degree, deg);
    int i = d - 1;
    while (i >= 0 && pick[static_cast<std::size_t>(i)] == h.n() - d + i) --i;
    if (i < 0) break;
    ++pick[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < d; ++j)
      pick[static_cast<std::size_t>(j)] = pick[static_cast<std::size_t>(j - 1)] + 1;
  }
  if (p.min_degree < 0) p.min_degree = 0;
  p.normalized_min = Rational(p.min_degree, binomial(h.n() - d, h.k() - d));
  return p;
}

bool check_degree_monotonicity(const Hypergraph& h, int d, int d_prime) {
  if (d_prime > d) throw std::invalid_argument("expected d_prime <= d");
  Rational at_d = min_d_degree(h, d).normalized_min;
  Rational at_dp = min_d_degree(h, d_prime).normalized_min;
  return at_dp >= at_d;
}

Hypergraph link(const Hypergraph& h, const VertexSet& s) {
  int sz = s.count();
  if (sz > h.k() - 1) throw std::invalid_argument("link set too large");
  Hypergraph out(h.n(), h.k() - sz);
  if (sz == 0) {
    for (int id = 0; id < h.edge_count(); ++id) out.add_edge(h.edge(id));
    return out;
  }
  int pivot = s.lowest();
  for (int id : h.incident(pivot)) {
    if (!h.edge_mask(id).contains(s)) continue;
    std::vector<int> rest;
    for (int v : h.edge(id))
      if (!s.test(v)) rest.push_back(v);
    out.add_edge(rest);
  }
  return out;
}

Hypergraph random_hypergraph(int n, int k, double p, std::uint64_t seed) {
  if (k > n) return Hypergraph(n, k);
  Rng rng(seed);
  Hypergraph h(n, k);
  std::vector<int> pick(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) pick[static_cast<std::size_t>(i)] = i;
  while (true) {
    if (rng.bernoulli(p)) h.add_edge(pick);
    int i = k - 1;
    while (i >= 0 && pick[static_cast<std::size_t>(i)] == n - k + i) --i;
    if (i < 0) break;
    ++pick[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j)
      pick[static_cast<std::size_t>(j)] = pick[static_cast<std::size_t>(j - 1)] + 1;
  }
  return h;
}

Hypergraph parse_hypergraph(std::istream& in) {
  std::string line;
  int k = -1, n = -1;
  std::vector<std::vector<int>> edges;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::istringstream ss(line);
    std::vector<int> vals;
    int x;
    while (ss >> x) vals.push_back(x);
    if (!ss.eof()) {
      std::string junk;
      ss.clear();
      ss >> junk;
      if (!junk.empty())
        throw std::invalid_argument("line " + std::to_string(lineno) + ": unexpected token");
    }
    if (vals.empty()) continue;
    if (k < 0) {
      if (vals.size() != 2)
        throw std::invalid_argument("header must be two integers: k n");
      k = vals[0];
      n = vals[1];
      if (k < 2 || n < 0)
        throw std::invalid_argument("invalid header values");
      continue;
    }
    if (static_cast<int>(vals.size()) != k)
      throw std::invalid_argument("line " + std::to_string(lineno) + ": expected " +
                                  std::to_string(k) + " vertex ids");
    for (std::size_t i = 1; i < vals.size(); ++i)
      if (vals[i - 1] >= vals[i])
        throw std::invalid_argument("line " + std::to_string(lineno) +
                                    ": vertex ids must be strictly ascending");
    edges.push_back(vals);
  }
  if (k < 0) throw std::invalid_argument("missing header line");
  return Hypergraph(n, k, edges);
}

Hypergraph parse_hypergraph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  return parse_hypergraph(in);
}

void serialize_hypergraph(const Hypergraph& h, std::ostream& out,
                          const std::vector<std::string>& comments) {
  for (const auto& c : comments) out << "# " << c << "\n";
  out << h.k() << " " << h.n() << "\n";
  for (int id = 0; id < h.edge_count(); ++id) {
    const auto& e = h.edge(id);
    for (std::size_t i = 0; i < e.size(); ++i) out << (i ? " " : "") << e[i];
    out << "\n";
  }
}

std::vector<int> parse_partition(const std::string& line, int n) {
  std::vector<int> labels;
  for (char c : line) {
    if (c == '\r' || c == '\n' || c == ' ') continue;
    if (c == 'A')
      labels.push_back(0);
    else if (c == 'B')
      labels.push_back(1);
    else if (c >= '0' && c <= '9')
      labels.push_back(c - '0');
    else
      throw std::invalid_argument(std::string("bad partition symbol '") + c + "'");
  }
  if (static_cast<int>(labels.size()) != n)
    throw std::invalid_argument("partition length " + std::to_string(labels.size()) +
                                " does not match vertex count " + std::to_string(n));
  return labels;
}

std::vector<int> parse_partition_file(const std::string& path, int n) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    bool blank = true;
    for (char c : line)
      if (c != ' ' && c != '\t' && c != '\r') blank = false;
    if (!blank) return parse_partition(line, n);
  }
  throw std::invalid_argument("no partition line in " + path);
}

std::string partition_to_string(const std::vector<int>& labels, bool as_letters) {
  std::string s;
  for (int x : labels) {
    if (as_letters) {
      if (x < 0 || x > 1) throw std::invalid_argument("letter form needs two classes");
      s += (x == 0 ? 'A' : 'B');
    } else {
      if (x < 0 || x > 9) throw std::invalid_argument("digit form needs classes 0..9");
      s += static_cast<char>('0' + x);
    }
  }
  return s;
}

Bipartition Bipartition::from_labels(const std::vector<int>& labels) {
  Bipartition p;
  for (std::size_t v = 0; v < labels.size(); ++v) {
    if (labels[v] == 0)
      p.a.set(static_cast<int>(v));
    else if (labels[v] == 1)
      p.b.set(static_cast<int>(v));
    else
      throw std::invalid_argument("bipartition needs labels 0/1");
  }
  return p;
}

bool Bipartition::valid_for(int n) const {
  if (a.intersects(b)) return false;
  return (a | b) == VertexSet::full(n);
}

}  // namespace hxt
