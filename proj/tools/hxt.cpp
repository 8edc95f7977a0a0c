// Command-line driver tying the library together: constructions, blocked
// embedding verification, density scans, gadget censuses and the embedding
// pipelines. Every artifact carries its full configuration so a run can be
// replayed from the file alone; nothing here writes a timestamp.

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "hxt/absorb.hpp"
#include "hxt/balancers.hpp"
#include "hxt/chains.hpp"
#include "hxt/config.hpp"
#include "hxt/cycle_embed.hpp"
#include "hxt/diamonds.hpp"
#include "hxt/expansion.hpp"
#include "hxt/extremal.hpp"
#include "hxt/hypergraph.hpp"
#include "hxt/oracle.hpp"
#include "hxt/parity.hpp"
#include "hxt/pipeline.hpp"
#include "hxt/rational.hpp"
#include "hxt/rng.hpp"
#include "hxt/separation.hpp"
#include "hxt/tree.hpp"
#include "hxt/tree_enum.hpp"

namespace {

using nlohmann::ordered_json;

constexpr const char* kToolVersion = "hxt 0.1.0";
constexpr int kFormatVersion = 1;

// Exit codes: 0 success, 2 bad input, 3 internal consistency violation
// (certificate and oracle disagree, or an audit fails), 4 honest search
// failure.
constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitInconsistent = 3;
constexpr int kExitNotFound = 4;

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

// Everything a run needs to be replayed: command name, free-form argument
// map, seed and the full numeric configuration.
struct Provenance {
  std::string command;
  std::uint64_t seed = 0;
  int workers = 1;
  std::vector<std::pair<std::string, std::string>> args;
  hxt::Config cfg;

  void arg(const std::string& key, const std::string& value) { args.emplace_back(key, value); }
  void arg(const std::string& key, long long value) { args.emplace_back(key, std::to_string(value)); }

  // '#'-prefixed block for CSV and text artifacts.
  std::string comment_block() const {
    std::ostringstream out;
    out << "# tool: " << kToolVersion << "\n";
    out << "# format: " << kFormatVersion << "\n";
    out << "# command: " << command << "\n";
    for (const auto& [k, v] : args) out << "# " << k << ": " << v << "\n";
    out << "# seed: " << seed << "\n";
    out << "# workers: " << workers << "\n";
    out << "# config:";
    for (const auto& [k, v] : cfg.describe()) out << " " << k << "=" << v;
    out << "\n";
    return out.str();
  }

  ordered_json json() const {
    ordered_json j;
    j["tool"] = kToolVersion;
    j["format"] = kFormatVersion;
    j["command"] = command;
    for (const auto& [k, v] : args) j[k] = v;
    j["seed"] = seed;
    j["workers"] = workers;
    ordered_json c;
    for (const auto& [k, v] : cfg.describe()) c[k] = v;
    j["config"] = c;
    return j;
  }
};

// Output sink: a named file, or stdout for "-" / empty.
class Sink {
  std::ofstream file_;
  bool to_stdout_ = true;

 public:
  explicit Sink(const std::string& path) {
    if (!path.empty() && path != "-") {
      file_.open(path, std::ios::binary);
      if (!file_) throw std::invalid_argument("cannot write " + path);
      to_stdout_ = false;
    }
  }
  std::ostream& stream() { return to_stdout_ ? std::cout : file_; }
};

void write_json(Sink& sink, const ordered_json& j) { sink.stream() << j.dump(2) << "\n"; }

ordered_json json_of_vec(const std::vector<int>& v) {
  ordered_json a = ordered_json::array();
  for (int x : v) a.push_back(x);
  return a;
}

ordered_json degree_profile_json(const hxt::Hypergraph& h) {
  ordered_json rows = ordered_json::array();
  for (int d = 1; d < h.k(); ++d) {
    auto p = hxt::min_d_degree(h, d);
    ordered_json row;
    row["d"] = d;
    row["min_degree"] = p.min_degree;
    row["max_degree"] = p.max_degree;
    row["min_witness"] = json_of_vec(p.min_witness);
    row["normalized_min"] = p.normalized_min.str();
    rows.push_back(row);
  }
  return rows;
}

hxt::Config base_config() {
  hxt::Config cfg;
  if (const char* s = std::getenv("HXT_ORACLE_BUDGET")) cfg.oracle_node_budget = std::strtoull(s, nullptr, 10);
  if (const char* s = std::getenv("HXT_SEARCH_BUDGET")) cfg.search_node_budget = std::strtoull(s, nullptr, 10);
  return cfg;
}

// Shared numeric knobs, attached to the subcommands that run searches.
void add_config_flags(CLI::App* cmd, hxt::Config& cfg) {
  cmd->add_option("--oracle-budget", cfg.oracle_node_budget, "node budget for the exhaustive oracle");
  cmd->add_option("--search-budget", cfg.search_node_budget, "node budget for gadget searches");
  cmd->add_option("--attempts", cfg.pipeline_attempts, "full pipeline retries");
  cmd->add_option("--attempt-cap", cfg.attempt_cap, "retry cap for sample-and-verify loops");
  cmd->add_option("--reservoir-frac", cfg.reservoir_frac, "reservoir size as a host fraction");
  cmd->add_option("--alpha", cfg.alpha, "fraction of leaves reserved for absorption");
  cmd->add_option("--nu", cfg.nu, "target fraction for the reserved subtree");
  cmd->add_option("--family-target", cfg.family_target, "absorbing tuples to sample");
  cmd->add_option("--immersion-distance", cfg.immersion_distance, "min tree distance between immersed items");
  cmd->add_option("--part-size", cfg.part_size, "tree partition granularity");
  cmd->add_option("--part-restarts", cfg.part_restarts, "greedy restarts per tree part");
  cmd->add_option("--stage-restarts", cfg.stage_restarts, "restarts of a whole pipeline stage");
  cmd->add_option("--chain-max-len", cfg.chain_max_len, "max diamond-chain length");
  cmd->add_option("--tree-enum-cap", cfg.tree_enum_cap, "max vertices for exhaustive tree listing");
}
// ---------------------------------------------------------------- construct

struct ConstructArgs {
  std::string kind = "parity";
  int k = 3;
  int tree_n = 6;
  int q = 3;
  std::string out = "construct";
};

int run_construct(const ConstructArgs& a, const hxt::Config& cfg) {
  if (a.kind == "parity" && a.tree_n % 2 != 0)
    throw std::invalid_argument("parity kind blocks all-odd-degree trees, which need an even "
                                "vertex count; got --tree-n " + std::to_string(a.tree_n));
  int N = hxt::expansion_order(a.tree_n, a.k);

  Provenance prov;
  prov.command = "construct";
  prov.cfg = cfg;
  prov.seed = cfg.seed;
  prov.arg("kind", a.kind);
  prov.arg("k", a.k);
  prov.arg("tree_n", a.tree_n);
  if (a.kind == "modq") prov.arg("q", a.q);
  prov.arg("N", N);

  hxt::Hypergraph host(2, 2);
  std::string part_line;
  ordered_json extra;
  if (a.kind == "parity") {
    auto c = hxt::build_parity_construction(N, a.k);
    std::string why;
    if (!hxt::verify_parity_host(c.host, c.parts, &why))
      throw std::logic_error("constructed host failed its own audit: " + why);
    host = c.host;
    part_line.assign(static_cast<std::size_t>(N), 'B');
    for (int v : c.parts.a.to_vector()) part_line[static_cast<std::size_t>(v)] = 'A';
    extra["side_a"] = c.parts.a.count();
    extra["side_b"] = c.parts.b.count();
  } else if (a.kind == "modq") {
    if (a.q < 2 || a.q > 10)
      throw std::invalid_argument("--q must be in [2, 10] so classes fit one digit each");
    auto c = hxt::build_modq_construction(N, a.k, a.q);
    std::string why;
    if (!hxt::verify_modq_host(c.host, c.color, a.q, &why))
      throw std::logic_error("constructed host failed its own audit: " + why);
    host = c.host;
    part_line.resize(static_cast<std::size_t>(N));
    std::vector<int> class_sizes(static_cast<std::size_t>(a.q), 0);
    for (int v = 0; v < N; ++v) {
      int cls = c.color[static_cast<std::size_t>(v)] - 1;
      part_line[static_cast<std::size_t>(v)] = static_cast<char>('0' + cls);
      ++class_sizes[static_cast<std::size_t>(cls)];
    }
    extra["q"] = a.q;
    extra["adjusted"] = c.adjusted;
    extra["color_sum_mod_q"] = c.color_sum() % a.q;
    extra["class_sizes"] = json_of_vec(class_sizes);
  } else {
    throw std::invalid_argument("unknown --kind " + a.kind + " (expected parity or modq)");
  }

  std::vector<std::string> comments;
  {
    std::istringstream block(prov.comment_block());
    std::string line;
    while (std::getline(block, line)) comments.push_back(line.substr(2));
  }

  std::string hg_path = a.out + ".hg";
  std::string part_path = a.out + ".part";
  std::string deg_path = a.out + ".degrees.json";
  {
    std::ofstream out(hg_path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot write " + hg_path);
    hxt::serialize_hypergraph(host, out, comments);
  }
  {
    std::ofstream out(part_path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot write " + part_path);
    out << prov.comment_block() << part_line << "\n";
  }
  {
    Sink sink(deg_path);
    ordered_json j;
    j["provenance"] = prov.json();
    j["n"] = host.n();
    j["k"] = host.k();
    j["edges"] = host.edge_count();
    for (auto& [key, val] : extra.items()) j[key] = val;
    j["degree_profile"] = degree_profile_json(host);
    write_json(sink, j);
  }
  std::cout << "wrote " << hg_path << "\n";
  std::cout << "wrote " << part_path << "\n";
  std::cout << "wrote " << deg_path << "\n";
  return kExitOk;
}

// ---------------------------------------------------------- verify-nonembed

struct VerifyArgs {
  std::string hypergraph_path;
  std::string partition_path;
  std::string tree_class = "all-odd";
  int tree_n = 6;
  int q = 0;  // 0: infer from the partition file
  std::string construction = "auto";
  std::string out = "-";
};

// The partition file uses letters for two-sided splits and digits for
// colour classes; that distinction picks the certificate family.
std::string sniff_partition_kind(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    for (char c : line) {
      if (c == 'A' || c == 'B') return "parity";
      if (c >= '0' && c <= '9') return "modq";
    }
  }
  throw std::invalid_argument("no partition line in " + path);
}

bool tree_in_class(const hxt::Tree& t, const std::string& cls, int q) {
  auto deg = hxt::classify_degrees(t);
  if (cls == "all") return true;
  if (cls == "all-odd") return deg.all_odd;
  if (cls == "has-even") return deg.has_even_vertex;
  if (cls == "one-mod-q") {
    for (int v : deg.one_mod_q)
      if (v == q) return true;
    return false;
  }
  throw std::invalid_argument("unknown --tree-class " + cls);
}

int run_verify_nonembed(const VerifyArgs& a, const hxt::Config& cfg) {
  hxt::Hypergraph host = hxt::parse_hypergraph_file(a.hypergraph_path);
  std::vector<int> labels = hxt::parse_partition_file(a.partition_path, host.n());
  std::string kind = a.construction == "auto" ? sniff_partition_kind(a.partition_path) : a.construction;

  int k = host.k();
  if (host.n() != hxt::expansion_order(a.tree_n, k))
    throw std::invalid_argument("host order " + std::to_string(host.n()) +
                                " does not fit spanning expansions of trees on " +
                                std::to_string(a.tree_n) + " vertices (needs " +
                                std::to_string(hxt::expansion_order(a.tree_n, k)) + ")");

  std::optional<hxt::ParityConstruction> parity;
  std::optional<hxt::ModQConstruction> modq;
  int q = a.q;
  std::string why;
  if (kind == "parity") {
    hxt::ParityConstruction c;
    c.host = host;
    c.parts = hxt::Bipartition::from_labels(labels);
    if (!hxt::verify_parity_host(c.host, c.parts, &why))
      throw std::invalid_argument("host/partition is not the odd-intersection construction: " + why);
    parity = std::move(c);
    q = 2;
  } else if (kind == "modq") {
    if (q == 0) {
      for (int l : labels) q = std::max(q, l + 1);
      q = std::max(q, 2);
    }
    hxt::ModQConstruction c;
    c.host = host;
    c.q = q;
    c.color.reserve(labels.size());
    for (int l : labels) c.color.push_back(l + 1);
    if (!hxt::verify_modq_host(c.host, c.color, q, &why))
      throw std::invalid_argument("host/partition is not the colour-sum construction: " + why);
    modq = std::move(c);
  } else {
    throw std::invalid_argument("unknown --construction " + kind);
  }

  Provenance prov;
  prov.command = "verify-nonembed";
  prov.cfg = cfg;
  prov.seed = cfg.seed;
  prov.arg("hypergraph", a.hypergraph_path);
  prov.arg("partition", a.partition_path);
  prov.arg("construction", kind);
  if (kind == "modq") prov.arg("q", q);
  prov.arg("tree_class", a.tree_class);
  prov.arg("tree_n", a.tree_n);

  auto trees = hxt::enumerate_free_trees(a.tree_n, cfg.tree_enum_cap);

  Sink sink(a.out);
  std::ostream& out = sink.stream();
  out << prov.comment_block();
  out << "tree_index,max_degree,all_odd,has_even,certificate,oracle,oracle_nodes\n";

  hxt::OracleOptions opt;
  opt.spanning = true;
  opt.node_budget = static_cast<long long>(cfg.oracle_node_budget);

  int disagreements = 0;
  for (std::size_t i = 0; i < trees.size(); ++i) {
    const hxt::Tree& t = trees[i];
    if (!tree_in_class(t, a.tree_class, q)) continue;
    auto deg = hxt::classify_degrees(t);

    hxt::Certificate cert;
    if (parity) {
      cert = hxt::parity_certificate(*parity, t, k);
      if (!hxt::replay_certificate(cert, *parity, t, k, &why))
        throw std::logic_error("certificate replay failed: " + why);
    } else {
      cert = hxt::modq_certificate(*modq, t, k);
      if (!hxt::replay_certificate(cert, *modq, t, k, &why))
        throw std::logic_error("certificate replay failed: " + why);
    }

    auto x = hxt::expand_tree(t, k);
    auto res = hxt::brute_force_embed(host, x, opt);
    std::string oracle = res.status == hxt::OracleStatus::Found     ? "found"
                         : res.status == hxt::OracleStatus::None    ? "none"
                                                                    : "timeout";
    if (res.status == hxt::OracleStatus::Found) {
      if (!hxt::check_embedding(host, x, *res.embedding, true))
        throw std::logic_error("oracle returned a map that fails the embedding check");
      if (cert.blocked) ++disagreements;
    }

    out << i << "," << deg.max_degree << "," << (deg.all_odd ? 1 : 0) << ","
        << (deg.has_even_vertex ? 1 : 0) << ","
        << (cert.blocked ? "blocked" : "inconclusive") << "," << oracle << "," << res.nodes
        << "\n";
  }

  if (disagreements > 0) {
    std::cerr << "internal consistency violation: " << disagreements
              << " tree(s) embedded despite a blocking certificate\n";
    return kExitInconsistent;
  }
  return kExitOk;
}

// ----------------------------------------------------------- scan-threshold

struct ScanArgs {
  int k = 3;
  int N = 11;
  double grid_min = 0.3;
  double grid_max = 0.7;
  double grid_step = 0.1;
  int trials = 20;
  std::string out = "-";
};

int run_scan_threshold(const ScanArgs& a, const hxt::Config& cfg) {
  if (a.k < 2) throw std::invalid_argument("--k must be at least 2");
  if (a.N < a.k) throw std::invalid_argument("--N must be at least k");
  if (a.trials < 0) throw std::invalid_argument("--trials must be nonnegative");
  if (a.grid_step <= 0) throw std::invalid_argument("--grid-step must be positive");
  if ((a.N + a.k - 2) / (a.k - 1) > cfg.tree_enum_cap)
    throw std::invalid_argument("oracle cap exceeded: N " + std::to_string(a.N) +
                                " needs base trees beyond the listing cap " +
                                std::to_string(cfg.tree_enum_cap));
  if ((a.N + a.k - 2) % (a.k - 1) != 0)
    throw std::invalid_argument("no spanning expansion fits: N + k - 2 must be divisible by k - 1");
  int tree_n = (a.N + a.k - 2) / (a.k - 1);
  if (tree_n < 2)
    throw std::invalid_argument("--N too small: no base tree fits");

  Provenance prov;
  prov.command = "scan-threshold";
  prov.cfg = cfg;
  prov.seed = cfg.seed;
  prov.workers = cfg.workers;
  prov.arg("k", a.k);
  prov.arg("N", a.N);
  prov.arg("tree_n", tree_n);
  prov.arg("grid", fmt_double(a.grid_min) + ":" + fmt_double(a.grid_max) + ":" + fmt_double(a.grid_step));
  prov.arg("trials", a.trials);

  auto trees = hxt::enumerate_free_trees(tree_n, cfg.tree_enum_cap);
  std::vector<int> odd_ids, even_ids;
  for (std::size_t i = 0; i < trees.size(); ++i) {
    auto deg = hxt::classify_degrees(trees[i]);
    (deg.all_odd ? odd_ids : even_ids).push_back(static_cast<int>(i));
  }

  int grid_count = static_cast<int>((a.grid_max - a.grid_min) / a.grid_step + 1e-9) + 1;
  if (grid_count < 1) grid_count = 0;

  struct Task {
    double density = 0;
    int trial = 0;
    std::uint64_t row_seed = 0;
  };
  std::vector<Task> tasks;
  for (int g = 0; g < grid_count; ++g)
    for (int t = 0; t < a.trials; ++t) {
      Task task;
      task.density = a.grid_min + g * a.grid_step;
      task.trial = t;
      task.row_seed =
          hxt::Rng::derive(cfg.seed, static_cast<std::uint64_t>(g) * 1000003ull + static_cast<std::uint64_t>(t));
      tasks.push_back(task);
    }

  hxt::OracleOptions opt;
  opt.spanning = true;
  opt.node_budget = static_cast<long long>(cfg.oracle_node_budget);

  auto run_row = [&](const Task& task) {
    hxt::Hypergraph h = hxt::random_hypergraph(a.N, a.k, task.density, task.row_seed);
    std::ostringstream row;
    row << fmt_double(task.density) << "," << task.trial << "," << task.row_seed << ","
        << h.edge_count();
    for (int d = 1; d < a.k; ++d) {
      auto p = hxt::min_d_degree(h, d);
      row << "," << p.min_degree << "," << p.normalized_min.str();
    }
    auto scan_class = [&](const std::vector<int>& ids) {
      int embeds = 0, timeouts = 0;
      for (int id : ids) {
        auto x = hxt::expand_tree(trees[static_cast<std::size_t>(id)], a.k);
        auto res = hxt::brute_force_embed(h, x, opt);
        if (res.status == hxt::OracleStatus::Found) ++embeds;
        if (res.status == hxt::OracleStatus::Timeout) ++timeouts;
      }
      row << "," << ids.size() << "," << embeds << "," << timeouts;
    };
    scan_class(odd_ids);
    scan_class(even_ids);
    return row.str();
  };

  std::vector<std::string> rows(tasks.size());
  int workers = std::max(1, cfg.workers);
  if (workers == 1 || tasks.size() <= 1) {
    for (std::size_t i = 0; i < tasks.size(); ++i) rows[i] = run_row(tasks[i]);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        while (true) {
          std::size_t i = next.fetch_add(1);
          if (i >= tasks.size()) return;
          rows[i] = run_row(tasks[i]);
        }
      });
    for (auto& th : pool) th.join();
  }

  Sink sink(a.out);
  std::ostream& out = sink.stream();
  out << prov.comment_block();
  out << "density,trial,row_seed,edges";
  for (int d = 1; d < a.k; ++d) out << ",delta" << d << ",delta" << d << "_norm";
  out << ",allodd_total,allodd_embed,allodd_timeout,haseven_total,haseven_embed,haseven_timeout\n";
  for (const auto& r : rows) out << r << "\n";
  return kExitOk;
}

// ------------------------------------------------------------ gadget-census

struct CensusArgs {
  std::string hypergraph_path;
  std::string partition_path;
  std::string gamma = "1/10";
  std::string mu = "1/8";
  int t = 2;
  int limit = 50;
  std::string out = "-";
};

int run_gadget_census(const CensusArgs& a, const hxt::Config& cfg) {
  hxt::Hypergraph h = hxt::parse_hypergraph_file(a.hypergraph_path);
  std::vector<int> labels = hxt::parse_partition_file(a.partition_path, h.n());
  for (int l : labels)
    if (l > 1)
      throw std::invalid_argument("gadget census needs a two-class partition (A/B or 0/1)");
  hxt::Bipartition part = hxt::Bipartition::from_labels(labels);
  hxt::Rational gamma = hxt::parse_rational(a.gamma);
  hxt::Rational mu = hxt::parse_rational(a.mu);

  Provenance prov;
  prov.command = "gadget-census";
  prov.cfg = cfg;
  prov.seed = cfg.seed;
  prov.arg("hypergraph", a.hypergraph_path);
  prov.arg("partition", a.partition_path);
  prov.arg("gamma", gamma.str());
  prov.arg("mu", mu.str());
  prov.arg("t", a.t);
  prov.arg("limit", a.limit);

  ordered_json j;
  j["provenance"] = prov.json();
  j["n"] = h.n();
  j["k"] = h.k();
  j["edges"] = h.edge_count();

  // Diamond table: per-pair counts, plus the cross/within split.
  auto dc = hxt::count_diamonds(h);
  long long cross = 0, within_a = 0, within_b = 0;
  ordered_json pairs = ordered_json::array();
  for (int u = 0; u < h.n(); ++u)
    for (int v = u + 1; v < h.n(); ++v) {
      long long c = dc.pair_counts[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)];
      if (c == 0) continue;
      pairs.push_back(ordered_json::array({u, v, c}));
      bool ua = part.a.test(u), va = part.a.test(v);
      if (ua != va)
        cross += c;
      else if (ua)
        within_a += c;
      else
        within_b += c;
    }
  {
    ordered_json d;
    d["total"] = dc.total;
    d["cross"] = cross;
    d["within_a"] = within_a;
    d["within_b"] = within_b;
    d["pairs"] = pairs;
    j["diamonds"] = d;
  }

  // Diamond graph: minimum degree, independent-triple scan, best cut.
  auto dg = hxt::diamond_graph(h, gamma);
  {
    std::vector<int> degs(static_cast<std::size_t>(dg.n), 0);
    for (auto& [u, v] : dg.edges) {
      ++degs[static_cast<std::size_t>(u)];
      ++degs[static_cast<std::size_t>(v)];
    }
    int mindeg = dg.n > 0 ? degs[0] : 0;
    for (int d : degs) mindeg = std::min(mindeg, d);
    bool indep_triple = false;
    std::vector<int> witness;
    for (int u = 0; u < dg.n && !indep_triple; ++u)
      for (int v = u + 1; v < dg.n && !indep_triple; ++v) {
        if (dg.has(u, v)) continue;
        for (int w = v + 1; w < dg.n; ++w)
          if (!dg.has(u, w) && !dg.has(v, w)) {
            indep_triple = true;
            witness = {u, v, w};
            break;
          }
      }
    auto sep = hxt::find_separation(dg, mu, cfg.exact_separation_cap,
                                    hxt::Rng::derive(cfg.seed, 1), cfg.part_restarts);
    ordered_json g;
    g["threshold"] = dg.threshold.str();
    g["edges"] = static_cast<long long>(dg.edges.size());
    g["min_degree"] = mindeg;
    g["independence_at_most_two"] = !indep_triple;
    if (indep_triple) g["independent_triple"] = json_of_vec(witness);
    ordered_json s;
    s["separable"] = sep.separable;
    s["exact"] = sep.exact;
    s["cross_edges"] = sep.cross_edges;
    s["ratio"] = sep.ratio.str();
    s["side_a"] = json_of_vec(sep.side_a.to_vector());
    s["side_b"] = json_of_vec(sep.side_b.to_vector());
    g["separation"] = s;
    j["diamond_graph"] = g;
  }

  // Chains: scan vertex pairs in ascending order until the pair cap.
  {
    const int pair_cap = 64;
    int scanned = 0;
    long long chains_found = 0;
    bool all_exhaustive = true;
    for (int u = 0; u < h.n() && scanned < pair_cap; ++u)
      for (int v = u + 1; v < h.n() && scanned < pair_cap; ++v) {
        auto cs = hxt::find_diamond_chains(h, u, v, cfg.chain_max_len, 8, hxt::VertexSet(),
                                           cfg.search_node_budget);
        chains_found += static_cast<long long>(cs.chains.size());
        all_exhaustive = all_exhaustive && cs.exhaustive;
        ++scanned;
      }
    ordered_json c;
    c["pairs_scanned"] = scanned;
    c["max_len"] = cfg.chain_max_len;
    c["per_pair_limit"] = 8;
    c["found"] = chains_found;
    c["exhaustive"] = all_exhaustive;
    j["chains"] = c;
  }

  // Proto-balancers and balancers within budget.
  {
    auto ps = hxt::find_proto_balancers(h, part, a.limit, cfg.search_node_budget);
    ordered_json p;
    p["found"] = static_cast<long long>(ps.found.size());
    p["exhaustive"] = ps.exhaustive;
    p["nodes"] = static_cast<long long>(ps.nodes);
    j["proto_balancers"] = p;
  }
  {
    ordered_json rows = ordered_json::array();
    for (int t_a = 0; t_a <= a.t; ++t_a) {
      int t_b = a.t - t_a;
      auto found = hxt::find_balancers(h, part, t_a, t_b, std::min(a.limit, 8),
                                       hxt::Rng::derive(cfg.seed, 100 + static_cast<std::uint64_t>(t_a)));
      ordered_json row;
      row["t_a"] = t_a;
      row["t_b"] = t_b;
      row["capacity"] = 1 + t_b - t_a;
      row["found"] = static_cast<long long>(found.size());
      rows.push_back(row);
    }
    j["balancers"] = rows;
  }

  // Pi distribution and its agreement with the two sides.
  {
    auto pt = hxt::pi_type(h, part);
    long long zeros = 0, ones = 0, degen = 0;
    bool matches = true;
    for (int v = 0; v < h.n(); ++v) {
      int bit = pt.pi[static_cast<std::size_t>(v)];
      (bit == 0 ? zeros : ones)++;
      if (pt.degenerate[static_cast<std::size_t>(v)]) ++degen;
      if (bit != (part.a.test(v) ? 0 : 1)) matches = false;
    }
    ordered_json p;
    p["zeros"] = zeros;
    p["ones"] = ones;
    p["degenerate"] = degen;
    p["equals_side_indicator"] = matches;
    j["pi"] = p;
  }

  Sink sink(a.out);
  write_json(sink, j);
  return kExitOk;
}

// -------------------------------------------------------------------- embed

struct EmbedArgs {
  std::string hypergraph_path;
  std::string tree_path;
  std::string mode = "oracle";
  int d = 0;  // 0: pick the mode default
  std::string gamma = "";
  std::string mu = "";
  std::string out = "-";
};

ordered_json trace_json(const hxt::PipelineTrace& tr) {
  ordered_json t;
  t["branch"] = tr.branch;
  ordered_json stages = ordered_json::array();
  for (const auto& s : tr.stages) {
    ordered_json row;
    row["stage"] = s.stage;
    row["status"] = s.status;
    if (s.covered >= 0) row["covered"] = s.covered;
    for (const auto& [k, v] : s.counts) row[k] = v;
    stages.push_back(row);
  }
  t["stages"] = stages;
  t["switches"] = tr.switch_log;
  ordered_json ledger = ordered_json::array();
  for (const auto& [fa, fb] : tr.parity_ledger) ledger.push_back(ordered_json::array({fa, fb}));
  t["free_split_ledger"] = ledger;
  return t;
}

ordered_json failure_json(const hxt::FailureReport& f) {
  ordered_json j;
  j["stage"] = f.stage;
  j["message"] = f.message;
  if (f.absorb) {
    ordered_json ab;
    ab["edge_id"] = f.absorb->edge_id;
    ab["parent_image"] = f.absorb->parent_image;
    ab["free_a"] = f.absorb->free_a;
    ab["free_b"] = f.absorb->free_b;
    ab["parent_pi"] = f.absorb->parent_pi;
    ab["message"] = f.absorb->message;
    j["absorb"] = ab;
  }
  return j;
}

std::vector<int> map_of(const hxt::PartialEmbedding& pe) {
  std::vector<int> map(static_cast<std::size_t>(pe.target().target.n()));
  for (std::size_t v = 0; v < map.size(); ++v) map[v] = pe.to_host(static_cast<int>(v));
  return map;
}

int run_embed(const EmbedArgs& a, hxt::Config cfg) {
  hxt::Hypergraph host = hxt::parse_hypergraph_file(a.hypergraph_path);
  hxt::Tree tree = hxt::parse_tree_file(a.tree_path);
  int k = host.k();
  hxt::ExpansionTree x = hxt::expand_tree(tree, k);
  if (!a.gamma.empty()) cfg.gamma = hxt::parse_rational(a.gamma).to_double();
  if (!a.mu.empty()) cfg.mu = hxt::parse_rational(a.mu).to_double();

  Provenance prov;
  prov.command = "embed";
  prov.cfg = cfg;
  prov.seed = cfg.seed;
  prov.arg("hypergraph", a.hypergraph_path);
  prov.arg("tree", a.tree_path);
  prov.arg("mode", a.mode);
  prov.arg("tree_n", tree.n());
  prov.arg("expansion_n", x.target.n());

  ordered_json j;
  j["provenance"] = prov.json();
  j["mode"] = a.mode;

  Sink sink(a.out);

  if (a.mode == "oracle" || a.mode == "pipeline1" || a.mode == "pipeline2") {
    if (host.n() != x.target.n())
      throw std::invalid_argument("spanning modes need host order " + std::to_string(x.target.n()) +
                                  ", got " + std::to_string(host.n()));
  }

  if (a.mode == "oracle") {
    hxt::OracleOptions opt;
    opt.spanning = true;
    opt.node_budget = static_cast<long long>(cfg.oracle_node_budget);
    auto res = hxt::brute_force_embed(host, x, opt);
    j["nodes"] = res.nodes;
    if (res.status == hxt::OracleStatus::Found) {
      if (!hxt::check_embedding(host, x, *res.embedding, true)) {
        std::cerr << "internal consistency violation: oracle map failed the embedding check\n";
        return kExitInconsistent;
      }
      j["status"] = "embedded";
      j["map"] = json_of_vec(*res.embedding);
      write_json(sink, j);
      return kExitOk;
    }
    j["status"] = res.status == hxt::OracleStatus::None ? "none" : "timeout";
    write_json(sink, j);
    return kExitNotFound;
  }

  if (a.mode == "pipeline1" || a.mode == "pipeline2") {
    int d = a.d > 0 ? a.d : 1;
    prov.arg("d", d);
    j["provenance"] = prov.json();
    hxt::PipelineResult res = a.mode == "pipeline1"
                                  ? hxt::pipeline_embed_thm1(host, x, d, cfg, cfg.seed)
                                  : hxt::pipeline_embed_thm2(host, x, cfg, cfg.seed);
    j["attempts_used"] = res.attempts_used;
    j["trace"] = trace_json(res.trace);
    if (res.ok()) {
      std::vector<int> map = map_of(*res.embedding);
      if (!hxt::check_embedding(host, x, map, true)) {
        std::cerr << "internal consistency violation: pipeline map failed the embedding check\n";
        return kExitInconsistent;
      }
      j["status"] = "embedded";
      j["map"] = json_of_vec(map);
      write_json(sink, j);
      return kExitOk;
    }
    j["status"] = "failed";
    if (res.failure) j["failure"] = failure_json(*res.failure);
    write_json(sink, j);
    return kExitNotFound;
  }

  if (a.mode == "almost") {
    int needed = x.target.n();
    if (host.n() < needed)
      throw std::invalid_argument("host order " + std::to_string(host.n()) +
                                  " is below the expansion order " + std::to_string(needed));
    int d = a.d > 0 ? a.d : k - 1;
    prov.arg("d", d);
    j["provenance"] = prov.json();
    const bool use_oracle = needed <= 12;
    j["engine"] = use_oracle ? "oracle" : "pipeline1";

    ordered_json attempts = ordered_json::array();
    for (int attempt = 0; attempt < std::max(1, cfg.attempt_cap); ++attempt) {
      std::vector<int> ids(static_cast<std::size_t>(host.n()));
      for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = static_cast<int>(i);
      hxt::Rng rng(hxt::Rng::derive(cfg.seed, 40000 + static_cast<std::uint64_t>(attempt)));
      rng.shuffle(ids);
      ids.resize(static_cast<std::size_t>(needed));
      auto [sub_host, old_id] = hxt::induced_subgraph(host, hxt::VertexSet::from_vector(ids));

      std::optional<std::vector<int>> sub_map;
      std::string note;
      if (use_oracle) {
        hxt::OracleOptions opt;
        opt.spanning = true;
        opt.node_budget = static_cast<long long>(cfg.oracle_node_budget);
        auto res = hxt::brute_force_embed(sub_host, x, opt);
        if (res.status == hxt::OracleStatus::Found)
          sub_map = *res.embedding;
        else
          note = res.status == hxt::OracleStatus::None ? "none" : "timeout";
      } else {
        auto res = hxt::pipeline_embed_thm1(sub_host, x, d, cfg,
                                            hxt::Rng::derive(cfg.seed, 50000 + static_cast<std::uint64_t>(attempt)));
        if (res.ok())
          sub_map = map_of(*res.embedding);
        else
          note = res.failure ? res.failure->stage + ": " + res.failure->message : "failed";
      }

      ordered_json arec;
      arec["attempt"] = attempt;
      arec["subset"] = json_of_vec(old_id);
      arec["outcome"] = sub_map ? "embedded" : note;
      attempts.push_back(arec);

      if (sub_map) {
        std::vector<int> map(sub_map->size());
        for (std::size_t v = 0; v < map.size(); ++v)
          map[v] = old_id[static_cast<std::size_t>((*sub_map)[v])];
        bool spanning = host.n() == needed;
        if (!hxt::check_embedding(host, x, map, spanning)) {
          std::cerr << "internal consistency violation: relabelled map failed the embedding check\n";
          return kExitInconsistent;
        }
        j["status"] = "embedded";
        j["attempts"] = attempts;
        j["subset"] = json_of_vec(old_id);
        j["map"] = json_of_vec(map);
        write_json(sink, j);
        return kExitOk;
      }
    }
    j["status"] = "failed";
    j["attempts"] = attempts;
    write_json(sink, j);
    return kExitNotFound;
  }

  throw std::invalid_argument("unknown --mode " + a.mode);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"desk-scale laboratory for k-expansion hypertrees in dense k-graphs"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  hxt::Config cfg = base_config();

  ConstructArgs ca;
  auto* construct = app.add_subcommand("construct", "build an obstruction host and its partition");
  construct->add_option("--kind", ca.kind, "parity or modq")->default_str("parity");
  construct->add_option("--k", ca.k, "edge size")->default_str("3");
  construct->add_option("--tree-n", ca.tree_n, "base tree order the host is sized against")->required();
  construct->add_option("--q", ca.q, "modulus for kind=modq")->default_str("3");
  construct->add_option("--out", ca.out, "output path prefix")->default_str("construct");

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify-nonembed",
                                    "cross-check blocking certificates against the exhaustive oracle");
  verify->add_option("--hypergraph", va.hypergraph_path, "host file")->required();
  verify->add_option("--partition", va.partition_path, "partition file")->required();
  verify->add_option("--tree-class", va.tree_class, "all-odd, has-even, one-mod-q or all")
      ->default_str("all-odd");
  verify->add_option("--tree-n", va.tree_n, "base tree order")->required();
  verify->add_option("--q", va.q, "modulus override for digit partitions");
  verify->add_option("--construction", va.construction, "parity, modq or auto")->default_str("auto");
  verify->add_option("--out", va.out, "CSV path, - for stdout")->default_str("-");

  ScanArgs sa;
  auto* scan = app.add_subcommand("scan-threshold",
                                  "density grid scan: exact degrees and oracle embeddability");
  scan->add_option("--k", sa.k, "edge size")->default_str("3");
  scan->add_option("--N", sa.N, "host order")->required();
  scan->add_option("--grid-min", sa.grid_min, "lowest density")->default_str("0.3");
  scan->add_option("--grid-max", sa.grid_max, "highest density")->default_str("0.7");
  scan->add_option("--grid-step", sa.grid_step, "density step")->default_str("0.1");
  scan->add_option("--trials", sa.trials, "hosts per density")->default_str("20");
  scan->add_option("--out", sa.out, "CSV path, - for stdout")->default_str("-");

  CensusArgs ga;
  auto* census = app.add_subcommand("gadget-census",
                                    "diamonds, diamond graph, chains, balancers and pi types");
  census->add_option("--hypergraph", ga.hypergraph_path, "host file")->required();
  census->add_option("--partition", ga.partition_path, "two-class partition file")->required();
  census->add_option("--gamma", ga.gamma, "diamond-graph threshold fraction")->default_str("1/10");
  census->add_option("--mu", ga.mu, "separation threshold")->default_str("1/8");
  census->add_option("--t", ga.t, "balancer leaf count to search")->default_str("2");
  census->add_option("--limit", ga.limit, "find limit per search")->default_str("50");
  census->add_option("--out", ga.out, "JSON path, - for stdout")->default_str("-");

  EmbedArgs ea;
  auto* embed = app.add_subcommand("embed", "embed a tree expansion by oracle or pipeline");
  embed->add_option("--hypergraph", ea.hypergraph_path, "host file")->required();
  embed->add_option("--tree", ea.tree_path, "base tree file")->required();
  embed->add_option("--mode", ea.mode, "oracle, pipeline1, pipeline2 or almost")->required();
  embed->add_option("--d", ea.d, "degree depth driving the reservoir (default 1, almost: k-1)");
  embed->add_option("--gamma", ea.gamma, "diamond-graph threshold override");
  embed->add_option("--mu", ea.mu, "separation threshold override");
  embed->add_option("--out", ea.out, "JSON path, - for stdout")->default_str("-");

  for (auto* cmd : {construct, verify, scan, census, embed}) {
    cmd->add_option("--seed", cfg.seed, "64-bit run seed");
    cmd->add_option("--workers", cfg.workers, "worker threads (1 keeps rows sequential)");
    add_config_flags(cmd, cfg);
  }

  CLI11_PARSE(app, argc, argv);

  try {
    if (*construct) return run_construct(ca, cfg);
    if (*verify) return run_verify_nonembed(va, cfg);
    if (*scan) return run_scan_threshold(sa, cfg);
    if (*census) return run_gadget_census(ga, cfg);
    if (*embed) return run_embed(ea, cfg);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::logic_error& e) {
    std::cerr << "internal consistency violation: " << e.what() << "\n";
    return kExitInconsistent;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}
