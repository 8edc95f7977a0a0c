#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>
#include <sstream>

#include "hxt/bitset.hpp"
#include "hxt/blowup.hpp"
#include "hxt/diamonds.hpp"
#include "hxt/expansion.hpp"
#include "hxt/hypergraph.hpp"
#include "hxt/rational.hpp"
#include "hxt/rng.hpp"

using namespace hxt;

TEST_CASE("vertex set basics") {
  VertexSet s = VertexSet::of({3, 7, 100});
  CHECK(s.count() == 3);
  CHECK(s.test(7));
  CHECK_FALSE(s.test(8));
  CHECK(s.lowest() == 3);
  s.reset(3);
  CHECK(s.lowest() == 7);
  CHECK(s.to_vector() == std::vector<int>{7, 100});

  VertexSet t = VertexSet::interval(5, 9);
  CHECK(t.count() == 4);
  CHECK((s & t).to_vector() == std::vector<int>{7});
  CHECK((s | t).count() == 5);
  CHECK(s.minus(t).to_vector() == std::vector<int>{100});
  CHECK(s.intersects(t));
  CHECK_FALSE(s.contains(t));
  CHECK((s | t).contains(t));
  CHECK(t.intersect_count(VertexSet::full(7)) == 2);

  CHECK(VertexSet().empty());
  CHECK(VertexSet().lowest() == -1);
  CHECK_THROWS_AS(VertexSet().set(kMaxVertices), std::invalid_argument);
}

TEST_CASE("vertex set round trips through vectors and ranges") {
  std::vector<int> vs{0, 1, 63, 64, 65, 200};
  VertexSet s = VertexSet::from_vector(vs);
  CHECK(s.to_vector() == vs);
  int visits = 0;
  s.for_each([&](int v) {
    CHECK(s.test(v));
    ++visits;
  });
  CHECK(visits == static_cast<int>(vs.size()));
}

TEST_CASE("complete hypergraph shape") {
  Hypergraph h = Hypergraph::complete(5, 3);
  CHECK(h.n() == 5);
  CHECK(h.k() == 3);
  CHECK(h.edge_count() == 10);
  for (int v = 0; v < 5; ++v) CHECK(h.incident(v).size() == 6);

  VertexSet e = VertexSet::of({0, 2, 4});
  CHECK(h.has_edge(e));
  REQUIRE(h.edge_id(e).has_value());
  CHECK(h.edge_mask(*h.edge_id(e)) == e);
  CHECK_FALSE(h.has_edge(VertexSet::of({0, 1})));
}

TEST_CASE("edge validation") {
  Hypergraph h(6, 3);
  h.add_edge({0, 1, 2});
  CHECK_THROWS_AS(h.add_edge({0, 1, 2}), std::invalid_argument);  // duplicate
  CHECK_THROWS_AS(h.add_edge({2, 1, 0, 3}), std::invalid_argument);  // wrong size
  CHECK_THROWS_AS(h.add_edge({0, 1, 1}), std::invalid_argument);  // repeat
  CHECK_THROWS_AS(h.add_edge({0, 1, 6}), std::invalid_argument);  // out of range
  CHECK(h.edge_count() == 1);
}

TEST_CASE("degrees and links on the complete 3-graph") {
  Hypergraph h = Hypergraph::complete(5, 3);
  CHECK(h.degree(VertexSet::of({0})) == 6);
  CHECK(h.degree(VertexSet::of({0, 1})) == 3);
  CHECK(h.degree(VertexSet::of({0, 1, 2})) == 1);

  DegreeProfile p1 = min_d_degree(h, 1);
  CHECK(p1.min_degree == 6);
  CHECK(p1.max_degree == 6);
  CHECK(p1.normalized_min == Rational(1));
  DegreeProfile p2 = min_d_degree(h, 2);
  CHECK(p2.min_degree == 3);
  CHECK(p2.min_witness.size() == 2);

  CHECK(check_degree_monotonicity(h, 2, 1));

  Hypergraph lk = link(h, VertexSet::of({4}));
  CHECK(lk.k() == 2);
  CHECK(lk.edge_count() == 6);  // every pair of the other four vertices
  for (int id = 0; id < lk.edge_count(); ++id) CHECK_FALSE(lk.edge_mask(id).test(4));
}

TEST_CASE("hypergraph text form round trips and rejects junk") {
  Hypergraph h = Hypergraph::complete(4, 3);
  std::ostringstream out;
  serialize_hypergraph(h, out, {"sample"});
  std::istringstream in(out.str());
  Hypergraph back = parse_hypergraph(in);
  CHECK(back.n() == 4);
  CHECK(back.edge_count() == h.edge_count());
  for (int id = 0; id < h.edge_count(); ++id) CHECK(back.has_edge(h.edge_mask(id)));

  std::istringstream bad1("3\n0 1 2\n");
  CHECK_THROWS_AS(parse_hypergraph(bad1), std::invalid_argument);
  std::istringstream bad2("3 4\n0 1\n");
  CHECK_THROWS_AS(parse_hypergraph(bad2), std::invalid_argument);
  std::istringstream bad3("3 4\n0 1 9\n");
  CHECK_THROWS_AS(parse_hypergraph(bad3), std::invalid_argument);
  std::istringstream commented("# header next\n3 4\n0 1 2 # tail comment\n");
  CHECK(parse_hypergraph(commented).edge_count() == 1);
}

TEST_CASE("partition text form") {
  std::vector<int> two = parse_partition("AABAB", 5);
  CHECK(two == std::vector<int>{0, 0, 1, 0, 1});
  std::vector<int> digits = parse_partition("01220", 5);
  CHECK(digits == std::vector<int>{0, 1, 2, 2, 0});
  CHECK(partition_to_string(two, true) == "AABAB");
  CHECK(partition_to_string(digits, false) == "01220");
  CHECK_THROWS_AS(parse_partition("AAB", 5), std::invalid_argument);
  CHECK_THROWS_AS(parse_partition("AAXAB", 5), std::invalid_argument);

  Bipartition bp = Bipartition::from_labels(two);
  CHECK(bp.a.count() == 3);
  CHECK(bp.b.count() == 2);
  CHECK(bp.valid_for(5));
  CHECK(bp.side(0) == 0);
  CHECK(bp.side(2) == 1);
}

TEST_CASE("random hypergraph is seed-deterministic") {
  Hypergraph a = random_hypergraph(12, 3, 0.4, 99);
  Hypergraph b = random_hypergraph(12, 3, 0.4, 99);
  REQUIRE(a.edge_count() == b.edge_count());
  for (int id = 0; id < a.edge_count(); ++id) CHECK(a.edge_mask(id) == b.edge_mask(id));

  Hypergraph c = random_hypergraph(12, 3, 0.4, 100);
  bool differs = c.edge_count() != a.edge_count();
  if (!differs)
    for (int id = 0; id < a.edge_count() && !differs; ++id)
      differs = !(a.edge_mask(id) == c.edge_mask(id));
  CHECK(differs);

  CHECK(random_hypergraph(7, 3, 1.0, 5).edge_count() == 35);
  CHECK(random_hypergraph(7, 3, 0.0, 5).edge_count() == 0);
}

TEST_CASE("diamond counts on complete hosts") {
  DiamondCounts c5 = count_diamonds(Hypergraph::complete(5, 3));
  CHECK(c5.total == 30);
  for (int u = 0; u < 5; ++u)
    for (int v = u + 1; v < 5; ++v)
      CHECK(c5.pair_counts[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)] == 3);

  DiamondCounts c8 = count_diamonds(Hypergraph::complete(8, 3));
  CHECK(c8.total == 420);
  CHECK(c8.pair_counts[0][1] == 15);

  std::vector<int> tips = diamond_tips(Hypergraph::complete(5, 3), VertexSet::of({0, 1}));
  CHECK(tips == std::vector<int>{2, 3, 4});
}

TEST_CASE("diamond graph thresholds are exact") {
  Hypergraph h = Hypergraph::complete(6, 3);
  // 6 diamonds per pair; C(6,2) = 15, so gamma = 6/15 keeps everything and
  // anything above drops everything.
  DiamondGraph g1 = diamond_graph(h, Rational(6, 15));
  CHECK(static_cast<int>(g1.edges.size()) == 15);
  DiamondGraph g2 = diamond_graph(h, Rational(7, 15));
  CHECK(g2.edges.empty());
  CHECK(g1.has(0, 5));
  CHECK_FALSE(g2.has(0, 5));
}

TEST_CASE("blow-up of a single edge") {
  Hypergraph h(3, 3);
  h.add_edge({0, 1, 2});
  Blowup b = blow_up(h, {2, 2, 2});
  CHECK(b.result.n() == 6);
  CHECK(b.result.edge_count() == 8);
  CHECK(b.cluster_of(0) == 0);
  CHECK(b.cluster_of(5) == 2);
  Hypergraph back = collapse(b);
  CHECK(back.edge_count() == 1);
  CHECK(back.has_edge(VertexSet::of({0, 1, 2})));
}

TEST_CASE("blow-up of a loose cycle") {
  Hypergraph c3 = loose_cycle(3, 3);
  CHECK(c3.n() == 6);
  CHECK(c3.edge_count() == 3);
  Blowup b = blow_up(c3, std::vector<int>(6, 2));
  CHECK(b.result.n() == 12);
  CHECK(b.result.edge_count() == 24);
  CHECK(collapse(b).edge_count() == 3);
}

TEST_CASE("exact edge blow-up counting") {
  CHECK(count_edge_blowups(Hypergraph::complete(6, 3), 2) == 15);
  CHECK(count_edge_blowups(Hypergraph::complete(5, 3), 1) == 10);
  Hypergraph sparse(6, 3);
  sparse.add_edge({0, 1, 2});
  CHECK(count_edge_blowups(sparse, 2) == 0);
  CHECK_THROWS_AS(count_edge_blowups(Hypergraph::complete(6, 3), 4), std::invalid_argument);
}

TEST_CASE("rational arithmetic stays exact") {
  Rational r(6, 15);
  CHECK(r == Rational(2, 5));
  CHECK(r < Rational(1, 2));
  CHECK(Rational(1, 3) + Rational(1, 6) == Rational(1, 2));
  CHECK(Rational(3, 4) * Rational(2, 3) == Rational(1, 2));
  CHECK(parse_rational("1/10") == Rational(1, 10));
  CHECK(parse_rational("3") == Rational(3));
  CHECK_THROWS_AS(parse_rational("x/2"), std::invalid_argument);
  CHECK(binomial(10, 5) == 252);
  CHECK(binomial(49, 2) == 1176);
}

TEST_CASE("rng streams are reproducible and well-ranged") {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());

  Rng c(7);
  for (int i = 0; i < 1000; ++i) {
    int x = c.below(10);
    CHECK(x >= 0);
    CHECK(x < 10);
  }

  std::vector<int> v1{1, 2, 3, 4, 5, 6, 7, 8}, v2 = v1;
  Rng s1(11), s2(11);
  s1.shuffle(v1);
  s2.shuffle(v2);
  CHECK(v1 == v2);

  CHECK(Rng::derive(5, 1) == Rng::derive(5, 1));
  CHECK(Rng::derive(5, 1) != Rng::derive(5, 2));
  CHECK(Rng::derive(6, 1) != Rng::derive(5, 1));
}
