#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "grtl/graph.hpp"
#include "grtl/oracles.hpp"
#include "grtl/rng.hpp"

using namespace grtl;

TEST_SUITE_BEGIN("graph");

TEST_CASE("edges are canonicalized and validated") {
  Graph g = graph_from_edges(4, false, {{2, 1}, {0, 3}, {0, 1}});
  CHECK(g.edges == std::vector<std::pair<int, int>>{{0, 1}, {0, 3}, {1, 2}});
  CHECK(g.has_edge(1, 2));
  CHECK(g.has_edge(2, 1));
  CHECK_FALSE(g.has_edge(2, 3));

  CHECK_THROWS_AS(graph_from_edges(3, false, {{0, 1}, {1, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(graph_from_edges(3, false, {{0, 3}}), std::invalid_argument);
  CHECK_THROWS_AS(graph_from_edges(3, false, {{1, 1}}), std::invalid_argument);
  CHECK_NOTHROW(graph_from_edges(3, false, {{1, 1}}, true));

  Graph d = graph_from_edges(3, true, {{1, 0}, {0, 1}});
  CHECK(d.edges.size() == 2);
  CHECK(d.has_edge(0, 1));
  CHECK(d.has_edge(1, 0));
  CHECK_FALSE(d.has_edge(1, 2));
}

TEST_CASE("adjacency views agree") {
  Graph g = graph_from_edges(4, true, {{0, 1}, {1, 2}, {2, 0}, {0, 2}});
  auto adj = adjacency_lists(g);
  CHECK(adj[0] == std::vector<int>{1, 2});
  CHECK(adj[3].empty());
  auto in = in_adjacency_lists(g);
  CHECK(in[2] == std::vector<int>{0, 1});
  auto m = adjacency_matrix(g);
  CHECK(m[0][1] == 1);
  CHECK(m[1][0] == 0);
  CHECK(out_degrees(g) == std::vector<int>{2, 1, 1, 0});
}

TEST_CASE("json round trip") {
  Graph g = gen_erdos_renyi(17, 0.3, 99);
  Graph back = graph_from_json(graph_to_json(g));
  CHECK(back.n == g.n);
  CHECK(back.directed == g.directed);
  CHECK(back.edges == g.edges);

  Graph d = gen_digraph(9, 1, 4, 14, 2, 5);
  Graph dback = graph_from_json(graph_to_json(d));
  CHECK(dback.edges == d.edges);
  CHECK(dback.directed);

  CHECK_THROWS_AS(graph_from_json(json{{"n", 3}}), std::invalid_argument);
}

TEST_CASE("gen_cycles produces one or two cycles") {
  for (uint64_t seed : {1u, 2u, 3u}) {
    Graph one = gen_cycles(12, 1, seed);
    CHECK(one.edges.size() == 12);
    CHECK(oracle_connected(one));
    for (int deg : out_degrees(one)) CHECK(deg == 2);

    Graph two = gen_cycles(12, 2, seed);
    CHECK(two.edges.size() == 12);
    CHECK_FALSE(oracle_connected(two));
    CHECK(component_count_unionfind(two) == 2);
    for (int deg : out_degrees(two)) CHECK(deg == 2);
  }
  CHECK(gen_cycles(3, 1, 0).edges.size() == 3);
  CHECK_THROWS_AS(gen_cycles(7, 2, 0), std::invalid_argument);
  CHECK_THROWS_AS(gen_cycles(4, 2, 0), std::invalid_argument);
  CHECK_THROWS_AS(gen_cycles(12, 3, 0), std::invalid_argument);
  // Seeds permute labels, not structure.
  CHECK(gen_cycles(10, 1, 1).edges != gen_cycles(10, 1, 2).edges);
  CHECK(gen_cycles(10, 1, 7).edges == gen_cycles(10, 1, 7).edges);
}

TEST_CASE("erdos-renyi edge density matches p") {
  double total = 0;
  for (uint64_t seed = 0; seed < 50; ++seed)
    total += static_cast<double>(gen_erdos_renyi(30, 0.1, seed).edges.size());
  double mean = total / 50.0;  // expectation C(30,2) * 0.1 = 43.5
  CHECK(std::abs(mean - 43.5) < 3.0);
  CHECK(gen_erdos_renyi(10, 0.0, 1).edges.empty());
  CHECK(gen_erdos_renyi(10, 1.0, 1).edges.size() == 45);
}

TEST_CASE("random geometric graph respects the radius") {
  CHECK(random_geometric(20, 0.0, 3).edges.empty());
  CHECK(random_geometric(20, 1.5, 3).edges.size() == 190);
  Graph small = random_geometric(40, 0.1, 11);
  Graph large = random_geometric(40, 0.3, 11);
  CHECK(small.edges.size() < large.edges.size());
  for (auto e : small.edges) CHECK(std::count(large.edges.begin(), large.edges.end(), e) == 1);
}

TEST_CASE("barabasi-albert grows by m edges per node") {
  Graph g = barabasi_albert(20, 2, 4);
  CHECK(g.edges.size() == 3 + 17 * 2);
  CHECK(oracle_connected(g));
  CHECK_THROWS_AS(barabasi_albert(3, 4, 0), std::invalid_argument);
}

TEST_CASE("stochastic block model extremes") {
  Graph split = stochastic_block(10, 2, 1.0, 0.0, 0);
  CHECK(split.edges.size() == 20);  // two K5 blocks
  CHECK_FALSE(oracle_connected(split));
  Graph bipartite = stochastic_block(10, 2, 0.0, 1.0, 0);
  CHECK(bipartite.edges.size() == 25);
  CHECK(oracle_connected(bipartite));
}

TEST_CASE("disjointness gadget has a mutual pair exactly when slots intersect") {
  const int n = 4, d = 2;
  for (int av = 0; av < 256; ++av)
    for (int bv = 0; bv < 256; ++bv) {
      std::vector<int> a(n * d), b(n * d);
      bool intersect = false;
      for (int s = 0; s < n * d; ++s) {
        a[s] = (av >> s) & 1;
        b[s] = (bv >> s) & 1;
        if (a[s] && b[s]) intersect = true;
      }
      Graph g = gen_disjointness_gadget(a, b, n, d);
      auto ind = oracle_two_cycle_indicator(g);
      bool any = std::any_of(ind.begin(), ind.end(), [](int x) { return x == 1; });
      REQUIRE(any == intersect);
    }
}

TEST_CASE("gen_digraph respects degree bounds and plants mutual pairs") {
  Graph g = gen_digraph(64, 1, 8, 200, 5, 42);
  auto deg = out_degrees(g);
  for (int x : deg) {
    CHECK(x >= 1);
    CHECK(x <= 8);
  }
  auto ind = oracle_two_cycle_indicator(g);
  CHECK(std::accumulate(ind.begin(), ind.end(), 0) >= 2);
  CHECK(gen_digraph(64, 1, 8, 200, 5, 42).edges == g.edges);
  CHECK(gen_digraph(64, 1, 8, 200, 5, 43).edges != g.edges);
}

TEST_CASE("corpus generation honors the requested label") {
  CorpusSpec spec;
  spec.families = {"er", "rgg", "ba", "sbm"};
  spec.n = 24;
  spec.count = 12;
  spec.seed = 7;
  for (const Graph& g : gen_corpus(spec, CorpusLabel::connected))
    CHECK(oracle_connected(g));
  for (const Graph& g : gen_corpus(spec, CorpusLabel::disconnected))
    CHECK_FALSE(oracle_connected(g));
  auto c1 = gen_corpus(spec, CorpusLabel::any);
  auto c2 = gen_corpus(spec, CorpusLabel::any);
  REQUIRE(c1.size() == c2.size());
  for (size_t i = 0; i < c1.size(); ++i) CHECK(c1[i].edges == c2[i].edges);
  CHECK_THROWS_AS(gen_corpus(CorpusSpec{}, CorpusLabel::any), std::invalid_argument);
}

TEST_CASE("relabel preserves structure") {
  Graph g = gen_erdos_renyi(15, 0.3, 5);
  Rng rng(123);
  std::vector<int> perm(15);
  std::iota(perm.begin(), perm.end(), 0);
  for (int i = 14; i > 0; --i)
    std::swap(perm[i], perm[rng.next_below(static_cast<uint64_t>(i) + 1)]);
  Graph h = relabel(g, perm);
  CHECK(h.edges.size() == g.edges.size());
  for (auto [u, v] : g.edges) CHECK(h.has_edge(perm[u], perm[v]));
  CHECK_THROWS_AS(relabel(g, std::vector<int>(15, 0)), std::invalid_argument);
}

TEST_SUITE_END();
