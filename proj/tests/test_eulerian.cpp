#include <doctest.h>

#include "grtl/eulerian.hpp"
#include "grtl/graph.hpp"
#include "grtl/rng.hpp"

using namespace grtl;

TEST_SUITE_BEGIN("eulerian");

TEST_CASE("hand-built two-edge tour verifies") {
  EulerianInstance inst;
  inst.n = 2;
  inst.edges = {{0, 1, 1}, {1, 0, 2}};
  inst.fragments = {{1, 2}, {2, 1}};
  CHECK(verify_eulerian(inst));
  CHECK(fragment_cycle_census(inst) == std::vector<long long>{2});
}

TEST_CASE("two disjoint two-cycles pass slot counts but fail the census") {
  EulerianInstance inst;
  inst.n = 2;
  inst.edges = {{0, 1, 1}, {1, 0, 2}, {0, 1, 3}, {1, 0, 4}};
  inst.fragments = {{1, 2}, {2, 1}, {3, 4}, {4, 3}};
  CHECK_FALSE(verify_eulerian(inst));
  CHECK(fragment_cycle_census(inst) == std::vector<long long>{2, 2});
}

TEST_CASE("malformed instances error instead of returning false") {
  EulerianInstance base;
  base.n = 2;
  base.edges = {{0, 1, 1}, {1, 0, 2}};
  base.fragments = {{1, 2}, {2, 1}};

  EulerianInstance dangling = base;
  dangling.fragments[0].second = 9;
  CHECK_THROWS_AS(verify_eulerian(dangling), std::invalid_argument);

  EulerianInstance mismatched = base;
  mismatched.edges.push_back({0, 1, 3});
  mismatched.fragments[1] = {2, 3};  // edge 2 ends at 0, edge 3 starts at 0: fine
  mismatched.fragments[0] = {1, 3};  // edge 1 ends at 1, edge 3 starts at 0: broken
  CHECK_THROWS_AS(verify_eulerian(mismatched), std::invalid_argument);

  EulerianInstance dup = base;
  dup.edges.push_back({0, 1, 1});
  CHECK_THROWS_AS(verify_eulerian(dup), std::invalid_argument);

  EulerianInstance range = base;
  range.edges[0].to = 7;
  CHECK_THROWS_AS(verify_eulerian(range), std::invalid_argument);
}

TEST_CASE("imperfect successor matching fails verification without erroring") {
  EulerianInstance inst;
  inst.n = 2;
  inst.edges = {{0, 1, 1}, {1, 0, 2}, {0, 1, 3}, {1, 0, 4}};
  // Label 1 heads two fragments, label 3 heads none.
  inst.fragments = {{1, 2}, {1, 4}, {2, 1}, {4, 1}};
  CHECK_FALSE(verify_eulerian(inst));
  CHECK_THROWS_AS(fragment_cycle_census(inst), std::runtime_error);
}

TEST_CASE("reduction separates one cycle from two") {
  for (uint64_t seed = 0; seed < 5; ++seed) {
    Graph one = gen_cycles(8, 1, seed);
    EulerianInstance inst1 = reduce_cycles_to_eulerian(one);
    CHECK(inst1.n == 4);
    CHECK(inst1.edges.size() == 16);
    CHECK(inst1.fragments.size() == 16);
    CHECK(verify_eulerian(inst1));
    CHECK(fragment_cycle_census(inst1) == std::vector<long long>{16});

    Graph two = gen_cycles(8, 2, seed);
    EulerianInstance inst2 = reduce_cycles_to_eulerian(two);
    CHECK_FALSE(verify_eulerian(inst2));
    CHECK(fragment_cycle_census(inst2) == std::vector<long long>{8, 4, 4});
  }
  // Larger size: 18 = 6*6/2 nodes.
  Graph big = gen_cycles(18, 1, 3);
  CHECK(fragment_cycle_census(reduce_cycles_to_eulerian(big)) ==
        std::vector<long long>{36});
  Graph bigtwo = gen_cycles(18, 2, 3);
  CHECK(fragment_cycle_census(reduce_cycles_to_eulerian(bigtwo)) ==
        std::vector<long long>{18, 9, 9});
}

TEST_CASE("any turnaround edge gives the same verdicts") {
  Graph one = gen_cycles(8, 1, 9);
  Graph two = gen_cycles(8, 2, 9);
  for (int star = 0; star < 8; ++star) {
    CHECK(verify_eulerian(reduce_cycles_to_eulerian(one, star)));
    CHECK_FALSE(verify_eulerian(reduce_cycles_to_eulerian(two, star)));
  }
}

TEST_CASE("reduction validates its input") {
  CHECK_THROWS_AS(reduce_cycles_to_eulerian(make_path(8)), std::invalid_argument);
  CHECK_THROWS_AS(reduce_cycles_to_eulerian(make_cycle(12)), std::invalid_argument);
  CHECK_THROWS_AS(reduce_cycles_to_eulerian(gen_cycles(8, 1, 0), 99), std::invalid_argument);
  CHECK_THROWS_AS(reduce_cycles_to_eulerian(graph_from_edges(3, true, {{0, 1}})),
                  std::invalid_argument);
}

TEST_CASE("instances serialize round trip") {
  EulerianInstance inst = reduce_cycles_to_eulerian(gen_cycles(8, 2, 1));
  EulerianInstance back = eulerian_from_json(eulerian_to_json(inst));
  CHECK(back.n == inst.n);
  REQUIRE(back.edges.size() == inst.edges.size());
  for (size_t i = 0; i < inst.edges.size(); ++i) {
    CHECK(back.edges[i].from == inst.edges[i].from);
    CHECK(back.edges[i].to == inst.edges[i].to);
    CHECK(back.edges[i].label == inst.edges[i].label);
  }
  CHECK(back.fragments == inst.fragments);
  CHECK(verify_eulerian(back) == verify_eulerian(inst));
}

TEST_SUITE_END();
