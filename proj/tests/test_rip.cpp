#include <doctest.h>

#include <cmath>
#include <cstdio>

#include "grtl/graph.hpp"
#include "grtl/rip.hpp"
#include "grtl/rng.hpp"

using namespace grtl;

TEST_SUITE_BEGIN("rip");

TEST_CASE("embedding dimension and entries") {
  RipSystem sys = sample_rip_vectors(256, 8, 4.0, 1);
  CHECK(sys.rip_dim == 178);  // ceil(4 * 8 * ln 256)
  const double scale = 1.0 / std::sqrt(178.0);
  for (int j = 0; j < 5; ++j) {
    CHECK(sys.y.col(j).norm() == doctest::Approx(1.0).epsilon(1e-12));
    for (int r = 0; r < sys.rip_dim; ++r)
      CHECK(std::abs(std::abs(sys.y(r, j)) - scale) < 1e-15);
  }
  CHECK(sys.gram(3, 3) == doctest::Approx(1.0).epsilon(1e-12));
  RipSystem again = sample_rip_vectors(256, 8, 4.0, 1);
  CHECK((again.y - sys.y).norm() == 0.0);
  RipSystem other = sample_rip_vectors(256, 8, 4.0, 2);
  CHECK((other.y - sys.y).norm() != 0.0);
}

TEST_CASE("phi meets its support exactly and its margins fit") {
  RipSystem sys = sample_rip_vectors(256, 8, 4.0, 7);
  Rng rng(21);
  int feasible = 0;
  const int trials = 200;
  for (int t = 0; t < trials; ++t) {
    std::vector<int> support;
    while (support.size() < 8) {
      int idx = static_cast<int>(rng.next_below(256));
      if (std::find(support.begin(), support.end(), idx) == support.end())
        support.push_back(idx);
    }
    PhiResult res = compute_phi(sys, support);
    if (res.feasible) {
      ++feasible;
      CHECK(res.max_support_error <= 1e-9);
      CHECK(res.max_off_margin <= 0.5);
      for (int idx : support)
        CHECK(res.margins(idx) == doctest::Approx(1.0).epsilon(1e-9));
    }
  }
  // The refinement must lift the per-support success rate well past 95%.
  CHECK(feasible >= 195);
}

TEST_CASE("phi edge cases") {
  RipSystem sys = sample_rip_vectors(64, 4, 4.0, 3);
  PhiResult empty = compute_phi(sys, {});
  CHECK(empty.feasible);
  CHECK(empty.phi.norm() == 0.0);

  PhiResult single = compute_phi(sys, {17});
  CHECK(single.feasible);
  CHECK(single.margins(17) == doctest::Approx(1.0).epsilon(1e-12));

  CHECK_THROWS_AS(compute_phi(sys, {1, 1}), std::invalid_argument);
  CHECK_THROWS_AS(compute_phi(sys, {1, 2, 3, 4, 5}), std::invalid_argument);
  CHECK_THROWS_AS(compute_phi(sys, {-1}), std::invalid_argument);
  CHECK_THROWS_AS(compute_phi(sys, {64}), std::invalid_argument);
  CHECK_THROWS_AS(sample_rip_vectors(1, 4, 4.0, 0), std::invalid_argument);
  CHECK_THROWS_AS(sample_rip_vectors(64, 0, 4.0, 0), std::invalid_argument);
  CHECK_THROWS_AS(sample_rip_vectors(64, 4, 0.0, 0), std::invalid_argument);
}

TEST_CASE("every out-neighborhood of a bounded-degree digraph gets margins") {
  RipSystem sys = sample_rip_vectors(128, 8, 4.0, 11);
  Graph g = gen_digraph(128, 1, 8, 400, 10, 5);
  auto adj = adjacency_lists(g);
  int ok = 0;
  for (int i = 0; i < g.n; ++i)
    if (compute_phi(sys, adj[i]).feasible) ++ok;
  CHECK(ok == g.n);
}

TEST_SUITE_END();
