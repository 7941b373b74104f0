#ifndef GRTL_ORACLES_HPP
#define GRTL_ORACLES_HPP

#include <vector>

#include "grtl/graph.hpp"

// Brute-force reference implementations. These deliberately avoid the linear
// algebra stack used by the transformer path: certification compares two
// independent routes, so the oracles stick to integer arithmetic and plain
// graph search.

namespace grtl {

struct IntMatrix {
  int n = 0;
  std::vector<long long> data;  // row-major n*n

  IntMatrix() = default;
  explicit IntMatrix(int n_) : n(n_), data(static_cast<size_t>(n_) * n_, 0) {}
  long long at(int i, int j) const { return data[static_cast<size_t>(i) * n + j]; }
  long long& at(int i, int j) { return data[static_cast<size_t>(i) * n + j]; }
  long long trace() const;
  bool operator==(const IntMatrix& o) const { return n == o.n && data == o.data; }
};

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) {
    for (int i = 0; i < n; ++i) parent[i] = i;
  }
  int find(int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[a] = b;
    return true;
  }
};

// Connectivity of the underlying undirected graph, by breadth-first search.
bool oracle_connected(const Graph& g);

// Same question answered with union-find; exists to cross-check the BFS route.
int component_count_unionfind(const Graph& g);

// A^exponent over the integers, cubic multiply. Errors if any intermediate
// entry would leave the exactly-representable double range (2^53), since
// downstream comparisons convert to double.
IntMatrix oracle_matrix_power(const Graph& g, int exponent);
IntMatrix adjacency_int_matrix(const Graph& g);

// indicator[i] = 1 iff node i lies on a directed two-cycle (mutual edge pair).
// Errors if the graph has self-loops: a loop is neither in nor out of a
// two-cycle under the intended reading.
std::vector<int> oracle_two_cycle_indicator(const Graph& g);

// Number of copies of `pattern` in `host` (injective edge-preserving maps
// divided by the pattern's automorphism count; the host may have extra edges).
// Pattern size is capped at 8 nodes.
long long oracle_subgraph_count(const Graph& host, const Graph& pattern);
long long automorphism_count(const Graph& pattern);

}  // namespace grtl

#endif
