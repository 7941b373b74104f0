#include "grtl/oracles.hpp"

#include <queue>
#include <stdexcept>

namespace grtl {

long long IntMatrix::trace() const {
  long long t = 0;
  for (int i = 0; i < n; ++i) t += at(i, i);
  return t;
}

bool oracle_connected(const Graph& g) {
  if (g.n == 0) return true;
  // Underlying undirected graph, breadth-first search from node 0.
  std::vector<std::vector<int>> adj(g.n);
  for (auto [u, v] : g.edges) {
    if (u == v) continue;
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  std::vector<char> seen(g.n, 0);
  std::queue<int> q;
  q.push(0);
  seen[0] = 1;
  int visited = 1;
  while (!q.empty()) {
    int u = q.front();
    q.pop();
    for (int v : adj[u])
      if (!seen[v]) {
        seen[v] = 1;
        ++visited;
        q.push(v);
      }
  }
  return visited == g.n;
}

int component_count_unionfind(const Graph& g) {
  UnionFind uf(g.n);
  int components = g.n;
  for (auto [u, v] : g.edges)
    if (u != v && uf.unite(u, v)) --components;
  return components;
}

IntMatrix adjacency_int_matrix(const Graph& g) {
  IntMatrix a(g.n);
  for (auto [u, v] : g.edges) {
    a.at(u, v) = 1;
    if (!g.directed) a.at(v, u) = 1;
  }
  return a;
}

static IntMatrix multiply_guarded(const IntMatrix& x, const IntMatrix& y) {
  constexpr long long kExactDoubleLimit = 1LL << 53;
  IntMatrix z(x.n);
  for (int i = 0; i < x.n; ++i)
    for (int k = 0; k < x.n; ++k) {
      const long long xik = x.at(i, k);
      if (xik == 0) continue;
      for (int j = 0; j < x.n; ++j) {
        long long prod, sum;
        if (__builtin_mul_overflow(xik, y.at(k, j), &prod) ||
            __builtin_add_overflow(z.at(i, j), prod, &sum) || sum > kExactDoubleLimit)
          throw std::overflow_error("oracle_matrix_power: entry exceeds exact range");
        z.at(i, j) = sum;
      }
    }
  return z;
}

IntMatrix oracle_matrix_power(const Graph& g, int exponent) {
  if (exponent < 0) throw std::invalid_argument("oracle_matrix_power: negative exponent");
  IntMatrix result(g.n);
  for (int i = 0; i < g.n; ++i) result.at(i, i) = 1;
  const IntMatrix a = adjacency_int_matrix(g);
  for (int e = 0; e < exponent; ++e) result = multiply_guarded(result, a);
  return result;
}

std::vector<int> oracle_two_cycle_indicator(const Graph& g) {
  if (!g.directed)
    throw std::invalid_argument("oracle_two_cycle_indicator: graph must be directed");
  for (auto [u, v] : g.edges)
    if (u == v)
      throw std::invalid_argument("oracle_two_cycle_indicator: self-loop is ill-defined");
  std::vector<int> indicator(g.n, 0);
  for (auto [u, v] : g.edges)
    if (g.has_edge(v, u)) indicator[u] = 1;
  return indicator;
}

// Injective edge-preserving maps from pattern into host (host may carry extra
// edges). Backtracking over pattern nodes in index order; each new image must
// reproduce the pattern's edges to all previously placed nodes.
static long long count_injective_maps(const Graph& host, const Graph& pattern) {
  const int k = pattern.n;
  if (k > host.n) return 0;
  const auto h = adjacency_matrix(host);
  const auto p = adjacency_matrix(pattern);
  std::vector<int> image(k, -1);
  std::vector<char> used(host.n, 0);
  long long count = 0;
  auto backtrack = [&](auto&& self, int v) -> void {
    if (v == k) {
      ++count;
      return;
    }
    for (int cand = 0; cand < host.n; ++cand) {
      if (used[cand]) continue;
      bool ok = true;
      for (int u = 0; u < v && ok; ++u) {
        if (p[u][v] && !h[image[u]][cand]) ok = false;
        if (p[v][u] && !h[cand][image[u]]) ok = false;
      }
      if (!ok) continue;
      used[cand] = 1;
      image[v] = cand;
      self(self, v + 1);
      used[cand] = 0;
    }
  };
  backtrack(backtrack, 0);
  return count;
}

long long automorphism_count(const Graph& pattern) {
  if (pattern.n > 8)
    throw std::invalid_argument("automorphism_count: pattern capped at 8 nodes");
  return count_injective_maps(pattern, pattern);
}

long long oracle_subgraph_count(const Graph& host, const Graph& pattern) {
  if (pattern.n < 1 || pattern.n > 8)
    throw std::invalid_argument("oracle_subgraph_count: pattern size outside [1,8]");
  if (host.directed != pattern.directed)
    throw std::invalid_argument("oracle_subgraph_count: directedness mismatch");
  if (host.loops || pattern.loops)
    throw std::invalid_argument("oracle_subgraph_count: loops unsupported");
  const long long maps = count_injective_maps(host, pattern);
  const long long aut = automorphism_count(pattern);
  if (maps % aut != 0)
    throw std::logic_error("oracle_subgraph_count: map count not divisible by automorphisms");
  return maps / aut;
}

}  // namespace grtl
