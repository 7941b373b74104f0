#include "grtl/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

#include "grtl/oracles.hpp"
#include "grtl/rng.hpp"

namespace grtl {

bool Graph::has_edge(int u, int v) const {
  std::pair<int, int> e{u, v};
  if (!directed && u > v) e = {v, u};
  return std::binary_search(edges.begin(), edges.end(), e);
}

Graph graph_from_edges(int n, bool directed, std::vector<std::pair<int, int>> edges,
                       bool loops) {
  if (n < 0) throw std::invalid_argument("graph_from_edges: negative node count");
  for (auto& [u, v] : edges) {
    if (u < 0 || u >= n || v < 0 || v >= n)
      throw std::invalid_argument("graph_from_edges: endpoint out of range");
    if (u == v && !loops)
      throw std::invalid_argument("graph_from_edges: self-loop without loops flag");
    if (!directed && u > v) std::swap(u, v);
  }
  std::sort(edges.begin(), edges.end());
  if (std::adjacent_find(edges.begin(), edges.end()) != edges.end())
    throw std::invalid_argument("graph_from_edges: duplicate edge");
  Graph g;
  g.n = n;
  g.directed = directed;
  g.loops = loops;
  g.edges = std::move(edges);
  return g;
}

std::vector<std::vector<int>> adjacency_lists(const Graph& g) {
  std::vector<std::vector<int>> adj(g.n);
  for (auto [u, v] : g.edges) {
    adj[u].push_back(v);
    if (!g.directed && u != v) adj[v].push_back(u);
  }
  for (auto& row : adj) std::sort(row.begin(), row.end());
  return adj;
}

std::vector<std::vector<int>> in_adjacency_lists(const Graph& g) {
  std::vector<std::vector<int>> adj(g.n);
  for (auto [u, v] : g.edges) {
    adj[v].push_back(u);
    if (!g.directed && u != v) adj[u].push_back(v);
  }
  for (auto& row : adj) std::sort(row.begin(), row.end());
  return adj;
}

std::vector<std::vector<int>> adjacency_matrix(const Graph& g) {
  std::vector<std::vector<int>> a(g.n, std::vector<int>(g.n, 0));
  for (auto [u, v] : g.edges) {
    a[u][v] = 1;
    if (!g.directed) a[v][u] = 1;
  }
  return a;
}

std::vector<int> out_degrees(const Graph& g) {
  std::vector<int> deg(g.n, 0);
  for (auto [u, v] : g.edges) {
    deg[u] += 1;
    if (!g.directed && u != v) deg[v] += 1;
  }
  return deg;
}

Graph relabel(const Graph& g, const std::vector<int>& perm) {
  if (static_cast<int>(perm.size()) != g.n)
    throw std::invalid_argument("relabel: permutation size mismatch");
  std::vector<int> seen(g.n, 0);
  for (int p : perm) {
    if (p < 0 || p >= g.n || seen[p]++)
      throw std::invalid_argument("relabel: not a permutation");
  }
  std::vector<std::pair<int, int>> edges;
  edges.reserve(g.edges.size());
  for (auto [u, v] : g.edges) edges.emplace_back(perm[u], perm[v]);
  return graph_from_edges(g.n, g.directed, std::move(edges), g.loops);
}

json graph_to_json(const Graph& g) {
  json edges = json::array();
  for (auto [u, v] : g.edges) edges.push_back({u, v});
  return json{{"n", g.n}, {"directed", g.directed}, {"edges", edges}};
}

Graph graph_from_json(const json& j) {
  if (!j.is_object() || !j.contains("n") || !j.contains("directed") || !j.contains("edges"))
    throw std::invalid_argument("graph_from_json: expected keys n, directed, edges");
  std::vector<std::pair<int, int>> edges;
  bool loops = false;
  for (const auto& e : j.at("edges")) {
    if (!e.is_array() || e.size() != 2)
      throw std::invalid_argument("graph_from_json: edge must be a pair");
    int u = e.at(0).get<int>();
    int v = e.at(1).get<int>();
    if (u == v) loops = true;
    edges.emplace_back(u, v);
  }
  return graph_from_edges(j.at("n").get<int>(), j.at("directed").get<bool>(),
                          std::move(edges), loops);
}

Graph make_cycle(int k) {
  if (k < 3) throw std::invalid_argument("make_cycle: need k >= 3");
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < k; ++i) edges.emplace_back(i, (i + 1) % k);
  return graph_from_edges(k, false, std::move(edges));
}

Graph make_complete(int k) {
  std::vector<std::pair<int, int>> edges;
  for (int u = 0; u < k; ++u)
    for (int v = u + 1; v < k; ++v) edges.emplace_back(u, v);
  return graph_from_edges(k, false, std::move(edges));
}

Graph make_path(int k) {
  if (k < 1) throw std::invalid_argument("make_path: need k >= 1");
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i + 1 < k; ++i) edges.emplace_back(i, i + 1);
  return graph_from_edges(k, false, std::move(edges));
}

Graph make_edge() { return make_complete(2); }

static std::vector<int> random_permutation(int n, Rng& rng) {
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  for (int i = n - 1; i > 0; --i) {
    int j = static_cast<int>(rng.next_below(static_cast<uint64_t>(i) + 1));
    std::swap(perm[i], perm[j]);
  }
  return perm;
}

Graph gen_cycles(int n, int parts, uint64_t seed) {
  if (parts != 1 && parts != 2)
    throw std::invalid_argument("gen_cycles: parts must be 1 or 2");
  if (parts == 1 && n < 3) throw std::invalid_argument("gen_cycles: need n >= 3");
  if (parts == 2 && (n % 2 != 0 || n < 6))
    throw std::invalid_argument("gen_cycles: two equal cycles need even n >= 6");
  Rng rng(seed);
  std::vector<int> perm = random_permutation(n, rng);
  std::vector<std::pair<int, int>> edges;
  auto add_cycle = [&edges, &perm](int begin, int len) {
    for (int i = 0; i < len; ++i)
      edges.emplace_back(perm[begin + i], perm[begin + (i + 1) % len]);
  };
  if (parts == 1) {
    add_cycle(0, n);
  } else {
    add_cycle(0, n / 2);
    add_cycle(n / 2, n / 2);
  }
  return graph_from_edges(n, false, std::move(edges));
}

Graph gen_erdos_renyi(int n, double p, uint64_t seed) {
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("gen_erdos_renyi: p outside [0,1]");
  Rng rng(seed);
  std::vector<std::pair<int, int>> edges;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (rng.next_bool(p)) edges.emplace_back(u, v);
  return graph_from_edges(n, false, std::move(edges));
}

Graph random_geometric(int n, double r, uint64_t seed) {
  if (r < 0.0) throw std::invalid_argument("random_geometric: negative radius");
  Rng rng(seed);
  std::vector<double> x(n), y(n);
  for (int i = 0; i < n; ++i) {
    x[i] = rng.next_double();
    y[i] = rng.next_double();
  }
  const double r2 = r * r;
  std::vector<std::pair<int, int>> edges;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) {
      double dx = x[u] - x[v], dy = y[u] - y[v];
      if (dx * dx + dy * dy <= r2) edges.emplace_back(u, v);
    }
  return graph_from_edges(n, false, std::move(edges));
}

Graph barabasi_albert(int n, int m, uint64_t seed) {
  if (m < 1) throw std::invalid_argument("barabasi_albert: need m >= 1");
  if (n < m + 1) throw std::invalid_argument("barabasi_albert: need n >= m + 1");
  Rng rng(seed);
  std::vector<std::pair<int, int>> edges;
  std::vector<int> ends;  // endpoint multiset, one entry per edge side
  for (int u = 0; u <= m; ++u)
    for (int v = u + 1; v <= m; ++v) {
      edges.emplace_back(u, v);
      ends.push_back(u);
      ends.push_back(v);
    }
  for (int v = m + 1; v < n; ++v) {
    std::set<int> targets;
    int attempts = 0;
    while (static_cast<int>(targets.size()) < m) {
      int t;
      if (attempts++ < 50 * m) {
        t = ends[rng.next_below(ends.size())];
      } else {
        t = static_cast<int>(rng.next_below(static_cast<uint64_t>(v)));
      }
      targets.insert(t);
    }
    for (int t : targets) {
      edges.emplace_back(t, v);
      ends.push_back(t);
      ends.push_back(v);
    }
  }
  return graph_from_edges(n, false, std::move(edges));
}

Graph stochastic_block(int n, int blocks, double p_intra, double p_inter, uint64_t seed) {
  if (blocks < 1 || blocks > n)
    throw std::invalid_argument("stochastic_block: blocks outside [1,n]");
  Rng rng(seed);
  auto block_of = [n, blocks](int i) {
    return static_cast<int>(static_cast<long long>(i) * blocks / n);
  };
  std::vector<std::pair<int, int>> edges;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) {
      double p = block_of(u) == block_of(v) ? p_intra : p_inter;
      if (rng.next_bool(p)) edges.emplace_back(u, v);
    }
  return graph_from_edges(n, false, std::move(edges));
}

Graph gen_disjointness_gadget(const std::vector<int>& a, const std::vector<int>& b,
                              int n, int d) {
  if (n < 1 || d < 1 || d > n)
    throw std::invalid_argument("gen_disjointness_gadget: need 1 <= d <= n");
  const size_t slots = static_cast<size_t>(n) * d;
  if (a.size() != slots || b.size() != slots)
    throw std::invalid_argument("gen_disjointness_gadget: vectors must have n*d slots");
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i)
    for (int t = 0; t < d; ++t) {
      const size_t s = static_cast<size_t>(i) * d + t;
      if (a[s] != 0 && a[s] != 1)
        throw std::invalid_argument("gen_disjointness_gadget: entries must be 0/1");
      if (b[s] != 0 && b[s] != 1)
        throw std::invalid_argument("gen_disjointness_gadget: entries must be 0/1");
      const int partner = n + (i + t) % n;
      if (a[s]) edges.emplace_back(i, partner);
      if (b[s]) edges.emplace_back(partner, i);
    }
  return graph_from_edges(2 * n, true, std::move(edges));
}

Graph gen_digraph(int n, int min_out, int max_out, int edge_target, int mutual_pairs,
                  uint64_t seed) {
  if (n < 2) throw std::invalid_argument("gen_digraph: need n >= 2");
  if (min_out < 0 || min_out > max_out || max_out > n - 1)
    throw std::invalid_argument("gen_digraph: need 0 <= min_out <= max_out <= n-1");
  Rng rng(seed);
  std::set<std::pair<int, int>> edge_set;
  std::vector<int> out(n, 0);
  auto try_add = [&](int u, int v) {
    if (u == v || out[u] >= max_out || edge_set.count({u, v})) return false;
    edge_set.insert({u, v});
    out[u] += 1;
    return true;
  };
  for (int k = 0, attempts = 0; k < mutual_pairs && attempts < 50 * (mutual_pairs + 1);
       ++attempts) {
    int u = static_cast<int>(rng.next_below(n));
    int v = static_cast<int>(rng.next_below(n));
    if (u == v || edge_set.count({u, v}) || edge_set.count({v, u})) continue;
    if (out[u] >= max_out || out[v] >= max_out) continue;
    try_add(u, v);
    try_add(v, u);
    ++k;
  }
  for (int attempts = 0;
       static_cast<int>(edge_set.size()) < edge_target && attempts < 60 * (edge_target + 1);
       ++attempts) {
    int u = static_cast<int>(rng.next_below(n));
    int v = static_cast<int>(rng.next_below(n));
    try_add(u, v);
  }
  for (int u = 0; u < n; ++u) {
    int guard = 0;
    while (out[u] < min_out && guard++ < 100 * n) {
      int v = static_cast<int>(rng.next_below(n));
      try_add(u, v);
    }
    if (out[u] < min_out)
      throw std::runtime_error("gen_digraph: could not satisfy min_out");
  }
  return graph_from_edges(n, true,
                          std::vector<std::pair<int, int>>(edge_set.begin(), edge_set.end()));
}

static Graph disjoint_union(const Graph& g1, const Graph& g2) {
  std::vector<std::pair<int, int>> edges = g1.edges;
  for (auto [u, v] : g2.edges) edges.emplace_back(u + g1.n, v + g1.n);
  return graph_from_edges(g1.n + g2.n, g1.directed, std::move(edges),
                          g1.loops || g2.loops);
}

static double corpus_param(const CorpusSpec& spec, const std::string& key, double fallback) {
  auto it = spec.params.find(key);
  return it == spec.params.end() ? fallback : it->second;
}

static Graph corpus_sample(const CorpusSpec& spec, const std::string& family,
                           CorpusLabel label, uint64_t seed) {
  const int n = spec.n;
  const bool want_disconnected = label == CorpusLabel::disconnected;
  if (family == "er") {
    double p_default = want_disconnected ? 0.5 * std::log(n) / n
                                         : std::min(1.0, 2.0 * std::log(n) / n);
    return gen_erdos_renyi(n, corpus_param(spec, "p", p_default), seed);
  }
  if (family == "rgg") {
    double base = std::sqrt(std::log(std::max(2, n)) / (3.14159265358979323846 * n));
    double r_default = (want_disconnected ? 0.7 : 1.6) * base;
    return random_geometric(n, corpus_param(spec, "r", r_default), seed);
  }
  if (family == "ba") {
    int m = static_cast<int>(corpus_param(spec, "m", 2.0));
    if (want_disconnected) {
      int half = n / 2;
      return disjoint_union(barabasi_albert(half, m, derive_seed(seed, 1)),
                            barabasi_albert(n - half, m, derive_seed(seed, 2)));
    }
    return barabasi_albert(n, m, seed);
  }
  if (family == "sbm") {
    int blocks = static_cast<int>(corpus_param(spec, "blocks", 2.0));
    double bn = static_cast<double>(n) / blocks;
    double p_intra =
        corpus_param(spec, "p_intra", std::min(1.0, 3.0 * std::log(std::max(2.0, bn)) / bn));
    double p_inter =
        corpus_param(spec, "p_inter", want_disconnected ? 0.0 : 2.0 / n);
    return stochastic_block(n, blocks, p_intra, p_inter, seed);
  }
  throw std::invalid_argument("gen_corpus: unknown family '" + family + "'");
}

std::vector<Graph> gen_corpus(const CorpusSpec& spec, CorpusLabel label) {
  if (spec.families.empty()) throw std::invalid_argument("gen_corpus: no families given");
  if (spec.n < 2) throw std::invalid_argument("gen_corpus: need n >= 2");
  if (spec.count < 0) throw std::invalid_argument("gen_corpus: negative count");
  std::vector<Graph> out;
  out.reserve(spec.count);
  for (int i = 0; i < spec.count; ++i) {
    const std::string& family = spec.families[i % spec.families.size()];
    bool accepted = false;
    for (int attempt = 0; attempt < 100; ++attempt) {
      Graph g = corpus_sample(spec, family, label,
                              derive_seed(spec.seed, static_cast<uint64_t>(i) * 101 + attempt));
      bool ok = label == CorpusLabel::any ||
                oracle_connected(g) == (label == CorpusLabel::connected);
      if (ok) {
        out.push_back(std::move(g));
        accepted = true;
        break;
      }
    }
    if (!accepted)
      throw std::runtime_error("gen_corpus: label not achieved in 100 attempts (family " +
                               family + ")");
  }
  return out;
}

}  // namespace grtl
