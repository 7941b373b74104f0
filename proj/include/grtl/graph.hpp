#ifndef GRTL_GRAPH_HPP
#define GRTL_GRAPH_HPP

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace grtl {

using nlohmann::json;

// Simple graph. Edges are kept canonical: undirected edges stored with u < v,
// everything sorted lexicographically, no duplicates. Self-loops are rejected
// unless the loops flag is set.
struct Graph {
  int n = 0;
  bool directed = false;
  bool loops = false;
  std::vector<std::pair<int, int>> edges;

  bool has_edge(int u, int v) const;
};

Graph graph_from_edges(int n, bool directed, std::vector<std::pair<int, int>> edges,
                       bool loops = false);

std::vector<std::vector<int>> adjacency_lists(const Graph& g);     // out-neighbors
std::vector<std::vector<int>> in_adjacency_lists(const Graph& g);  // in-neighbors
std::vector<std::vector<int>> adjacency_matrix(const Graph& g);
std::vector<int> out_degrees(const Graph& g);

Graph relabel(const Graph& g, const std::vector<int>& perm);

json graph_to_json(const Graph& g);
Graph graph_from_json(const json& j);

// Small fixed shapes, used as patterns and fixtures.
Graph make_cycle(int k);
Graph make_complete(int k);
Graph make_path(int k);
Graph make_edge();

// Disjoint union of one or two cycles with randomly permuted node labels.
// parts = 1: a single n-cycle (n >= 3). parts = 2: two cycles of n/2 nodes each
// (n even, n >= 6).
Graph gen_cycles(int n, int parts, uint64_t seed);

Graph gen_erdos_renyi(int n, double p, uint64_t seed);
Graph random_geometric(int n, double r, uint64_t seed);
Graph barabasi_albert(int n, int m, uint64_t seed);
Graph stochastic_block(int n, int blocks, double p_intra, double p_inter, uint64_t seed);

// Directed graph from a Boolean-vector pair: slot i*d + t of `a` set draws
// edge i -> n + (i+t) mod n, the same slot of `b` draws the reverse edge.
// The result has a mutual edge pair iff some slot is set in both vectors.
Graph gen_disjointness_gadget(const std::vector<int>& a, const std::vector<int>& b,
                              int n, int d);

// Random digraph with per-node out-degree in [min_out, max_out], roughly
// edge_target edges, plus mutual_pairs planted two-cycles where capacity allows.
Graph gen_digraph(int n, int min_out, int max_out, int edge_target, int mutual_pairs,
                  uint64_t seed);

enum class CorpusLabel { any, connected, disconnected };

struct CorpusSpec {
  std::vector<std::string> families;  // subset of {"er","rgg","ba","sbm"}
  int n = 0;
  int count = 0;
  uint64_t seed = 0;
  // Optional per-family parameter overrides; when a key is absent the regime
  // default for the requested label is used.
  std::map<std::string, double> params;
};

// Generates `count` graphs cycling through the requested families. When a
// connectivity label is requested each instance is resampled (fresh derived
// seed) until the connectivity oracle confirms it, erroring after 100 attempts.
std::vector<Graph> gen_corpus(const CorpusSpec& spec, CorpusLabel label);

}  // namespace grtl

#endif
