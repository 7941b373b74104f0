#ifndef GRTL_CONSTRUCTIONS_HPP
#define GRTL_CONSTRUCTIONS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "grtl/graph.hpp"
#include "grtl/nn.hpp"
#include "grtl/oracles.hpp"
#include "grtl/rip.hpp"

// Transformers assembled by explicit weight assignment, one per task, plus
// harnesses that run them on graphs and certify the outputs against the
// brute-force oracles.
//
// Each construction offers two MLP realizations. exact_map keeps the
// arbitrary-MLP steps as registered exact functions; explicit_net spells the
// parts a ReLU network genuinely implements (pair decoding, slotting, degree
// recovery) out as gates, with the remaining integer rescale/round arithmetic
// staying inside the position-aware map.

namespace grtl {

enum class NetMode { exact_map, explicit_net };

// Registers every built-in exact map id; safe to call repeatedly. All build_*
// and run_* entry points call it themselves.
void ensure_builtin_maps();

// --- one vs two cycles -----------------------------------------------------
// Input: adjacency rows with index, n+1 x n. Layer 1 decodes each degree-2
// row into its neighbor pair (a, b) and parks (a, b, i) in block 3i; layer 2
// sums all tokens (zero logits, V = n*I) so every token holds the edge list;
// the readout runs union-find and emits 1 iff the graph is one cycle.
TransformerSpec build_one_vs_two(int n, NetMode mode);
Matrix one_vs_two_input(const Graph& g);
int run_one_vs_two(const TransformerSpec& spec, const Graph& g);

// --- adjacency powers -------------------------------------------------------
// Tokens [row_j(A); e_j; row_j(W)] with W = A^0 = I. Each layer attends from
// token j to its out-neighbors (K lifts e_j from keys, Q lifts the adjacency
// row from queries, temperature ln(2n*n^L/eps)), keeps blocks 2 and 3 through
// V, and the MLP recovers the degree, multiplies the averaged blocks back up
// and rounds, leaving W = A^ell after layer ell.
TransformerSpec build_power_transformer(int n, int L, double eps, NetMode mode);
Matrix power_input(const Graph& g);
struct PowerRun {
  IntMatrix result;
  double max_pre_round_residual = 0.0;
};
PowerRun run_power(const TransformerSpec& spec, const Graph& g);

// --- sparse mutual-edge detection -------------------------------------------
// Width 2p+2 for p = ceil(alpha*d*ln n). A layer-0 map embeds token i as
// (phi(out-neighbors of i); y_i; 1; 0) and appends a dummy token; the single
// attention layer scores key j against query i as c*(<phi_i,y_j> + <phi_j,y_i>)
// with the dummy pinned at 7c/4, so only a mutual edge (logit 2c) beats the
// dummy. The output threshold reads the real-source attention mass.
TransformerSpec build_sparse_two_cycle(int n, int d, double alpha, double temperature,
                                       uint64_t seed);
double sparse_two_cycle_default_temperature(int n);
Matrix sparse_two_cycle_input(const Graph& g);
struct SparseRun {
  std::vector<int> indicator;
  Vector real_mass;  // pre-threshold attention mass per real token
};
SparseRun run_sparse_two_cycle(const TransformerSpec& spec, const Graph& g);
struct SparseVerify {
  bool pass = false;
  bool margins_ok = false;
  int attempts = 0;
  uint64_t used_seed = 0;
  std::vector<int> predicted;
  std::vector<int> expected;
};
SparseVerify verify_sparse_two_cycle(const Graph& g, int d, double alpha,
                                     double temperature, uint64_t seed,
                                     int max_attempts = 5);

// --- induced-pattern counting ------------------------------------------------
// Nodes are split into q = max(k, ceil(n^(1/k))) contiguous sets of size
// <= s = ceil(n/q). Layer 1 slots each node's full adjacency row at its
// within-set position (token width s*n + 2q); layer 2 gathers each set's
// members into an exact s x n incidence block and scales it by (n+1)^t;
// layer 3 sums the k blocks of each set combination, and the readout decodes
// the base-(n+1) digits back into the induced subgraph on the union and
// counts pattern copies whose padded set support matches that combination.
// Summing the first C(q,k) token outputs yields the total count.
struct PartitionPlan {
  int n = 0;
  int k = 0;
  int set_count = 0;
  int set_size = 0;  // largest set
  std::vector<int> node_set;
  std::vector<int> set_start;
  std::vector<int> set_len;
  std::vector<std::vector<int>> combos;  // lexicographic k-subsets of sets

  static PartitionPlan make(int n, int k);
  int combo_count() const { return static_cast<int>(combos.size()); }
  int token_dim() const { return set_size * n + 2 * set_count; }
  // Pads a support (ascending set ids, size <= k) with the smallest unused
  // sets and returns its index in combos.
  int padded_combo_index(const std::vector<int>& support) const;
};
TransformerSpec build_subgraph_counter(int n, int k, const Graph& pattern, NetMode mode);
Matrix subgraph_input(const Graph& g);
long long run_subgraph_count(const TransformerSpec& spec, const Graph& g);
std::vector<long long> run_subgraph_per_combo(const TransformerSpec& spec, const Graph& g);

// --- certification -----------------------------------------------------------
struct ConstructionReport {
  std::string construction;
  int n = 0;
  json params;
  bool pass = false;
  double max_abs_error = 0.0;
  double millis = 0.0;
};
json report_row_to_json(const ConstructionReport& r);
ConstructionReport report_row_from_json(const json& j);

// Runs the named construction ("one_vs_two", "power", "sparse_two_cycle",
// "subgraph", "eulerian") on one graph and compares against the matching
// oracle. params is construction-specific; see cli.cpp for the accepted keys.
ConstructionReport verify_construction(const std::string& name, const Graph& g,
                                       const json& params);

}  // namespace grtl

#endif
