#ifndef GRTL_TOKENIZE_HPP
#define GRTL_TOKENIZE_HPP

#include <optional>
#include <string>
#include <vector>

#include "grtl/graph.hpp"
#include "grtl/nn.hpp"

namespace grtl {

struct TokenizedGraph {
  std::string graph_id;
  int n = 0;            // true node count before padding
  std::string scheme;   // "adjacency" | "edgelist" | "laplacian"
  Matrix tokens;        // dim x token_count, tokens are columns
  std::optional<double> label;
};

// Token i = zero-padded adjacency row i (pad_n entries), optionally with the
// 0-based node index appended. Padding nodes contribute all-zero tokens.
TokenizedGraph tokenize_adjacency(const Graph& g, int pad_n, bool with_index);

// One token per edge in lexicographic order: one-hot(u) | one-hot(v) over
// pad_n slots each.
TokenizedGraph tokenize_edgelist(const Graph& g, int pad_n);

// Spectral tokens from the combinatorial Laplacian L = D - A. Token 0 carries
// the m smallest eigenvalues; token 1+v carries node v's coordinates in the
// corresponding eigenvectors. Undirected graphs only.
TokenizedGraph tokenize_laplacian(const Graph& g, int m);

struct EigenDecomposition {
  Vector values;   // ascending
  Matrix vectors;  // orthonormal columns, aligned with values
  int sweeps = 0;
};

// Cyclic Jacobi rotations on a symmetric matrix; converges when the
// off-diagonal Frobenius mass drops below 1e-12.
EigenDecomposition jacobi_eigen_symmetric(Matrix sym);

// Round-trip-exact dataset files. Path ending ".jsonl" writes one record per
// line with keys {graph_id, n, scheme, tokens, label}; ".csv" flattens tokens
// token-major with a header and requires every record to share one shape.
void export_dataset(const std::vector<TokenizedGraph>& data, const std::string& path);
std::vector<TokenizedGraph> import_dataset(const std::string& path);

json tokenized_to_json(const TokenizedGraph& t);
TokenizedGraph tokenized_from_json(const json& j);

}  // namespace grtl

#endif
