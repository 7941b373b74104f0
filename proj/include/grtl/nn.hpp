#ifndef GRTL_NN_HPP
#define GRTL_NN_HPP

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

// Transformer pieces with hand-assigned weights. Tokens are the COLUMNS of X
// (dim x token_count). Logits for one head are S = temperature * X^T K^T Q X,
// i.e. S(j, i) = temperature * <K x_j, Q x_i>, and the softmax normalizes each
// COLUMN: for output token i the weights over source tokens j sum to one.
// Output Z = sum_h V_h X softmax(S_h), plus X itself when residual is set.

namespace grtl {

using nlohmann::json;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// exp overflows double just above 709; logits past this cap are a construction
// bug, not a numeric fact of the input, so the forward pass refuses them.
inline constexpr double kLogitCap = 700.0;

struct AttentionHead {
  Matrix K, Q;  // d_k x d_in
  Matrix V;     // d_out x d_in
  double temperature = 1.0;
};

// Affine chain with ReLU between stages (none after the last affine). When
// with_index is set the input is the token with its 0-based position appended.
struct ReluStack {
  std::vector<Matrix> weights;
  std::vector<Vector> biases;
  bool with_index = false;

  int hidden_width() const;
};

// Reference to a registered exact token map: a side-effect-free function of
// (token, position, params) standing in for an MLP whose existence is assumed
// rather than spelled out in ReLU gates.
struct ExactMapUse {
  std::string id;
  json params;
  int out_dim = 0;
};

using MlpStage = std::variant<std::monostate, ReluStack, ExactMapUse>;

struct Layer {
  std::vector<AttentionHead> heads;
  bool residual = false;
  MlpStage mlp;
};

struct TransformerSpec {
  int input_dim = 0;
  std::vector<Layer> layers;

  std::vector<int> layer_dims() const;  // token dimension after each layer
  int width() const;                    // max token dimension incl. input
  int mlp_hidden_width() const;         // max ReLU hidden width, 0 if none
};

using ExactMapFn = std::function<Vector(const Vector& token, int index, const json& params)>;

// Exact maps live in a process-wide registry. Each id can be registered once
// and never replaced, so a serialized spec always means the same function.
void register_exact_map(const std::string& id, ExactMapFn fn);
bool exact_map_registered(const std::string& id);
const ExactMapFn& exact_map(const std::string& id);

Matrix softmax_columns(const Matrix& logits);
Matrix attention_logits(const AttentionHead& head, const Matrix& x);  // temperature applied
Matrix attention_forward(const std::vector<AttentionHead>& heads, const Matrix& x,
                         bool residual);
Vector relu_stack_eval(const ReluStack& net, const Vector& input);
Matrix mlp_forward(const MlpStage& stage, const Matrix& x);
Matrix transformer_forward(const TransformerSpec& spec, const Matrix& x0);

// 4-ReLU window gate: exactly 1 on integers in [r, s], exactly 0 on integers
// outside, for any integers r <= s.
ReluStack build_indicator_net(long long r, long long s);

// Sum of trapezoid bumps: maps anchor a_i to value b_i. The plateau radius
// delta is min_gap/4 rounded down to a power of two (support radius 2*delta),
// which keeps the bumps disjoint and the arithmetic exact for dyadic tables.
ReluStack build_bump_memorizer(const std::vector<double>& anchors,
                               const std::vector<double>& values);

json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const json& j);
json transformer_to_json(const TransformerSpec& spec);
TransformerSpec transformer_from_json(const json& j);

}  // namespace grtl

#endif
