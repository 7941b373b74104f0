#include "grtl/nn.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace grtl {

int ReluStack::hidden_width() const {
  int w = 0;
  for (size_t i = 0; i + 1 < weights.size(); ++i)
    w = std::max(w, static_cast<int>(weights[i].rows()));
  return w;
}

namespace {

std::map<std::string, ExactMapFn>& registry() {
  static std::map<std::string, ExactMapFn> maps;
  return maps;
}

std::mutex& registry_mutex() {
  static std::mutex m;
  return m;
}

int mlp_out_dim(const MlpStage& stage, int in_dim) {
  if (std::holds_alternative<std::monostate>(stage)) return in_dim;
  if (const auto* net = std::get_if<ReluStack>(&stage)) {
    if (net->weights.empty()) throw std::invalid_argument("ReluStack: no layers");
    return static_cast<int>(net->weights.back().rows());
  }
  return std::get<ExactMapUse>(stage).out_dim;
}

}  // namespace

void register_exact_map(const std::string& id, ExactMapFn fn) {
  std::lock_guard<std::mutex> lock(registry_mutex());
  auto [it, inserted] = registry().emplace(id, std::move(fn));
  (void)it;
  if (!inserted)
    throw std::runtime_error("register_exact_map: id '" + id + "' already registered");
}

bool exact_map_registered(const std::string& id) {
  std::lock_guard<std::mutex> lock(registry_mutex());
  return registry().count(id) > 0;
}

const ExactMapFn& exact_map(const std::string& id) {
  std::lock_guard<std::mutex> lock(registry_mutex());
  auto it = registry().find(id);
  if (it == registry().end())
    throw std::runtime_error("exact_map: id '" + id + "' not registered");
  return it->second;  // map nodes are stable, the reference outlives the lock
}

Matrix softmax_columns(const Matrix& logits) {
  Matrix w(logits.rows(), logits.cols());
  for (Eigen::Index col = 0; col < logits.cols(); ++col) {
    const double peak = logits.col(col).maxCoeff();
    w.col(col) = (logits.col(col).array() - peak).exp();
    w.col(col) /= w.col(col).sum();
  }
  return w;
}

Matrix attention_logits(const AttentionHead& head, const Matrix& x) {
  if (head.K.cols() != x.rows() || head.Q.cols() != x.rows() || head.V.cols() != x.rows())
    throw std::invalid_argument("attention: K/Q/V column count must match token dim");
  if (head.K.rows() != head.Q.rows())
    throw std::invalid_argument("attention: K and Q must share their output dim");
  Matrix s = head.temperature * ((head.K * x).transpose() * (head.Q * x));
  const double extreme = s.array().abs().maxCoeff();
  if (!std::isfinite(extreme) || extreme > kLogitCap)
    throw std::runtime_error("attention: logit magnitude exceeds cap 700");
  return s;
}

Matrix attention_forward(const std::vector<AttentionHead>& heads, const Matrix& x,
                         bool residual) {
  Matrix z;
  if (heads.empty()) {
    z = Matrix::Zero(x.rows(), x.cols());
  } else {
    for (const auto& head : heads) {
      Matrix contribution = head.V * x * softmax_columns(attention_logits(head, x));
      if (z.size() == 0) {
        z = std::move(contribution);
      } else {
        if (z.rows() != contribution.rows())
          throw std::invalid_argument("attention: heads disagree on output dim");
        z += contribution;
      }
    }
  }
  if (residual) {
    if (z.rows() != x.rows())
      throw std::invalid_argument("attention: residual needs matching dims");
    z += x;
  }
  return z;
}

Vector relu_stack_eval(const ReluStack& net, const Vector& input) {
  if (net.weights.empty() || net.weights.size() != net.biases.size())
    throw std::invalid_argument("ReluStack: weights/biases mismatch");
  Vector h = net.weights[0] * input + net.biases[0];
  for (size_t i = 1; i < net.weights.size(); ++i) {
    h = h.cwiseMax(0.0);
    h = net.weights[i] * h + net.biases[i];
  }
  return h;
}

Matrix mlp_forward(const MlpStage& stage, const Matrix& x) {
  if (std::holds_alternative<std::monostate>(stage)) return x;
  const Eigen::Index tokens = x.cols();
  if (const auto* net = std::get_if<ReluStack>(&stage)) {
    const int out = mlp_out_dim(stage, static_cast<int>(x.rows()));
    Matrix y(out, tokens);
    for (Eigen::Index j = 0; j < tokens; ++j) {
      Vector in;
      if (net->with_index) {
        in.resize(x.rows() + 1);
        in.head(x.rows()) = x.col(j);
        in(x.rows()) = static_cast<double>(j);
      } else {
        in = x.col(j);
      }
      y.col(j) = relu_stack_eval(*net, in);
    }
    return y;
  }
  const auto& use = std::get<ExactMapUse>(stage);
  const ExactMapFn& fn = exact_map(use.id);
  Matrix y(use.out_dim, tokens);
  for (Eigen::Index j = 0; j < tokens; ++j) {
    Vector out = fn(x.col(j), static_cast<int>(j), use.params);
    if (out.size() != use.out_dim)
      throw std::runtime_error("exact map '" + use.id + "': wrong output dim");
    y.col(j) = out;
  }
  return y;
}

Matrix transformer_forward(const TransformerSpec& spec, const Matrix& x0) {
  if (x0.rows() != spec.input_dim)
    throw std::invalid_argument("transformer_forward: input dim mismatch");
  Matrix x = x0;
  for (const Layer& layer : spec.layers) {
    x = attention_forward(layer.heads, x, layer.residual);
    x = mlp_forward(layer.mlp, x);
  }
  return x;
}

std::vector<int> TransformerSpec::layer_dims() const {
  std::vector<int> dims;
  int d = input_dim;
  for (const Layer& layer : layers) {
    int after_attention = layer.heads.empty() ? d : static_cast<int>(layer.heads[0].V.rows());
    d = mlp_out_dim(layer.mlp, after_attention);
    dims.push_back(d);
  }
  return dims;
}

int TransformerSpec::width() const {
  int w = input_dim;
  int d = input_dim;
  for (const Layer& layer : layers) {
    int after_attention = layer.heads.empty() ? d : static_cast<int>(layer.heads[0].V.rows());
    w = std::max(w, after_attention);
    d = mlp_out_dim(layer.mlp, after_attention);
    w = std::max(w, d);
  }
  return w;
}

int TransformerSpec::mlp_hidden_width() const {
  int w = 0;
  for (const Layer& layer : layers)
    if (const auto* net = std::get_if<ReluStack>(&layer.mlp))
      w = std::max(w, net->hidden_width());
  return w;
}

ReluStack build_indicator_net(long long r, long long s) {
  if (r > s) throw std::invalid_argument("build_indicator_net: need r <= s");
  ReluStack net;
  Matrix w0(4, 1);
  w0 << 1, 1, 1, 1;
  Vector b0(4);
  b0 << static_cast<double>(-(r - 1)), static_cast<double>(-r),
      static_cast<double>(-s), static_cast<double>(-(s + 1));
  Matrix w1(1, 4);
  w1 << 1, -1, -1, 1;
  Vector b1 = Vector::Zero(1);
  net.weights = {w0, w1};
  net.biases = {b0, b1};
  return net;
}

ReluStack build_bump_memorizer(const std::vector<double>& anchors,
                               const std::vector<double>& values) {
  const size_t k = anchors.size();
  if (k == 0 || values.size() != k)
    throw std::invalid_argument("build_bump_memorizer: need matching nonempty tables");
  std::vector<double> sorted = anchors;
  std::sort(sorted.begin(), sorted.end());
  double min_gap = std::numeric_limits<double>::infinity();
  for (size_t i = 1; i < k; ++i) min_gap = std::min(min_gap, sorted[i] - sorted[i - 1]);
  if (k > 1 && !(min_gap > 0.0))
    throw std::invalid_argument("build_bump_memorizer: anchors must be distinct");
  // Round the plateau half-width down to a power of two: bumps stay disjoint
  // (delta only shrinks) and value/delta stays exactly representable for
  // dyadic tables, so distant anchors' fired shoulders cancel with no residue.
  const double delta = k > 1 ? std::ldexp(1.0, std::ilogb(min_gap / 4.0)) : 1.0;

  ReluStack net;
  Matrix w0(4 * k, 1);
  Vector b0(4 * k);
  Matrix w1(1, 4 * k);
  Vector b1 = Vector::Zero(1);
  for (size_t i = 0; i < k; ++i) {
    const double a = anchors[i];
    const double scale = values[i] / delta;
    const double shifts[4] = {2 * delta, delta, -delta, -2 * delta};
    const double signs[4] = {1.0, -1.0, -1.0, 1.0};
    for (int t = 0; t < 4; ++t) {
      w0(4 * i + t, 0) = 1.0;
      b0(4 * i + t) = -(a - shifts[t]);
      w1(0, 4 * i + t) = signs[t] * scale;
    }
  }
  net.weights = {w0, w1};
  net.biases = {b0, b1};
  return net;
}

json matrix_to_json(const Matrix& m) {
  json data = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) data.push_back(m(i, j));
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", data}};
}

Matrix matrix_from_json(const json& j) {
  const auto rows = j.at("rows").get<Eigen::Index>();
  const auto cols = j.at("cols").get<Eigen::Index>();
  const auto& data = j.at("data");
  if (static_cast<Eigen::Index>(data.size()) != rows * cols)
    throw std::invalid_argument("matrix_from_json: data length mismatch");
  Matrix m(rows, cols);
  size_t idx = 0;
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = data.at(idx++).get<double>();
  return m;
}

static json vector_to_json(const Vector& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

static Vector vector_from_json(const json& j) {
  Vector v(j.size());
  for (size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = j.at(i).get<double>();
  return v;
}

static json mlp_to_json(const MlpStage& stage) {
  if (std::holds_alternative<std::monostate>(stage)) return json{{"kind", "none"}};
  if (const auto* net = std::get_if<ReluStack>(&stage)) {
    json weights = json::array(), biases = json::array();
    for (const auto& w : net->weights) weights.push_back(matrix_to_json(w));
    for (const auto& b : net->biases) biases.push_back(vector_to_json(b));
    return json{{"kind", "relu_stack"},
                {"weights", weights},
                {"biases", biases},
                {"with_index", net->with_index}};
  }
  const auto& use = std::get<ExactMapUse>(stage);
  return json{
      {"kind", "exact_map"}, {"id", use.id}, {"params", use.params}, {"out_dim", use.out_dim}};
}

static MlpStage mlp_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "none") return std::monostate{};
  if (kind == "relu_stack") {
    ReluStack net;
    for (const auto& w : j.at("weights")) net.weights.push_back(matrix_from_json(w));
    for (const auto& b : j.at("biases")) net.biases.push_back(vector_from_json(b));
    net.with_index = j.at("with_index").get<bool>();
    return net;
  }
  if (kind == "exact_map") {
    ExactMapUse use;
    use.id = j.at("id").get<std::string>();
    use.params = j.at("params");
    use.out_dim = j.at("out_dim").get<int>();
    return use;
  }
  throw std::invalid_argument("mlp_from_json: unknown kind '" + kind + "'");
}

json transformer_to_json(const TransformerSpec& spec) {
  json layers = json::array();
  for (const Layer& layer : spec.layers) {
    json heads = json::array();
    for (const AttentionHead& h : layer.heads)
      heads.push_back(json{{"K", matrix_to_json(h.K)},
                           {"Q", matrix_to_json(h.Q)},
                           {"V", matrix_to_json(h.V)},
                           {"temperature", h.temperature}});
    layers.push_back(
        json{{"heads", heads}, {"residual", layer.residual}, {"mlp", mlp_to_json(layer.mlp)}});
  }
  return json{{"input_dim", spec.input_dim}, {"layers", layers}};
}

TransformerSpec transformer_from_json(const json& j) {
  TransformerSpec spec;
  spec.input_dim = j.at("input_dim").get<int>();
  for (const auto& jl : j.at("layers")) {
    Layer layer;
    for (const auto& jh : jl.at("heads")) {
      AttentionHead h;
      h.K = matrix_from_json(jh.at("K"));
      h.Q = matrix_from_json(jh.at("Q"));
      h.V = matrix_from_json(jh.at("V"));
      h.temperature = jh.at("temperature").get<double>();
      layer.heads.push_back(std::move(h));
    }
    layer.residual = jl.at("residual").get<bool>();
    layer.mlp = mlp_from_json(jl.at("mlp"));
    spec.layers.push_back(std::move(layer));
  }
  return spec;
}

}  // namespace grtl
