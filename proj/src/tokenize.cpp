#include "grtl/tokenize.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace grtl {

TokenizedGraph tokenize_adjacency(const Graph& g, int pad_n, bool with_index) {
  if (pad_n < g.n) throw std::invalid_argument("tokenize_adjacency: pad_n below node count");
  TokenizedGraph t;
  t.n = g.n;
  t.scheme = "adjacency";
  const int dim = pad_n + (with_index ? 1 : 0);
  t.tokens = Matrix::Zero(dim, pad_n);
  for (auto [u, v] : g.edges) {
    t.tokens(v, u) = 1.0;
    if (!g.directed) t.tokens(u, v) = 1.0;
  }
  if (with_index)
    for (int i = 0; i < pad_n; ++i) t.tokens(pad_n, i) = static_cast<double>(i);
  return t;
}

TokenizedGraph tokenize_edgelist(const Graph& g, int pad_n) {
  if (pad_n < g.n) throw std::invalid_argument("tokenize_edgelist: pad_n below node count");
  TokenizedGraph t;
  t.n = g.n;
  t.scheme = "edgelist";
  t.tokens = Matrix::Zero(2 * pad_n, static_cast<int>(g.edges.size()));
  for (size_t e = 0; e < g.edges.size(); ++e) {
    t.tokens(g.edges[e].first, static_cast<int>(e)) = 1.0;
    t.tokens(pad_n + g.edges[e].second, static_cast<int>(e)) = 1.0;
  }
  return t;
}

EigenDecomposition jacobi_eigen_symmetric(Matrix sym) {
  const Eigen::Index n = sym.rows();
  if (sym.cols() != n) throw std::invalid_argument("jacobi: matrix must be square");
  if ((sym - sym.transpose()).lpNorm<Eigen::Infinity>() > 1e-12 * std::max(1.0, sym.norm()))
    throw std::invalid_argument("jacobi: matrix must be symmetric");
  Matrix v = Matrix::Identity(n, n);
  auto off_mass = [&sym, n]() {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = i + 1; j < n; ++j) acc += 2.0 * sym(i, j) * sym(i, j);
    return std::sqrt(acc);
  };
  int sweeps = 0;
  const int max_sweeps = 80;
  while (off_mass() >= 1e-12 && sweeps < max_sweeps) {
    ++sweeps;
    for (Eigen::Index p = 0; p < n - 1; ++p)
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double apq = sym(p, q);
        if (apq == 0.0) continue;
        const double theta = (sym(q, q) - sym(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = sym(k, p), akq = sym(k, q);
          sym(k, p) = c * akp - s * akq;
          sym(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double apk = sym(p, k), aqk = sym(q, k);
          sym(p, k) = c * apk - s * aqk;
          sym(q, k) = s * apk + c * aqk;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
  }
  if (off_mass() >= 1e-12) throw std::runtime_error("jacobi: did not converge");

  // Canonical order: ascending eigenvalue, near-ties broken by the vector
  // entries; each vector's first decisive component is made positive.
  std::vector<int> order(n);
  for (Eigen::Index i = 0; i < n; ++i) order[i] = static_cast<int>(i);
  for (Eigen::Index col = 0; col < n; ++col) {
    double peak = v.col(col).lpNorm<Eigen::Infinity>();
    for (Eigen::Index r = 0; r < n; ++r) {
      if (std::abs(v(r, col)) > 1e-9 * std::max(1.0, peak)) {
        if (v(r, col) < 0.0) v.col(col) = -v.col(col);
        break;
      }
    }
  }
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (std::abs(sym(a, a) - sym(b, b)) > 1e-9) return sym(a, a) < sym(b, b);
    for (Eigen::Index r = 0; r < n; ++r) {
      if (v(r, a) != v(r, b)) return v(r, a) < v(r, b);
    }
    return false;
  });
  EigenDecomposition dec;
  dec.values.resize(n);
  dec.vectors.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    dec.values(i) = sym(order[i], order[i]);
    dec.vectors.col(i) = v.col(order[i]);
  }
  dec.sweeps = sweeps;
  return dec;
}

TokenizedGraph tokenize_laplacian(const Graph& g, int m) {
  if (g.directed) throw std::invalid_argument("tokenize_laplacian: undirected graphs only");
  if (m < 1 || m > g.n) throw std::invalid_argument("tokenize_laplacian: need 1 <= m <= n");
  Matrix lap = Matrix::Zero(g.n, g.n);
  for (auto [u, v] : g.edges) {
    if (u == v) continue;
    lap(u, v) -= 1.0;
    lap(v, u) -= 1.0;
    lap(u, u) += 1.0;
    lap(v, v) += 1.0;
  }
  EigenDecomposition dec = jacobi_eigen_symmetric(lap);
  TokenizedGraph t;
  t.n = g.n;
  t.scheme = "laplacian";
  t.tokens = Matrix::Zero(m, g.n + 1);
  for (int r = 0; r < m; ++r) t.tokens(r, 0) = dec.values(r);
  for (int node = 0; node < g.n; ++node)
    for (int r = 0; r < m; ++r) t.tokens(r, node + 1) = dec.vectors(node, r);
  return t;
}

namespace {

std::string format_double(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  if (ec != std::errc()) throw std::runtime_error("format_double failed");
  return std::string(buf, ptr);
}

double parse_double(const std::string& s) {
  double x = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw std::runtime_error("import_dataset: bad number '" + s + "'");
  return x;
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

json tokenized_to_json(const TokenizedGraph& t) {
  json tokens = json::array();
  for (Eigen::Index col = 0; col < t.tokens.cols(); ++col) {
    json tok = json::array();
    for (Eigen::Index r = 0; r < t.tokens.rows(); ++r) tok.push_back(t.tokens(r, col));
    tokens.push_back(std::move(tok));
  }
  json j{{"graph_id", t.graph_id},
         {"n", t.n},
         {"scheme", t.scheme},
         {"tokens", tokens},
         {"label", nullptr}};
  if (t.label) j["label"] = *t.label;
  return j;
}

TokenizedGraph tokenized_from_json(const json& j) {
  static const std::vector<std::string> keys = {"graph_id", "label", "n", "scheme", "tokens"};
  for (const auto& k : keys)
    if (!j.contains(k))
      throw std::invalid_argument("dataset record: missing key '" + k + "'");
  if (j.size() != keys.size())
    throw std::invalid_argument("dataset record: unexpected extra keys");
  TokenizedGraph t;
  t.graph_id = j.at("graph_id").get<std::string>();
  t.n = j.at("n").get<int>();
  t.scheme = j.at("scheme").get<std::string>();
  const auto& tokens = j.at("tokens");
  const Eigen::Index cols = static_cast<Eigen::Index>(tokens.size());
  const Eigen::Index rows = cols == 0 ? 0 : static_cast<Eigen::Index>(tokens.at(0).size());
  t.tokens.resize(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c) {
    const auto& tok = tokens.at(c);
    if (static_cast<Eigen::Index>(tok.size()) != rows)
      throw std::invalid_argument("dataset record: ragged tokens");
    for (Eigen::Index r = 0; r < rows; ++r) t.tokens(r, c) = tok.at(r).get<double>();
  }
  if (!j.at("label").is_null()) t.label = j.at("label").get<double>();
  return t;
}

void export_dataset(const std::vector<TokenizedGraph>& data, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("export_dataset: cannot open " + path);
  if (ends_with(path, ".jsonl")) {
    for (const auto& t : data) out << tokenized_to_json(t).dump() << "\n";
  } else if (ends_with(path, ".csv")) {
    Eigen::Index rows = data.empty() ? 0 : data[0].tokens.rows();
    Eigen::Index cols = data.empty() ? 0 : data[0].tokens.cols();
    out << "graph_id,n,scheme,label,tokens,dim";
    for (Eigen::Index i = 0; i < rows * cols; ++i) out << ",v" << i;
    out << "\n";
    for (const auto& t : data) {
      if (t.tokens.rows() != rows || t.tokens.cols() != cols)
        throw std::invalid_argument("export_dataset: csv needs uniform shapes, use jsonl");
      if (t.graph_id.find(',') != std::string::npos ||
          t.scheme.find(',') != std::string::npos)
        throw std::invalid_argument("export_dataset: csv fields must not contain commas");
      out << t.graph_id << "," << t.n << "," << t.scheme << ","
          << (t.label ? format_double(*t.label) : "") << "," << cols << "," << rows;
      for (Eigen::Index c = 0; c < cols; ++c)
        for (Eigen::Index r = 0; r < rows; ++r) out << "," << format_double(t.tokens(r, c));
      out << "\n";
    }
  } else {
    throw std::invalid_argument("export_dataset: path must end in .jsonl or .csv");
  }
}

std::vector<TokenizedGraph> import_dataset(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("import_dataset: cannot open " + path);
  std::vector<TokenizedGraph> data;
  std::string line;
  if (ends_with(path, ".jsonl")) {
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      data.push_back(tokenized_from_json(json::parse(line)));
    }
    return data;
  }
  if (!ends_with(path, ".csv"))
    throw std::invalid_argument("import_dataset: path must end in .jsonl or .csv");
  if (!std::getline(in, line)) return data;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (line.back() == ',') cells.push_back("");
    if (cells.size() < 6) throw std::runtime_error("import_dataset: short csv row");
    TokenizedGraph t;
    t.graph_id = cells[0];
    t.n = static_cast<int>(parse_double(cells[1]));
    t.scheme = cells[2];
    if (!cells[3].empty()) t.label = parse_double(cells[3]);
    const Eigen::Index cols = static_cast<Eigen::Index>(parse_double(cells[4]));
    const Eigen::Index rows = static_cast<Eigen::Index>(parse_double(cells[5]));
    if (static_cast<Eigen::Index>(cells.size()) != 6 + rows * cols)
      throw std::runtime_error("import_dataset: csv row length mismatch");
    t.tokens.resize(rows, cols);
    Eigen::Index idx = 6;
    for (Eigen::Index c = 0; c < cols; ++c)
      for (Eigen::Index r = 0; r < rows; ++r) t.tokens(r, c) = parse_double(cells[idx++]);
    data.push_back(std::move(t));
  }
  return data;
}

}  // namespace grtl
