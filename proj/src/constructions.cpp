#include "grtl/constructions.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <mutex>
#include <stdexcept>
#include <utility>

#include "grtl/eulerian.hpp"
#include "grtl/rng.hpp"
#include "grtl/tokenize.hpp"

namespace grtl {
namespace {

// Even with exact integer payloads the attention sums leave float noise, so a
// pre-round residual close to 1/2 means the construction failed, not that the
// rounding got lucky.
constexpr double kRoundGuard = 0.49;

// Digit-packed incidence entries must stay far enough below 2^53 that the
// attention sums (n terms, each up to the packed value) keep their error under
// kRoundGuard. 2^49 leaves an 8x margin over the worst accepted case.
constexpr long long kPackLimit = 1LL << 49;

long long round_checked(double v, const char* what, double* max_residual) {
  const long long r = std::llround(v);
  const double resid = std::abs(v - static_cast<double>(r));
  if (!(resid < kRoundGuard)) throw std::runtime_error(std::string(what) + ": value " +
                                                       std::to_string(v) +
                                                       " is not close to an integer");
  if (max_residual && resid > *max_residual) *max_residual = resid;
  return r;
}

int param_int(const json& p, const char* key) { return p.at(key).get<int>(); }
double param_double(const json& p, const char* key) { return p.at(key).get<double>(); }

// [z == t] on integer z, as three ReLU units with coefficients (1, -2, 1).
void emit_point_gate(Matrix& w, Vector& b, int row, int coord, long long t, double coord_scale = 1.0) {
  for (int u = 0; u < 3; ++u) {
    w(row + u, coord) = coord_scale;
    b(row + u) = static_cast<double>(-t) + (1 - u);  // biases t-1, t, t+1 negated
  }
}

// [r <= z <= s] on integer z, as four ReLU units with coefficients (1, -1, -1, 1).
void emit_window_gate(Matrix& w, Vector& b, int row, int coord, long long r, long long s) {
  const double biases[4] = {static_cast<double>(-(r - 1)), static_cast<double>(-r),
                            static_cast<double>(-s), static_cast<double>(-(s + 1))};
  for (int u = 0; u < 4; ++u) {
    w(row + u, coord) = 1.0;
    b(row + u) = biases[u];
  }
}

// ---------------------------------------------------------------------------
// one vs two cycles

// token = adjacency row (n entries, each 0/1, exactly two ones) with the node
// index appended; output parks (a, b, index) in block 3*index.
Vector pair_slot_map(const Vector& u, int idx, const json& p) {
  const int n = param_int(p, "n");
  if (u.size() < n + 1) throw std::invalid_argument("pair decoding: token too short");
  if (idx < 0 || idx >= n) throw std::runtime_error("pair decoding: unexpected token index");
  double s1 = 0.0, s2 = 0.0;
  int deg = 0;
  for (int j = 0; j < n; ++j) {
    const long long bit = std::llround(u(j));
    if (std::abs(u(j) - static_cast<double>(bit)) > 1e-9 || (bit != 0 && bit != 1))
      throw std::runtime_error("pair decoding: adjacency entries must be 0/1");
    if (bit) {
      ++deg;
      s1 += j;
      s2 += static_cast<double>(j) * j;
    }
  }
  if (deg != 2) throw std::runtime_error("pair decoding: node degree must be exactly 2");
  // With two neighbors a < b: s1 = a+b, s2 = a^2+b^2, so 2*s2 - s1^2 = (a-b)^2.
  const double disc = 2.0 * s2 - s1 * s1;
  const long long root = std::llround(std::sqrt(std::max(disc, 0.0)));
  if (root * root != std::llround(disc))
    throw std::runtime_error("pair decoding: discriminant is not a perfect square");
  const long long a = std::llround((s1 - static_cast<double>(root)) / 2.0);
  const long long b = std::llround(s1) - a;
  if (a < 0 || b >= n || a >= b || std::llround(u(a)) != 1 || std::llround(u(b)) != 1)
    throw std::runtime_error("pair decoding: recovered endpoints do not match the row");
  Vector out = Vector::Zero(3 * n);
  out(3 * idx) = static_cast<double>(a);
  out(3 * idx + 1) = static_cast<double>(b);
  out(3 * idx + 2) = idx;
  return out;
}

// token = sum of all parked blocks; union-find over the decoded edge list.
Vector edge_list_connectivity_map(const Vector& u, int /*idx*/, const json& p) {
  const int n = param_int(p, "n");
  if (u.size() != 3 * n) throw std::invalid_argument("connectivity readout: bad token size");
  UnionFind uf(n);
  for (int t = 0; t < n; ++t) {
    const long long a = round_checked(u(3 * t), "connectivity readout", nullptr);
    const long long b = round_checked(u(3 * t + 1), "connectivity readout", nullptr);
    const long long i = round_checked(u(3 * t + 2), "connectivity readout", nullptr);
    if (i != t) throw std::logic_error("connectivity readout: index slot mismatch");
    if (a < 0 || a >= n || b < 0 || b >= n)
      throw std::runtime_error("connectivity readout: endpoint out of range");
    uf.unite(static_cast<int>(a), t);
    uf.unite(static_cast<int>(b), t);
  }
  const int root = uf.find(0);
  bool connected = true;
  for (int v = 1; v < n; ++v) connected = connected && uf.find(v) == root;
  Vector out(1);
  out(0) = connected ? 1.0 : 0.0;
  return out;
}

// ReLU realization of pair_slot_map. The neighbor pair is read off the scalar
// key kappa = sum_j (j + (2n+1) j^2) x_j, which separates pairs because the
// linear part is bounded by 2n-3 while the quadratic part moves in steps of
// 2n+1. One gate per candidate pair memorizes (a, b); index gates steer the
// result into block 3*index.
ReluStack build_pair_slot_net(int n) {
  std::vector<std::pair<int, int>> pairs;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) pairs.emplace_back(a, b);
  const int pair_count = static_cast<int>(pairs.size());
  const int hidden = 3 * pair_count + 3 * n + 1;
  const int in_dim = n + 1;  // adjacency row plus index coordinate
  const int out_dim = 3 * n;

  Matrix w1 = Matrix::Zero(hidden, in_dim);
  Vector b1 = Vector::Zero(hidden);
  for (int pidx = 0; pidx < pair_count; ++pidx) {
    const auto [a, b] = pairs[pidx];
    const long long kappa =
        (a + b) + static_cast<long long>(2 * n + 1) * (static_cast<long long>(a) * a +
                                                       static_cast<long long>(b) * b);
    for (int u = 0; u < 3; ++u) {
      const int row = 3 * pidx + u;
      for (int j = 0; j < n; ++j)
        w1(row, j) = static_cast<double>(j + static_cast<long long>(2 * n + 1) *
                                                 static_cast<long long>(j) * j);
      b1(row) = static_cast<double>(-kappa) + (1 - u);
    }
  }
  const int index_base = 3 * pair_count;
  for (int t = 0; t < n; ++t) emit_point_gate(w1, b1, index_base + 3 * t, n, t);
  const int pass_row = index_base + 3 * n;
  w1(pass_row, n) = 1.0;  // index passthrough; the index is never negative

  Matrix w2 = Matrix::Zero(out_dim, hidden);
  Vector b2 = Vector::Zero(out_dim);
  for (int t = 0; t < n; ++t) {
    for (int pidx = 0; pidx < pair_count; ++pidx) {
      const auto [a, b] = pairs[pidx];
      const double coeff[3] = {1.0, -2.0, 1.0};
      for (int u = 0; u < 3; ++u) {
        w2(3 * t, 3 * pidx + u) = a * coeff[u];
        w2(3 * t + 1, 3 * pidx + u) = b * coeff[u];
      }
    }
    const double coeff[3] = {1.0, -2.0, 1.0};
    for (int u = 0; u < 3; ++u) {
      // +n when the index gate fires, -n otherwise: only the owning token's
      // block survives the ReLU (values stay in [0, n-1]).
      w2(3 * t, index_base + 3 * t + u) = n * coeff[u];
      w2(3 * t + 1, index_base + 3 * t + u) = n * coeff[u];
      w2(3 * t + 2, index_base + 3 * t + u) = n * coeff[u];
    }
    w2(3 * t + 2, pass_row) = 1.0;
    b2(3 * t) = -n;
    b2(3 * t + 1) = -n;
    b2(3 * t + 2) = -n;
  }

  ReluStack net;
  net.weights = {w1, w2, Matrix::Identity(out_dim, out_dim)};
  net.biases = {b1, b2, Vector::Zero(out_dim)};
  net.with_index = false;  // the tokenizer already appended the index
  return net;
}

// ---------------------------------------------------------------------------
// adjacency powers

// Scalar gate mapping an attention weight to its out-neighbor indicator:
// anchors 1/t -> 1 for t = 1..n (the weight a neighbor gets at out-degree t,
// up to an exp(-c) leak far below the plateau radius) and 0 -> 0.
const ReluStack& degree_unit_net(int n) {
  static std::mutex mu;
  static std::map<int, ReluStack> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  std::vector<double> anchors{0.0};
  std::vector<double> values{0.0};
  for (int t = n; t >= 1; --t) {
    anchors.push_back(1.0 / t);
    values.push_back(1.0);
  }
  return cache.emplace(n, build_bump_memorizer(anchors, values)).first->second;
}

Vector power_step_core(const Vector& u, int idx, const json& p, double* max_residual) {
  const int n = param_int(p, "n");
  const double c = param_double(p, "temperature");
  const bool memorizer = p.at("memorizer").get<bool>();
  if (u.size() != 3 * n) throw std::invalid_argument("power step: bad token size");
  if (idx < 0 || idx >= n) throw std::runtime_error("power step: unexpected token index");

  // Block 2 holds the attention weights over keys; recover the out-degree.
  double deg_sum = 0.0;
  if (memorizer) {
    const ReluStack& gate = degree_unit_net(n);
    Vector scalar(1);
    for (int j = 0; j < n; ++j) {
      scalar(0) = u(n + j);
      deg_sum += relu_stack_eval(gate, scalar)(0);
    }
  } else {
    for (int j = 0; j < n; ++j)
      if (u(n + j) > 1.0 / (2.0 * n)) deg_sum += 1.0;
  }
  const long long deg = round_checked(deg_sum, "power step degree", nullptr);
  if (deg < 1 || deg > n) throw std::runtime_error("power step: degree recovery failed");

  // The softmax normalizer divided by e^c; multiplying the averaged blocks by
  // it undoes the attention normalization exactly up to the exp(-c) leak.
  const double rescale = static_cast<double>(deg) + (n - deg) * std::exp(-c);
  Vector out = Vector::Zero(3 * n);
  for (int j = 0; j < n; ++j) {
    const long long bit = round_checked(u(n + j) * rescale, "power step adjacency", max_residual);
    if (bit != 0 && bit != 1) throw std::runtime_error("power step: adjacency bit out of range");
    out(j) = static_cast<double>(bit);
  }
  out(n + idx) = 1.0;
  for (int t = 0; t < n; ++t)
    out(2 * n + t) =
        static_cast<double>(round_checked(u(2 * n + t) * rescale, "power step product", max_residual));
  return out;
}

Vector power_step_map(const Vector& u, int idx, const json& p) {
  return power_step_core(u, idx, p, nullptr);
}

// ---------------------------------------------------------------------------
// sparse mutual-edge detection

struct RipKey {
  int n;
  int d;
  double alpha;
  uint64_t seed;
  bool operator<(const RipKey& o) const {
    return std::tie(n, d, alpha, seed) < std::tie(o.n, o.d, o.alpha, o.seed);
  }
};

const RipSystem& memoized_rip(int n, int d, double alpha, uint64_t seed) {
  static std::mutex mu;
  static std::map<RipKey, RipSystem> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(RipKey{n, d, alpha, seed});
  if (it == cache.end())
    it = cache.emplace(RipKey{n, d, alpha, seed}, sample_rip_vectors(n, d, alpha, seed)).first;
  return it->second;
}

// token = raw adjacency row (real nodes) or zero (the appended dummy);
// output = (phi for the out-neighborhood; y_index; 1; 0), dummy = e_last.
Vector sparse_embed_map(const Vector& u, int idx, const json& p) {
  const int n = param_int(p, "n");
  const int d = param_int(p, "d");
  const double alpha = param_double(p, "alpha");
  const uint64_t seed = p.at("seed").get<uint64_t>();
  const RipSystem& sys = memoized_rip(n, d, alpha, seed);
  const int pdim = sys.rip_dim;
  const int m = 2 * pdim + 2;
  Vector out = Vector::Zero(m);
  if (idx == n) {  // dummy token
    out(m - 1) = 1.0;
    return out;
  }
  if (idx < 0 || idx > n) throw std::runtime_error("sparse embed: unexpected token index");
  if (u.size() < n) throw std::invalid_argument("sparse embed: token too short");
  std::vector<int> support;
  for (int j = 0; j < n; ++j)
    if (u(j) > 0.5) support.push_back(j);
  if (static_cast<int>(support.size()) > d)
    throw std::runtime_error("sparse embed: out-degree exceeds the embedding budget");
  if (!support.empty()) {
    PhiResult phi = compute_phi(sys, support);
    if (!phi.feasible)
      throw std::runtime_error("sparse embed: sign-vector margins infeasible for this support");
    out.head(pdim) = phi.phi;
  }
  out.segment(pdim, pdim) = sys.y.col(idx);
  out(2 * pdim) = 1.0;
  return out;
}

Vector coordinate_threshold_map(const Vector& u, int /*idx*/, const json& p) {
  const int coord = param_int(p, "coordinate");
  const double threshold = param_double(p, "threshold");
  if (coord < 0 || coord >= u.size())
    throw std::invalid_argument("coordinate threshold: coordinate out of range");
  Vector out(1);
  out(0) = u(coord) >= threshold ? 1.0 : 0.0;
  return out;
}

// ---------------------------------------------------------------------------
// induced-pattern counting

// token = adjacency row; output slots the row at the node's within-set
// position, publishes set membership (w region) and, for the first q tokens,
// the set-aggregator flag (z region).
Vector node_slot_map(const Vector& u, int idx, const json& p) {
  const int n = param_int(p, "n");
  const int k = param_int(p, "k");
  const PartitionPlan plan = PartitionPlan::make(n, k);
  if (idx < 0 || idx >= n) throw std::runtime_error("node slot: unexpected token index");
  if (u.size() < n) throw std::invalid_argument("node slot: token too short");
  const int big_r = plan.set_size * n;
  Vector out = Vector::Zero(plan.token_dim());
  const int t = plan.node_set[idx];
  const int pos = idx - plan.set_start[t];
  for (int v = 0; v < n; ++v) out(pos * n + v) = u(v);
  out(big_r + t) = 1.0;
  if (idx < plan.set_count) out(big_r + plan.set_count + idx) = 1.0;
  return out;
}

// Set token t gathered its members' slotted rows; rescale to exact bits and
// stamp the whole block with the positional scale 2^t (the digits are 0/1
// incidence bits, so base 2 keeps distinct sets separable). Tokens below the
// combination count also publish their combination mask for the next layer.
Vector set_digit_pack_map(const Vector& u, int idx, const json& p) {
  const int n = param_int(p, "n");
  const int k = param_int(p, "k");
  const double c = param_double(p, "temperature");
  const PartitionPlan plan = PartitionPlan::make(n, k);
  const int q = plan.set_count;
  const int big_r = plan.set_size * n;
  if (u.size() != plan.token_dim()) throw std::invalid_argument("digit pack: bad token size");
  Vector out = Vector::Zero(plan.token_dim());
  if (idx >= 0 && idx < q) {
    const int len = plan.set_len[idx];
    const double rescale = static_cast<double>(len) + (n - len) * std::exp(-c);
    const double scale = static_cast<double>(1LL << idx);
    for (int a = 0; a < plan.set_size; ++a) {
      for (int v = 0; v < n; ++v) {
        const long long bit = round_checked(u(a * n + v) * rescale, "digit pack", nullptr);
        if (bit != 0 && bit != 1) throw std::runtime_error("digit pack: incidence bit out of range");
        if (a >= len && bit != 0)
          throw std::runtime_error("digit pack: phantom row past the set length");
        if (bit) out(a * n + v) = scale;
      }
    }
    out(big_r + q + idx) = 1.0;  // keep the aggregator flag for the final gather
  }
  if (idx >= 0 && idx < plan.combo_count())
    for (int s : plan.combos[idx]) out(big_r + s) = 1.0;
  return out;
}

long long ordered_automorphisms(const std::vector<std::vector<char>>& pat) {
  const int k = static_cast<int>(pat.size());
  std::vector<int> perm(k);
  for (int i = 0; i < k; ++i) perm[i] = i;
  long long count = 0;
  do {
    bool ok = true;
    for (int x = 0; x < k && ok; ++x)
      for (int y = 0; y < k && ok; ++y)
        if (pat[x][y] != pat[perm[x]][perm[y]]) ok = false;
    if (ok) ++count;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return count;
}

struct EmbedSearch {
  const std::vector<std::vector<char>>& pat;
  const std::vector<std::vector<char>>& adj;   // local adjacency on the union
  const std::vector<int>& union_nodes;         // local index -> global node
  const PartitionPlan& plan;
  int combo_index;
  int k;
  std::vector<int> assign;
  std::vector<char> used;
  long long count = 0;

  void run(int depth) {
    if (depth == k) {
      std::vector<int> sets;
      for (int x = 0; x < k; ++x) {
        const int s = plan.node_set[union_nodes[assign[x]]];
        if (std::find(sets.begin(), sets.end(), s) == sets.end()) sets.push_back(s);
      }
      std::sort(sets.begin(), sets.end());
      if (plan.padded_combo_index(sets) == combo_index) ++count;
      return;
    }
    const int span = static_cast<int>(adj.size());
    for (int cand = 0; cand < span; ++cand) {
      if (used[cand]) continue;
      bool ok = true;
      for (int prev = 0; prev < depth && ok; ++prev)
        if (pat[depth][prev] && !adj[cand][assign[prev]]) ok = false;
      if (!ok) continue;
      used[cand] = 1;
      assign[depth] = cand;
      run(depth + 1);
      used[cand] = 0;
    }
  }
};

// token = k-fold gather of the scaled incidence blocks for combination idx;
// decode the base-(n+1) digits back into adjacency over the union of the
// combination's sets and count the pattern copies whose padded set support is
// exactly this combination.
Vector digit_decode_count_map(const Vector& u, int idx, const json& p) {
  const int n = param_int(p, "n");
  const int k = param_int(p, "k");
  const double c = param_double(p, "temperature");
  const Graph pattern = graph_from_json(p.at("pattern"));
  const PartitionPlan plan = PartitionPlan::make(n, k);
  Vector out = Vector::Zero(1);
  if (idx < 0 || idx >= plan.combo_count()) return out;
  const int big_r = plan.set_size * n;
  if (u.size() != big_r) throw std::invalid_argument("digit decode: bad token size");

  const double rescale = (static_cast<double>(k) + (n - k) * std::exp(-c)) / k;
  std::vector<long long> packed(static_cast<size_t>(big_r));
  for (int e = 0; e < big_r; ++e) packed[e] = round_checked(u(e) * rescale, "digit decode", nullptr);

  const std::vector<int>& combo = plan.combos[idx];
  std::vector<int> union_nodes;
  for (int s : combo)
    for (int v = plan.set_start[s]; v < plan.set_start[s] + plan.set_len[s]; ++v)
      union_nodes.push_back(v);
  std::vector<int> local_of(n, -1);
  for (size_t i = 0; i < union_nodes.size(); ++i) local_of[union_nodes[i]] = static_cast<int>(i);

  // bit t of entry (a, v) is A[member at position a of set t][v]
  const int span = static_cast<int>(union_nodes.size());
  std::vector<std::vector<char>> adj(span, std::vector<char>(span, 0));
  for (int a = 0; a < plan.set_size; ++a) {
    for (int v = 0; v < n; ++v) {
      long long value = packed[a * n + v];
      if (value < 0 || value >= (1LL << plan.set_count))
        throw std::logic_error("digit decode: packed value out of range");
      for (int t = 0; t < plan.set_count; ++t) {
        const long long digit = (value >> t) & 1;
        const bool in_combo = std::find(combo.begin(), combo.end(), t) != combo.end();
        if (!in_combo) {
          if (digit != 0) throw std::logic_error("digit decode: stray digit outside the combination");
          continue;
        }
        if (digit == 1) {
          if (a >= plan.set_len[t]) throw std::logic_error("digit decode: row past the set length");
          const int u_node = plan.set_start[t] + a;
          if (local_of[u_node] >= 0 && local_of[v] >= 0) adj[local_of[u_node]][local_of[v]] = 1;
        }
      }
    }
  }

  std::vector<std::vector<char>> pat(k, std::vector<char>(k, 0));
  for (const auto& [x, y] : pattern.edges) {
    pat[x][y] = 1;
    pat[y][x] = 1;
  }
  EmbedSearch search{pat, adj, union_nodes, plan, idx, k, std::vector<int>(k), std::vector<char>(span, 0)};
  search.run(0);
  const long long aut = ordered_automorphisms(pat);
  if (search.count % aut != 0) throw std::logic_error("digit decode: embedding count not divisible");
  out(0) = static_cast<double>(search.count / aut);
  return out;
}

// ReLU realization of node_slot_map: position gates pick the within-set row,
// interval gates publish set membership, point gates publish the aggregator
// flag, and an AND gate (x + gate - 1 through ReLU) copies adjacency bits.
ReluStack build_slot_net(const PartitionPlan& plan) {
  const int n = plan.n;
  const int q = plan.set_count;
  const int big_r = plan.set_size * n;
  const int in_dim = n + 1;  // with_index appends the position
  const int z_coord = n;
  const int hidden = 3 * n + 4 * q + 3 * q + n;
  Matrix w1 = Matrix::Zero(hidden, in_dim);
  Vector b1 = Vector::Zero(hidden);
  int row = 0;
  // bank A: [index == set_start[t] + a] for every in-range (t, a)
  std::vector<std::vector<int>> pos_gate(q);
  for (int t = 0; t < q; ++t) {
    pos_gate[t].resize(plan.set_len[t]);
    for (int a = 0; a < plan.set_len[t]; ++a) {
      pos_gate[t][a] = row;
      emit_point_gate(w1, b1, row, z_coord, plan.set_start[t] + a);
      row += 3;
    }
  }
  // bank B: [index in set t]
  std::vector<int> set_gate(q);
  for (int t = 0; t < q; ++t) {
    set_gate[t] = row;
    emit_window_gate(w1, b1, row, z_coord, plan.set_start[t],
                     plan.set_start[t] + plan.set_len[t] - 1);
    row += 4;
  }
  // bank C: [index == i] for the aggregator flags
  std::vector<int> agg_gate(q);
  for (int i = 0; i < q; ++i) {
    agg_gate[i] = row;
    emit_point_gate(w1, b1, row, z_coord, i);
    row += 3;
  }
  // bank D: adjacency passthrough (entries are 0/1, so ReLU is the identity)
  const int pass_base = row;
  for (int v = 0; v < n; ++v) w1(row++, v) = 1.0;

  const int out_dim = plan.token_dim();
  Matrix w2 = Matrix::Zero(out_dim, hidden);
  Vector b2 = Vector::Zero(out_dim);
  const double point_coeff[3] = {1.0, -2.0, 1.0};
  const double window_coeff[4] = {1.0, -1.0, -1.0, 1.0};
  for (int t = 0; t < q; ++t) {
    for (int a = 0; a < plan.set_len[t]; ++a) {
      for (int v = 0; v < n; ++v) {
        const int r = a * n + v;
        w2(r, pass_base + v) = 1.0;
        for (int u = 0; u < 3; ++u) w2(r, pos_gate[t][a] + u) += point_coeff[u];
      }
    }
    for (int a = 0; a < plan.set_len[t]; ++a)
      for (int v = 0; v < n; ++v) b2(a * n + v) = -1.0;
    for (int u = 0; u < 4; ++u) w2(big_r + t, set_gate[t] + u) = window_coeff[u];
  }
  for (int i = 0; i < q; ++i)
    for (int u = 0; u < 3; ++u) w2(big_r + q + i, agg_gate[i] + u) = point_coeff[u];

  ReluStack net;
  net.weights = {w1, w2, Matrix::Identity(out_dim, out_dim)};
  net.biases = {b1, b2, Vector::Zero(out_dim)};
  net.with_index = true;
  return net;
}

Graph pattern_from_param(const json& value) {
  if (value.is_string()) {
    const std::string name = value.get<std::string>();
    if (name == "edge") return make_edge();
    if (name == "triangle") return make_cycle(3);
    if (name == "4-cycle") return make_cycle(4);
    if (name == "path3") return make_path(3);
    if (name == "k4") return make_complete(4);
    throw std::invalid_argument("unknown pattern name: " + name);
  }
  return graph_from_json(value);
}

std::once_flag builtin_flag;

void register_builtins() {
  register_exact_map("cycle-pair-slots", pair_slot_map);
  register_exact_map("edge-list-connectivity", edge_list_connectivity_map);
  register_exact_map("power-step", power_step_map);
  register_exact_map("sparse-sign-embed", sparse_embed_map);
  register_exact_map("coordinate-threshold", coordinate_threshold_map);
  register_exact_map("node-slot", node_slot_map);
  register_exact_map("set-digit-pack", set_digit_pack_map);
  register_exact_map("digit-decode-count", digit_decode_count_map);
}

NetMode mode_from_params(const json& params) {
  const std::string mode = params.value("mode", std::string("exact_map"));
  if (mode == "exact_map") return NetMode::exact_map;
  if (mode == "explicit_net") return NetMode::explicit_net;
  throw std::invalid_argument("mode must be exact_map or explicit_net");
}

void require_cycle_union(const Graph& g) {
  if (g.directed) throw std::invalid_argument("expected an undirected union of cycles");
  std::vector<int> deg(g.n, 0);
  for (const auto& [u, v] : g.edges) {
    ++deg[u];
    ++deg[v];
  }
  for (int v = 0; v < g.n; ++v)
    if (deg[v] != 2) throw std::invalid_argument("expected every node to have degree 2");
}

}  // namespace

void ensure_builtin_maps() { std::call_once(builtin_flag, register_builtins); }

// ---------------------------------------------------------------------------
// one vs two cycles

TransformerSpec build_one_vs_two(int n, NetMode mode) {
  ensure_builtin_maps();
  if (n < 3) throw std::invalid_argument("one_vs_two needs at least 3 nodes");
  TransformerSpec spec;
  spec.input_dim = n + 1;

  Layer first;
  AttentionHead idle;
  idle.K = Matrix::Zero(1, n + 1);
  idle.Q = Matrix::Zero(1, n + 1);
  idle.V = Matrix::Zero(n + 1, n + 1);
  first.heads = {idle};
  first.residual = true;
  if (mode == NetMode::exact_map)
    first.mlp = ExactMapUse{"cycle-pair-slots", json{{"n", n}}, 3 * n};
  else
    first.mlp = build_pair_slot_net(n);
  spec.layers.push_back(std::move(first));

  Layer second;
  AttentionHead sum_all;  // zero logits make the softmax uniform; V = n*I turns the mean into a sum
  sum_all.K = Matrix::Zero(1, 3 * n);
  sum_all.Q = Matrix::Zero(1, 3 * n);
  sum_all.V = static_cast<double>(n) * Matrix::Identity(3 * n, 3 * n);
  second.heads = {sum_all};
  second.residual = false;
  second.mlp = ExactMapUse{"edge-list-connectivity", json{{"n", n}}, 1};
  spec.layers.push_back(std::move(second));
  return spec;
}

Matrix one_vs_two_input(const Graph& g) {
  return tokenize_adjacency(g, g.n, /*with_index=*/true).tokens;
}

int run_one_vs_two(const TransformerSpec& spec, const Graph& g) {
  ensure_builtin_maps();
  require_cycle_union(g);
  if (spec.input_dim != g.n + 1)
    throw std::invalid_argument("run_one_vs_two: spec built for a different node count");
  const Matrix out = transformer_forward(spec, one_vs_two_input(g));
  if (out.rows() != 1 || out.cols() != g.n) throw std::logic_error("run_one_vs_two: bad output shape");
  const long long verdict = round_checked(out(0, 0), "one_vs_two verdict", nullptr);
  for (int i = 1; i < g.n; ++i)
    if (round_checked(out(0, i), "one_vs_two verdict", nullptr) != verdict)
      throw std::logic_error("run_one_vs_two: tokens disagree on the verdict");
  if (verdict != 0 && verdict != 1) throw std::logic_error("run_one_vs_two: verdict out of range");
  return static_cast<int>(verdict);
}

// ---------------------------------------------------------------------------
// adjacency powers

TransformerSpec build_power_transformer(int n, int L, double eps, NetMode mode) {
  ensure_builtin_maps();
  if (n < 1) throw std::invalid_argument("power: need at least one node");
  if (L < 1) throw std::invalid_argument("power: exponent must be positive");
  if (!(eps > 0.0) || eps >= 1.0) throw std::invalid_argument("power: eps must lie in (0, 1)");
  double magnitude = 1.0;
  for (int i = 0; i < L; ++i) {
    magnitude *= n;
    if (magnitude > static_cast<double>(1LL << 52))
      throw std::invalid_argument("power: entries of A^L exceed the exact integer range");
  }
  const double c = std::log(2.0 * n) + L * std::log(static_cast<double>(n)) - std::log(eps);
  if (c > kLogitCap) throw std::invalid_argument("power: temperature exceeds the logit cap");

  TransformerSpec spec;
  spec.input_dim = 3 * n;
  for (int ell = 0; ell < L; ++ell) {
    Layer layer;
    AttentionHead h;
    h.K = Matrix::Zero(n, 3 * n);
    h.Q = Matrix::Zero(n, 3 * n);
    h.V = Matrix::Zero(3 * n, 3 * n);
    for (int i = 0; i < n; ++i) {
      h.K(i, n + i) = 1.0;      // keys expose which node they are
      h.Q(i, i) = 1.0;          // queries expose their adjacency row
      h.V(n + i, n + i) = 1.0;  // keep the indicator and workspace blocks
      h.V(2 * n + i, 2 * n + i) = 1.0;
    }
    h.temperature = c;
    layer.heads = {h};
    layer.residual = false;
    layer.mlp = ExactMapUse{
        "power-step",
        json{{"n", n}, {"temperature", c}, {"memorizer", mode == NetMode::explicit_net}},
        3 * n};
    spec.layers.push_back(std::move(layer));
  }
  return spec;
}

Matrix power_input(const Graph& g) {
  const int n = g.n;
  const auto adj = adjacency_matrix(g);
  Matrix x = Matrix::Zero(3 * n, n);
  for (int j = 0; j < n; ++j) {
    for (int v = 0; v < n; ++v) x(v, j) = adj[j][v];  // block 1: out-row of node j
    x(n + j, j) = 1.0;                                // block 2: one-hot identity
    x(2 * n + j, j) = 1.0;                            // block 3: workspace, starts at A^0 = I
  }
  return x;
}

PowerRun run_power(const TransformerSpec& spec, const Graph& g) {
  ensure_builtin_maps();
  const int n = g.n;
  if (spec.input_dim != 3 * n)
    throw std::invalid_argument("run_power: spec built for a different node count");
  for (int deg : out_degrees(g))
    if (deg == 0)
      throw std::invalid_argument("run_power: zero out-degree node, attention has no mass to average");

  PowerRun run;
  Matrix x = power_input(g);
  for (const Layer& layer : spec.layers) {
    x = attention_forward(layer.heads, x, layer.residual);
    const auto* use = std::get_if<ExactMapUse>(&layer.mlp);
    if (!use || use->id != "power-step") throw std::logic_error("run_power: unexpected layer shape");
    Matrix next(use->out_dim, x.cols());
    for (int i = 0; i < x.cols(); ++i)
      next.col(i) = power_step_core(x.col(i), i, use->params, &run.max_pre_round_residual);
    x = std::move(next);
  }
  run.result = IntMatrix(n);
  for (int i = 0; i < n; ++i)
    for (int t = 0; t < n; ++t)
      run.result.at(i, t) = round_checked(x(2 * n + t, i), "power output", nullptr);
  return run;
}

// ---------------------------------------------------------------------------
// sparse mutual-edge detection

double sparse_two_cycle_default_temperature(int n) { return 4.0 * std::log(n / 1e-6); }

TransformerSpec build_sparse_two_cycle(int n, int d, double alpha, double temperature,
                                       uint64_t seed) {
  ensure_builtin_maps();
  if (n < 2) throw std::invalid_argument("sparse detection needs at least 2 nodes");
  const RipSystem& sys = memoized_rip(n, d, alpha, seed);  // validates n, d, alpha
  const int pdim = sys.rip_dim;
  const int m = 2 * pdim + 2;
  const double c = temperature > 0.0 ? temperature : sparse_two_cycle_default_temperature(n);
  if (2.0 * c > kLogitCap)
    throw std::invalid_argument("sparse detection: temperature exceeds the logit cap");

  TransformerSpec spec;
  spec.input_dim = n;

  Layer embed;  // no attention, just the per-token embedding map
  embed.residual = true;
  embed.mlp = ExactMapUse{
      "sparse-sign-embed",
      json{{"n", n}, {"d", d}, {"alpha", alpha}, {"seed", seed}},
      m};
  spec.layers.push_back(std::move(embed));

  Layer detect;
  AttentionHead h;
  h.K = Matrix::Zero(m, m);
  h.Q = Matrix::Zero(m, m);
  for (int r = 0; r < pdim; ++r) {
    h.K(r, pdim + r) = 1.0;  // slot A of keys carries y_j
    h.K(pdim + r, r) = 1.0;  // slot B of keys carries phi_j
    h.Q(r, r) = 1.0;         // slot A of queries carries phi_i
    h.Q(pdim + r, pdim + r) = 1.0;  // slot B of queries carries y_i
  }
  h.K(2 * pdim, 2 * pdim + 1) = 1.0;  // dummy key pins the fallback logit
  h.Q(2 * pdim, 2 * pdim) = 7.0 / 4.0;
  h.temperature = c;
  h.V = Matrix::Zero(1, m);
  h.V(0, 2 * pdim) = 1.0;  // output = attention mass arriving from real tokens
  detect.heads = {h};
  detect.residual = false;
  detect.mlp = ExactMapUse{"coordinate-threshold", json{{"coordinate", 0}, {"threshold", 0.5}}, 1};
  spec.layers.push_back(std::move(detect));
  return spec;
}

Matrix sparse_two_cycle_input(const Graph& g) {
  if (!g.directed)
    throw std::invalid_argument("sparse detection expects a directed graph");
  const Matrix rows = tokenize_adjacency(g, g.n, /*with_index=*/false).tokens;
  Matrix x = Matrix::Zero(g.n, g.n + 1);  // one extra all-zero column for the dummy token
  x.leftCols(g.n) = rows;
  return x;
}

SparseRun run_sparse_two_cycle(const TransformerSpec& spec, const Graph& g) {
  ensure_builtin_maps();
  const int n = g.n;
  if (spec.input_dim != n || spec.layers.size() != 2)
    throw std::invalid_argument("run_sparse_two_cycle: spec does not match the graph");
  Matrix x = sparse_two_cycle_input(g);
  const Layer& embed = spec.layers[0];
  x = attention_forward(embed.heads, x, embed.residual);
  x = mlp_forward(embed.mlp, x);
  const Layer& detect = spec.layers[1];
  x = attention_forward(detect.heads, x, detect.residual);
  SparseRun run;
  run.real_mass = x.row(0).head(n).transpose();
  x = mlp_forward(detect.mlp, x);
  run.indicator.resize(n);
  for (int i = 0; i < n; ++i)
    run.indicator[i] = static_cast<int>(round_checked(x(0, i), "sparse verdict", nullptr));
  return run;
}

SparseVerify verify_sparse_two_cycle(const Graph& g, int d, double alpha, double temperature,
                                     uint64_t seed, int max_attempts) {
  ensure_builtin_maps();
  if (max_attempts < 1) throw std::invalid_argument("max_attempts must be positive");
  if (!g.directed)
    throw std::invalid_argument("verify_sparse_two_cycle: expects a directed graph");
  const auto neighborhoods = adjacency_lists(g);
  for (const auto& nb : neighborhoods)
    if (static_cast<int>(nb.size()) > d)
      throw std::invalid_argument("verify_sparse_two_cycle: out-degree exceeds the bound");
  SparseVerify result;
  result.expected = oracle_two_cycle_indicator(g);
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    const uint64_t attempt_seed = derive_seed(seed, static_cast<uint64_t>(attempt));
    const RipSystem& sys = memoized_rip(g.n, d, alpha, attempt_seed);
    bool margins_ok = true;
    for (const auto& nb : neighborhoods) {
      if (nb.empty()) continue;
      if (!compute_phi(sys, nb).feasible) {
        margins_ok = false;
        break;
      }
    }
    if (!margins_ok) continue;
    const TransformerSpec spec = build_sparse_two_cycle(g.n, d, alpha, temperature, attempt_seed);
    const SparseRun run = run_sparse_two_cycle(spec, g);
    result.attempts = attempt + 1;
    result.used_seed = attempt_seed;
    result.margins_ok = true;
    result.predicted = run.indicator;
    result.pass = result.predicted == result.expected;
    return result;
  }
  result.attempts = max_attempts;
  result.margins_ok = false;
  result.pass = false;
  return result;
}

// ---------------------------------------------------------------------------
// induced-pattern counting

PartitionPlan PartitionPlan::make(int n, int k) {
  if (k < 2 || k > 5) throw std::invalid_argument("pattern size must be between 2 and 5");
  if (n < k) throw std::invalid_argument("host graph smaller than the pattern");
  PartitionPlan plan;
  plan.n = n;
  plan.k = k;
  // More sets shrink the slotted block (set_size * n) at two extra lanes
  // each, but the C(q, k) combination tokens must fit among the n node
  // tokens and the base-2 digit packing must stay exactly representable
  // through an attention average (n * 2^q within the guard). Scan the
  // feasible range and keep the narrowest token; q = k is always feasible.
  int q = 0;
  long long best_width = -1;
  for (int cand = k;; ++cand) {
    long long combos = 1;
    for (int i = 0; i < k; ++i) combos = combos * (cand - i) / (i + 1);
    if (combos > n) break;
    if (cand >= 62 || (1LL << cand) > kPackLimit / n) break;
    const long long set_size = (n + cand - 1) / cand;
    const long long width = set_size * n + 2 * cand;
    if (best_width < 0 || width < best_width) {
      best_width = width;
      q = cand;
    }
  }
  plan.set_count = q;
  plan.set_start.resize(q);
  plan.set_len.resize(q);
  plan.node_set.assign(n, 0);
  plan.set_size = 0;
  for (int t = 0; t < q; ++t) {
    const int start = static_cast<int>(static_cast<long long>(t) * n / q);
    const int stop = static_cast<int>(static_cast<long long>(t + 1) * n / q);
    plan.set_start[t] = start;
    plan.set_len[t] = stop - start;
    plan.set_size = std::max(plan.set_size, stop - start);
    for (int v = start; v < stop; ++v) plan.node_set[v] = t;
  }
  // enumerate k-subsets of the q sets in lexicographic order
  std::vector<int> combo(k);
  for (int i = 0; i < k; ++i) combo[i] = i;
  while (true) {
    plan.combos.push_back(combo);
    int i = k - 1;
    while (i >= 0 && combo[i] == q - k + i) --i;
    if (i < 0) break;
    ++combo[i];
    for (int j = i + 1; j < k; ++j) combo[j] = combo[j - 1] + 1;
  }
  return plan;
}

int PartitionPlan::padded_combo_index(const std::vector<int>& support) const {
  if (static_cast<int>(support.size()) > k)
    throw std::invalid_argument("support larger than the pattern");
  std::vector<int> padded = support;
  for (int t = 0; t < set_count && static_cast<int>(padded.size()) < k; ++t)
    if (std::find(support.begin(), support.end(), t) == support.end()) padded.push_back(t);
  std::sort(padded.begin(), padded.end());
  const auto it = std::lower_bound(combos.begin(), combos.end(), padded);
  if (it == combos.end() || *it != padded)
    throw std::logic_error("padded support missing from the combination table");
  return static_cast<int>(it - combos.begin());
}

TransformerSpec build_subgraph_counter(int n, int k, const Graph& pattern, NetMode mode) {
  ensure_builtin_maps();
  if (pattern.directed || pattern.loops)
    throw std::invalid_argument("pattern must be a simple undirected graph");
  if (pattern.n != k) throw std::invalid_argument("pattern node count must equal k");
  const PartitionPlan plan = PartitionPlan::make(n, k);
  const int q = plan.set_count;
  const int big_r = plan.set_size * n;
  const int m = plan.token_dim();
  // One temperature covers both gather stages: the exp(-c) leak times the
  // largest packed value (below 2^q) stays far below the rounding guard.
  const double c = std::log(4.0 * n) + q * std::log(2.0);
  if (c > kLogitCap) throw std::invalid_argument("subgraph counter: temperature exceeds the cap");

  TransformerSpec spec;
  spec.input_dim = n;

  Layer slot;
  AttentionHead idle;
  idle.K = Matrix::Zero(1, n);
  idle.Q = Matrix::Zero(1, n);
  idle.V = Matrix::Zero(n, n);
  slot.heads = {idle};
  slot.residual = true;
  if (mode == NetMode::exact_map)
    slot.mlp = ExactMapUse{"node-slot", json{{"n", n}, {"k", k}}, m};
  else
    slot.mlp = build_slot_net(plan);
  spec.layers.push_back(std::move(slot));

  Layer gather;  // set aggregators pull their members' slotted rows
  AttentionHead g1;
  g1.K = Matrix::Zero(q, m);
  g1.Q = Matrix::Zero(q, m);
  g1.V = Matrix::Zero(m, m);
  for (int r = 0; r < q; ++r) {
    g1.K(r, big_r + r) = 1.0;      // keys: set membership
    g1.Q(r, big_r + q + r) = 1.0;  // queries: aggregator flag
  }
  for (int r = 0; r < big_r; ++r) g1.V(r, r) = 1.0;
  g1.temperature = c;
  gather.heads = {g1};
  gather.residual = false;
  gather.mlp = ExactMapUse{"set-digit-pack", json{{"n", n}, {"k", k}, {"temperature", c}}, m};
  spec.layers.push_back(std::move(gather));

  Layer count;  // combination tokens pull the k scaled incidence blocks
  AttentionHead g2;
  g2.K = Matrix::Zero(q, m);
  g2.Q = Matrix::Zero(q, m);
  g2.V = Matrix::Zero(big_r, m);
  for (int r = 0; r < q; ++r) {
    g2.K(r, big_r + q + r) = 1.0;  // keys: aggregator flag
    g2.Q(r, big_r + r) = 1.0;      // queries: combination mask
  }
  for (int r = 0; r < big_r; ++r) g2.V(r, r) = static_cast<double>(k);
  g2.temperature = c;
  count.heads = {g2};
  count.residual = false;
  count.mlp = ExactMapUse{"digit-decode-count",
                          json{{"n", n},
                               {"k", k},
                               {"temperature", c},
                               {"pattern", graph_to_json(pattern)}},
                          1};
  spec.layers.push_back(std::move(count));
  return spec;
}

Matrix subgraph_input(const Graph& g) {
  return tokenize_adjacency(g, g.n, /*with_index=*/false).tokens;
}

std::vector<long long> run_subgraph_per_combo(const TransformerSpec& spec, const Graph& g) {
  ensure_builtin_maps();
  if (spec.input_dim != g.n)
    throw std::invalid_argument("run_subgraph: spec built for a different node count");
  const auto* readout = std::get_if<ExactMapUse>(&spec.layers.back().mlp);
  if (!readout || readout->id != "digit-decode-count")
    throw std::logic_error("run_subgraph: unexpected readout");
  const PartitionPlan plan =
      PartitionPlan::make(g.n, readout->params.at("k").get<int>());
  const Matrix out = transformer_forward(spec, subgraph_input(g));
  if (out.rows() != 1 || out.cols() != g.n) throw std::logic_error("run_subgraph: bad output shape");
  std::vector<long long> counts(plan.combo_count());
  for (int i = 0; i < g.n; ++i) {
    const long long v = round_checked(out(0, i), "subgraph count", nullptr);
    if (i < plan.combo_count())
      counts[i] = v;
    else if (v != 0)
      throw std::logic_error("run_subgraph: non-combination token produced a count");
  }
  return counts;
}

long long run_subgraph_count(const TransformerSpec& spec, const Graph& g) {
  long long total = 0;
  for (long long v : run_subgraph_per_combo(spec, g)) total += v;
  return total;
}

// ---------------------------------------------------------------------------
// certification

json report_row_to_json(const ConstructionReport& r) {
  return json{{"construction", r.construction}, {"n", r.n},       {"params", r.params},
              {"pass", r.pass},                 {"max_abs_error", r.max_abs_error},
              {"millis", r.millis}};
}

ConstructionReport report_row_from_json(const json& j) {
  ConstructionReport r;
  r.construction = j.at("construction").get<std::string>();
  r.n = j.at("n").get<int>();
  r.params = j.at("params");
  r.pass = j.at("pass").get<bool>();
  r.max_abs_error = j.at("max_abs_error").get<double>();
  r.millis = j.at("millis").get<double>();
  return r;
}

ConstructionReport verify_construction(const std::string& name, const Graph& g,
                                       const json& params) {
  ensure_builtin_maps();
  ConstructionReport report;
  report.construction = name;
  report.n = g.n;
  report.params = params;

  if (name == "one_vs_two") {
    require_cycle_union(g);
    const TransformerSpec spec = build_one_vs_two(g.n, mode_from_params(params));
    const int predicted = run_one_vs_two(spec, g);
    const int expected = oracle_connected(g) ? 1 : 0;
    report.pass = predicted == expected;
    report.max_abs_error = std::abs(predicted - expected);
  } else if (name == "power") {
    const int L = params.value("L", 2);
    const double eps = params.value("eps", 1e-6);
    const TransformerSpec spec = build_power_transformer(g.n, L, eps, mode_from_params(params));
    const PowerRun run = run_power(spec, g);
    const IntMatrix expected = oracle_matrix_power(g, L);
    long long worst = 0;
    for (int i = 0; i < g.n; ++i)
      for (int j = 0; j < g.n; ++j)
        worst = std::max(worst, std::llabs(run.result.at(i, j) - expected.at(i, j)));
    const bool exact = worst == 0;
    report.pass = exact && run.max_pre_round_residual < eps;
    report.max_abs_error = exact ? run.max_pre_round_residual : static_cast<double>(worst);
  } else if (name == "sparse_two_cycle") {
    const int d = params.value("d", 8);
    const double alpha = params.value("alpha", 4.0);
    const double temperature = params.value("temperature", 0.0);
    const uint64_t seed = params.value("seed", static_cast<uint64_t>(0));
    const int max_attempts = params.value("max_attempts", 5);
    const SparseVerify v = verify_sparse_two_cycle(g, d, alpha, temperature, seed, max_attempts);
    report.pass = v.pass;
    report.params["attempts"] = v.attempts;
    report.params["margins_ok"] = v.margins_ok;
    if (v.margins_ok) {
      report.params["used_seed"] = v.used_seed;
      long long worst = 0;
      for (size_t i = 0; i < v.expected.size(); ++i)
        worst = std::max(worst, static_cast<long long>(std::abs(v.predicted[i] - v.expected[i])));
      report.max_abs_error = static_cast<double>(worst);
    } else {
      report.max_abs_error = 1.0;
    }
  } else if (name == "subgraph") {
    const Graph pattern = pattern_from_param(params.at("pattern"));
    const TransformerSpec spec =
        build_subgraph_counter(g.n, pattern.n, pattern, mode_from_params(params));
    const long long got = run_subgraph_count(spec, g);
    const long long want = oracle_subgraph_count(g, pattern);
    report.pass = got == want;
    report.max_abs_error = static_cast<double>(std::llabs(got - want));
  } else if (name == "eulerian") {
    require_cycle_union(g);
    std::optional<int> turnaround;
    if (params.contains("turnaround") && !params.at("turnaround").is_null())
      turnaround = params.at("turnaround").get<int>();
    const EulerianInstance inst = reduce_cycles_to_eulerian(g, turnaround);
    const bool predicted = verify_eulerian(inst);
    const bool expected = oracle_connected(g);
    report.pass = predicted == expected;
    report.max_abs_error = predicted == expected ? 0.0 : 1.0;
  } else {
    throw std::invalid_argument("unknown construction: " + name);
  }
  return report;
}

}  // namespace grtl
