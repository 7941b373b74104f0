#include "grtl/rip.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "grtl/rng.hpp"

namespace grtl {

RipSystem sample_rip_vectors(int n, int d, double alpha, uint64_t seed) {
  if (n < 2) throw std::invalid_argument("sample_rip_vectors: need n >= 2");
  if (d < 1) throw std::invalid_argument("sample_rip_vectors: need d >= 1");
  if (alpha <= 0.0) throw std::invalid_argument("sample_rip_vectors: need alpha > 0");
  RipSystem sys;
  sys.n = n;
  sys.d = d;
  sys.alpha = alpha;
  sys.seed = seed;
  sys.rip_dim = static_cast<int>(std::ceil(alpha * d * std::log(static_cast<double>(n))));
  Rng rng(seed);
  const double scale = 1.0 / std::sqrt(static_cast<double>(sys.rip_dim));
  sys.y.resize(sys.rip_dim, n);
  for (int j = 0; j < n; ++j)
    for (int r = 0; r < sys.rip_dim; ++r) sys.y(r, j) = rng.next_bool() ? scale : -scale;
  sys.gram = sys.y.transpose() * sys.y;
  return sys;
}

PhiResult compute_phi(const RipSystem& sys, const std::vector<int>& support) {
  PhiResult res;
  res.phi = Vector::Zero(sys.rip_dim);
  res.margins = Vector::Zero(sys.n);
  if (support.empty()) {
    res.feasible = true;
    return res;
  }
  const int s = static_cast<int>(support.size());
  if (s > sys.d) throw std::invalid_argument("compute_phi: support larger than d");
  std::vector<int> sorted = support;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw std::invalid_argument("compute_phi: duplicate support index");
  if (sorted.front() < 0 || sorted.back() >= sys.n)
    throw std::invalid_argument("compute_phi: support index out of range");

  Matrix ys(sys.rip_dim, s);
  Matrix gram_s_cols(sys.n, s);  // gram(:, S)
  for (int a = 0; a < s; ++a) {
    ys.col(a) = sys.y.col(sorted[a]);
    gram_s_cols.col(a) = sys.gram.col(sorted[a]);
  }
  Matrix gs(s, s);  // gram(S, S)
  for (int a = 0; a < s; ++a)
    for (int b = 0; b < s; ++b) gs(a, b) = sys.gram(sorted[a], sorted[b]);
  Eigen::LDLT<Matrix> solver(gs);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("compute_phi: support gram not factorizable");

  // Least-norm seed: phi = Y_S gs^{-1} 1, tracked in margin space.
  Vector coeff = solver.solve(Vector::Ones(s));
  Vector phi = ys * coeff;
  Vector margins = gram_s_cols * coeff;

  const double target = 0.5 - 1e-3;
  std::vector<char> on_support(sys.n, 0);
  for (int idx : sorted) on_support[idx] = 1;

  const int max_sweeps = 3000;
  int sweep = 0;
  for (; sweep < max_sweeps; ++sweep) {
    // Clip each violated off-support margin by stepping along its unit vector.
    int violations = 0;
    for (int j = 0; j < sys.n; ++j) {
      if (on_support[j]) continue;
      const double m = margins(j);
      if (m > target || m < -target) {
        ++violations;
        const double step = m - (m > 0 ? target : -target);
        phi -= step * sys.y.col(j);
        margins -= step * sys.gram.col(j);
      }
    }
    // Restore the on-support equalities exactly.
    Vector residual(s);
    for (int a = 0; a < s; ++a) residual(a) = margins(sorted[a]) - 1.0;
    if (residual.lpNorm<Eigen::Infinity>() > 1e-14) {
      Vector u = solver.solve(residual);
      phi -= ys * u;
      margins -= gram_s_cols * u;
    }
    if (violations == 0) {
      Vector check(s);
      for (int a = 0; a < s; ++a) check(a) = margins(sorted[a]) - 1.0;
      if (check.lpNorm<Eigen::Infinity>() < 1e-9) break;
    }
  }

  res.phi = phi;
  res.margins = margins;
  res.sweeps = sweep;
  double max_off = 0.0;
  for (int j = 0; j < sys.n; ++j)
    if (!on_support[j]) max_off = std::max(max_off, std::abs(margins(j)));
  double max_err = 0.0;
  for (int idx : sorted) max_err = std::max(max_err, std::abs(margins(idx) - 1.0));
  res.max_off_margin = max_off;
  res.max_support_error = max_err;
  res.feasible = max_off <= 0.5 && max_err <= 1e-9;
  return res;
}

}  // namespace grtl
