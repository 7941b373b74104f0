#ifndef GRTL_RIP_HPP
#define GRTL_RIP_HPP

#include <cstdint>
#include <vector>

#include "grtl/nn.hpp"

// Random sign embeddings for sparse supports. sample_rip_vectors draws n
// columns y_j in {-1,+1}^p / sqrt(p) with p = ceil(alpha * d * ln n);
// compute_phi finds a dual vector phi for a support S (|S| <= d) with
// <phi, y_j> = 1 on S while every off-support margin stays in [-1/2, 1/2].
// The least-norm solution phi = Y_S (Y_S^T Y_S)^{-1} 1 is only the seed: its
// off-support margins hug +-1/2 too loosely at alpha = 4, so a deterministic
// cyclic-projection refinement (clip violated margins, re-project onto the
// on-support affine constraint) runs until the margins fit.

namespace grtl {

struct RipSystem {
  int n = 0;
  int d = 0;
  double alpha = 0.0;
  int rip_dim = 0;
  uint64_t seed = 0;
  Matrix y;     // rip_dim x n
  Matrix gram;  // y^T y, cached for margin-space iteration
};

RipSystem sample_rip_vectors(int n, int d, double alpha, uint64_t seed);

struct PhiResult {
  Vector phi;
  Vector margins;            // <phi, y_j> for every j
  bool feasible = false;     // support margins ~1 and off-support within 1/2
  double max_off_margin = 0.0;
  double max_support_error = 0.0;
  int sweeps = 0;
};

PhiResult compute_phi(const RipSystem& sys, const std::vector<int>& support);

}  // namespace grtl

#endif
