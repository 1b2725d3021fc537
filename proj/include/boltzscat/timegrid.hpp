#pragma once

#include <Eigen/Dense>

#include "boltzscat/maxwellian.hpp"

namespace bz {

// Time nodes for trajectories over [-T, T], T possibly infinite. An odd count
// puts t = 0 on the middle node.
//
// Integration runs in sigma. For p = (D + beta)/2 >= 1, sigma = tau =
// atan(t sqrt(a/c)) with Chebyshev-Lobatto nodes. For p < 1 the weight
// theta^p dt/dtau blows up at tau = +-pi/2, so sigma is the clock
// s(t) = int_0^t theta^p, whose weight is 1; each half of the window gets its
// own scaling of the Lobatto points.
struct TimeGrid {
  Vec tau;
  Vec t;
  Vec sigma;
  Vec kappa;  // theta^p dt/dsigma at the nodes
  // (C g)_j = integral from sigma_0 to sigma_j of the polynomial through (sigma_k, g_k).
  Eigen::MatrixXd C;

  static TimeGrid make(const GlobalMaxwellian& M, double T, int n, double p = 1.0);
  int size() const { return static_cast<int>(tau.size()); }
  int middle() const { return size() / 2; }
};

}  // namespace bz
