#pragma once

#include <Eigen/Dense>
#include <array>
#include <string>

#include "boltzscat/common.hpp"

namespace bz {

// (m, x0, v0, a, b, c, B) of a global Maxwellian
//   M(v,x,t) = m sqrt(det Q) / (2 pi)^D exp(-q(v - v0, x - x0 - t v0, t)),
//   q(v,x,t) = (c|v|^2 + a|y|^2 + 2b y.v)/2 + v.B y,  y = x - t v,
//   Q = (ac - b^2) I + B^2.
struct Params {
  int D = 2;
  double m = 1.0;
  double a = 1.0;
  double b = 0.0;
  double c = 1.0;
  Eigen::MatrixXd B;
  Eigen::VectorXd x0;
  Eigen::VectorXd v0;

  static Params unit(int D, double m = 1.0);
  Eigen::MatrixXd Q() const;
};

struct ParamCheck {
  bool ok = false;
  std::string reason;
  double min_eig_Q = 0.0;
  double ac_minus_b2 = 0.0;
  // Q passed but ac - b^2 <= 0. B^2 is negative semidefinite, so this should never be set.
  bool q_ok_but_ac_b2_fails = false;
};

ParamCheck validate_params(const Params& p);

struct HydroFields {
  double rho = 0.0;
  Eigen::VectorXd u;
  double theta = 0.0;
};

// Normalized coordinates at one time: for z = (v - v0, x - x0) in comoving
// coordinates, zeta = (xi, eta) = L z, where eta whitens the lab position
// y = x + t v and xi whitens the local velocity around u(y, t). Then
// q(v, x, 0) = |zeta|^2 / 2 for every t. Built from tau = atan(t sqrt(a/c)),
// so tau = +-pi/2 (t = +-infinity) is representable.
struct Whitening {
  int D = 0;
  double tau = 0.0;
  double t = 0.0;
  double sqrt_theta = 0.0;
  Eigen::MatrixXd L;     // 2D x 2D, z -> zeta
  Eigen::MatrixXd Linv;  // zeta -> z
};

class GlobalMaxwellian {
 public:
  explicit GlobalMaxwellian(Params p);

  const Params& params() const { return p_; }
  int dim() const { return p_.D; }
  double mass() const { return p_.m; }
  const Eigen::MatrixXd& Q() const { return Q_; }
  const Eigen::MatrixXd& Q_half() const { return Q_half_; }
  const Eigen::MatrixXd& Q_mhalf() const { return Q_mhalf_; }
  double sqrt_det_Q() const { return sqrt_det_Q_; }
  // m sqrt(det Q) / (2 pi)^D, the peak value.
  double peak() const { return peak_; }

  double theta(double t) const;
  double q(const double* v, const double* x, double t) const;
  double eval(const double* v, const double* x, double t) const;
  double log_eval(const double* v, const double* x, double t) const;
  HydroFields hydro(const double* x, double t) const;

  // Closed-form H = m (ln(m sqrt(det Q) / (2 pi)^D) - D).
  double entropy() const;

  // Conserved moment vector (time independent); see invariant_count().
  Vec invariants() const;

  // Joint covariance of (v, x) at t = 0, blocks [vv vx; xv xx].
  Eigen::MatrixXd covariance0() const;

  Whitening whitening_tau(double tau) const;
  // sqrt(theta)(c - b t), sqrt(theta) t, sqrt(theta)(a t - b), sqrt(theta) at tau:
  // xi = k0 v + k1 B v - k2 x + k3 B x,  eta = Q^{1/2}(k1 v + k3 x).
  std::array<double, 4> whitening_coefficients(double tau) const;
  Whitening whitening(double t) const;
  double tau_of_t(double t) const;
  double t_of_tau(double tau) const;

  // theta(t)^p dt/dtau at tau; finite at tau = +-pi/2 when p >= 1.
  double theta_power_dt_dtau(double tau, double p) const;

 private:
  Params p_;
  Eigen::MatrixXd Q_;
  Eigen::MatrixXd Q_half_;
  Eigen::MatrixXd Q_mhalf_;
  double sqrt_det_Q_ = 0.0;
  double peak_ = 0.0;
};

// Length of the conserved moment vector: mass, momentum (D), energy,
// x - t v (D), |x - t v|^2 / 2, (x - t v).v, and the D(D-1)/2 entries of x ^ v.
int invariant_count(int D);

// Accumulates weight * (invariant densities at (v, x, t)) into out.
void add_invariant_densities(int D, const double* v, const double* x, double t, double weight,
                             double* out);

// Labels for reports, e.g. "mass", "momentum_0", "wedge_01".
std::vector<std::string> invariant_labels(int D);

}  // namespace bz
