#include "boltzscat/maxwellian.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace bz {

Params Params::unit(int D, double m) {
  Params p;
  p.D = D;
  p.m = m;
  p.B = Eigen::MatrixXd::Zero(D, D);
  p.x0 = Eigen::VectorXd::Zero(D);
  p.v0 = Eigen::VectorXd::Zero(D);
  return p;
}

Eigen::MatrixXd Params::Q() const {
  return (a * c - b * b) * Eigen::MatrixXd::Identity(D, D) + B * B;
}

ParamCheck validate_params(const Params& p) {
  ParamCheck r;
  auto reject = [&](const std::string& why) {
    r.ok = false;
    r.reason = why;
    return r;
  };
  if (p.D != 2 && p.D != 3) return reject("dimension D must be 2 or 3");
  if (p.B.rows() != p.D || p.B.cols() != p.D) return reject("B must be D x D");
  if (p.x0.size() != p.D || p.v0.size() != p.D) return reject("x0 and v0 must have length D");
  bool finite = std::isfinite(p.m) && std::isfinite(p.a) && std::isfinite(p.b) && std::isfinite(p.c) &&
                p.B.allFinite() && p.x0.allFinite() && p.v0.allFinite();
  if (!finite) return reject("non-finite entry");
  r.ac_minus_b2 = p.a * p.c - p.b * p.b;
  const Eigen::MatrixXd Q = p.Q();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Q, Eigen::EigenvaluesOnly);
  r.min_eig_Q = es.eigenvalues().minCoeff();
  if (!(p.m > 0.0)) return reject("m must be positive");
  if (!(p.a > 0.0)) return reject("a must be positive");
  if (!(p.c > 0.0)) return reject("c must be positive");
  for (int i = 0; i < p.D; ++i)
    for (int j = 0; j < p.D; ++j)
      if (p.B(i, j) + p.B(j, i) != 0.0) return reject("B is not skew-symmetric");
  if (!(r.min_eig_Q > 1e-12)) {
    std::ostringstream os;
    os << "Q is not positive definite (min eigenvalue " << r.min_eig_Q << ")";
    return reject(os.str());
  }
  r.q_ok_but_ac_b2_fails = !(r.ac_minus_b2 > 0.0);
  if (r.q_ok_but_ac_b2_fails) return reject("Q is positive definite but ac - b^2 <= 0");
  r.ok = true;
  return r;
}

GlobalMaxwellian::GlobalMaxwellian(Params p) : p_(std::move(p)) {
  const ParamCheck chk = validate_params(p_);
  require(chk.ok, ErrorKind::Domain, "invalid global Maxwellian: " + chk.reason);
  Q_ = p_.Q();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Q_);
  const Eigen::VectorXd ev = es.eigenvalues();
  Q_half_ = es.eigenvectors() * ev.cwiseSqrt().asDiagonal() * es.eigenvectors().transpose();
  Q_mhalf_ = es.eigenvectors() * ev.cwiseSqrt().cwiseInverse().asDiagonal() * es.eigenvectors().transpose();
  sqrt_det_Q_ = std::sqrt(ev.prod());
  peak_ = p_.m * sqrt_det_Q_ / std::pow(2.0 * std::numbers::pi, p_.D);
}

double GlobalMaxwellian::theta(double t) const { return 1.0 / (p_.a * t * t - 2.0 * p_.b * t + p_.c); }

double GlobalMaxwellian::q(const double* v, const double* x, double t) const {
  const int D = p_.D;
  double vv = 0.0, yy = 0.0, yv = 0.0, vBy = 0.0;
  double vb[3], yb[3];
  for (int i = 0; i < D; ++i) {
    vb[i] = v[i] - p_.v0[i];
    yb[i] = x[i] - p_.x0[i] - t * v[i];
  }
  for (int i = 0; i < D; ++i) {
    vv += vb[i] * vb[i];
    yy += yb[i] * yb[i];
    yv += yb[i] * vb[i];
    double By = 0.0;
    for (int j = 0; j < D; ++j) By += p_.B(i, j) * yb[j];
    vBy += vb[i] * By;
  }
  return 0.5 * (p_.c * vv + p_.a * yy + 2.0 * p_.b * yv) + vBy;
}

double GlobalMaxwellian::eval(const double* v, const double* x, double t) const {
  return peak_ * std::exp(-q(v, x, t));
}

double GlobalMaxwellian::log_eval(const double* v, const double* x, double t) const {
  return std::log(peak_) - q(v, x, t);
}

HydroFields GlobalMaxwellian::hydro(const double* x, double t) const {
  const int D = p_.D;
  HydroFields h;
  h.theta = theta(t);
  Eigen::VectorXd xb(D);
  for (int i = 0; i < D; ++i) xb[i] = x[i] - p_.x0[i] - t * p_.v0[i];
  const double quad = xb.dot(Q_ * xb);
  h.rho = p_.m * std::pow(h.theta, 0.5 * D) * sqrt_det_Q_ / std::pow(2.0 * std::numbers::pi, 0.5 * D) *
          std::exp(-0.5 * h.theta * quad);
  h.u = p_.v0 + h.theta * ((p_.a * t - p_.b) * xb - p_.B * xb);
  return h;
}

double GlobalMaxwellian::entropy() const {
  return p_.m * (std::log(peak_) - p_.D);
}

Eigen::MatrixXd GlobalMaxwellian::covariance0() const {
  const int D = p_.D;
  Eigen::MatrixXd P(2 * D, 2 * D);
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(D, D);
  P.topLeftCorner(D, D) = p_.c * I;
  P.topRightCorner(D, D) = p_.b * I + p_.B;
  P.bottomLeftCorner(D, D) = p_.b * I - p_.B;
  P.bottomRightCorner(D, D) = p_.a * I;
  return P.inverse();
}

Vec GlobalMaxwellian::invariants() const {
  const int D = p_.D;
  const Eigen::MatrixXd S = covariance0();
  const Eigen::MatrixXd Svv = S.topLeftCorner(D, D), Sxx = S.bottomRightCorner(D, D);
  const Eigen::MatrixXd Sxv = S.bottomLeftCorner(D, D);  // Cov(x_i, v_j)
  const Eigen::VectorXd& x0 = p_.x0;
  const Eigen::VectorXd& v0 = p_.v0;
  const double m = p_.m;
  Vec out(invariant_count(D), 0.0);
  int k = 0;
  out[k++] = m;
  for (int i = 0; i < D; ++i) out[k++] = m * v0[i];
  out[k++] = 0.5 * m * (v0.squaredNorm() + Svv.trace());
  for (int i = 0; i < D; ++i) out[k++] = m * x0[i];
  out[k++] = 0.5 * m * (x0.squaredNorm() + Sxx.trace());
  out[k++] = m * (x0.dot(v0) + Sxv.trace());
  for (int i = 0; i < D; ++i)
    for (int j = i + 1; j < D; ++j)
      out[k++] = m * (x0[i] * v0[j] - v0[i] * x0[j] + Sxv(i, j) - Sxv(j, i));
  return out;
}

double GlobalMaxwellian::tau_of_t(double t) const {
  if (std::isinf(t)) return std::copysign(0.5 * std::numbers::pi, t);
  return std::atan(t * std::sqrt(p_.a / p_.c));
}

double GlobalMaxwellian::t_of_tau(double tau) const {
  if (std::abs(tau) >= 0.5 * std::numbers::pi)
    return std::copysign(std::numeric_limits<double>::infinity(), tau);
  return std::sqrt(p_.c / p_.a) * std::tan(tau);
}

double GlobalMaxwellian::theta_power_dt_dtau(double tau, double p) const {
  const double a = p_.a, b = p_.b, c = p_.c;
  const double g2 = c - b * std::sqrt(c / a) * std::sin(2.0 * tau);
  const double ct = std::abs(tau) >= 0.5 * std::numbers::pi ? 0.0 : std::cos(tau);
  return std::sqrt(c / a) * std::pow(ct, 2.0 * p - 2.0) / std::pow(g2, p);
}

std::array<double, 4> GlobalMaxwellian::whitening_coefficients(double tau) const {
  const double a = p_.a, b = p_.b, c = p_.c;
  const bool at_inf = std::abs(tau) >= 0.5 * std::numbers::pi;
  const double st = std::sin(tau), ct = at_inf ? 0.0 : std::cos(tau);
  const double g = std::sqrt(c - b * std::sqrt(c / a) * std::sin(2.0 * tau));
  return {(c * ct - b * std::sqrt(c / a) * st) / g,  // sqrt(theta)(c - b t)
          std::sqrt(c / a) * st / g,                 // sqrt(theta) t
          (std::sqrt(a * c) * st - b * ct) / g,      // sqrt(theta)(a t - b)
          ct / g};                                   // sqrt(theta)
}

Whitening GlobalMaxwellian::whitening_tau(double tau) const {
  const int D = p_.D;
  const auto [sth_cbt, sth_t, sth_atb, sth] = whitening_coefficients(tau);
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(D, D);
  const Eigen::MatrixXd& B = p_.B;
  Whitening w;
  w.D = D;
  w.tau = tau;
  w.t = t_of_tau(tau);
  w.sqrt_theta = sth;
  w.L.resize(2 * D, 2 * D);
  w.L.topLeftCorner(D, D) = sth_cbt * I + sth_t * B;
  w.L.topRightCorner(D, D) = -sth_atb * I + sth * B;
  w.L.bottomLeftCorner(D, D) = sth_t * Q_half_;
  w.L.bottomRightCorner(D, D) = sth * Q_half_;
  w.Linv.resize(2 * D, 2 * D);
  w.Linv.topLeftCorner(D, D) = sth * I;
  w.Linv.topRightCorner(D, D) = (sth_atb * I - sth * B) * Q_mhalf_;
  w.Linv.bottomLeftCorner(D, D) = -sth_t * I;
  w.Linv.bottomRightCorner(D, D) = (sth_cbt * I + sth_t * B) * Q_mhalf_;
  return w;
}

Whitening GlobalMaxwellian::whitening(double t) const { return whitening_tau(tau_of_t(t)); }

int invariant_count(int D) { return 4 + 2 * D + D * (D - 1) / 2; }

void add_invariant_densities(int D, const double* v, const double* x, double t, double w, double* out) {
  double X[3];
  double vv = 0.0, XX = 0.0, Xv = 0.0;
  for (int i = 0; i < D; ++i) {
    X[i] = x[i] - t * v[i];
    vv += v[i] * v[i];
    XX += X[i] * X[i];
    Xv += X[i] * v[i];
  }
  int k = 0;
  out[k++] += w;
  for (int i = 0; i < D; ++i) out[k++] += w * v[i];
  out[k++] += w * 0.5 * vv;
  for (int i = 0; i < D; ++i) out[k++] += w * X[i];
  out[k++] += w * 0.5 * XX;
  out[k++] += w * Xv;
  for (int i = 0; i < D; ++i)
    for (int j = i + 1; j < D; ++j) out[k++] += w * (X[i] * v[j] - v[i] * X[j]);
}

std::vector<std::string> invariant_labels(int D) {
  std::vector<std::string> l;
  l.push_back("mass");
  for (int i = 0; i < D; ++i) l.push_back("momentum_" + std::to_string(i));
  l.push_back("energy");
  for (int i = 0; i < D; ++i) l.push_back("position_" + std::to_string(i));
  l.push_back("position_sq");
  l.push_back("position_dot_v");
  for (int i = 0; i < D; ++i)
    for (int j = i + 1; j < D; ++j) l.push_back("wedge_" + std::to_string(i) + std::to_string(j));
  return l;
}

}  // namespace bz
