#include "boltzscat/timegrid.hpp"

#include <cmath>
#include <numbers>

#include "boltzscat/quadrature.hpp"
#include "boltzscat/special.hpp"

namespace bz {

namespace {

// s(t) = int_0^t theta^p dt', from the closed-form tails.
struct Clock {
  const GlobalMaxwellian& M;
  double p;
  double right0, left0;

  Clock(const GlobalMaxwellian& m, double pw) : M(m), p(pw) {
    const Params& q = M.params();
    const ThetaTails z = theta_power_tails(q.a, q.b, q.c, p, 0.0);
    right0 = z.right;
    left0 = z.left;
  }
  double operator()(double t) const {
    const Params& q = M.params();
    const ThetaTails r = theta_power_tails(q.a, q.b, q.c, p, std::abs(t));
    return t >= 0.0 ? right0 - r.right : r.left - left0;
  }
  // Bisection in tau, where s is monotone and bounded.
  double t_of(double s) const {
    double lo = -0.5 * std::numbers::pi, hi = 0.5 * std::numbers::pi;
    for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
      const double mid = 0.5 * (lo + hi);
      ((*this)(M.t_of_tau(mid)) < s ? lo : hi) = mid;
    }
    return M.t_of_tau(0.5 * (lo + hi));
  }
};

}  // namespace

TimeGrid TimeGrid::make(const GlobalMaxwellian& M, double T, int n, double p) {
  require(T >= 0.0, ErrorKind::InvalidArgument, "time.T must be nonnegative");
  require(p > 0.5, ErrorKind::Domain, "time grid: need D + beta > 1");
  TimeGrid g;
  if (T == 0.0) {
    g.tau = g.t = g.sigma = {0.0};
    g.kappa = {M.theta_power_dt_dtau(0.0, p)};
    g.C = Eigen::MatrixXd::Zero(1, 1);
    return g;
  }
  require(n >= 3 && n % 2 == 1, ErrorKind::InvalidArgument, "time.Nt must be odd and at least 3");
  const bool clock = p < 1.0;
  require(!clock || std::isfinite(T), ErrorKind::Domain, "time.T = inf needs D + beta >= 2");
  const Vec x = chebyshev_lobatto(n);
  g.tau.resize(n);
  g.t.resize(n);
  g.sigma.resize(n);
  g.kappa.resize(n);
  if (!clock) {
    const double tmax = M.tau_of_t(T);
    for (int j = 0; j < n; ++j) {
      g.sigma[j] = g.tau[j] = tmax * x[j];
      g.t[j] = j == n / 2 ? 0.0 : M.t_of_tau(g.tau[j]);
      g.kappa[j] = M.theta_power_dt_dtau(g.tau[j], p);
    }
  } else {
    const Clock s(M, p);
    const double sr = s(T), sl = -s(-T);
    for (int j = 0; j < n; ++j) {
      g.sigma[j] = x[j] * (x[j] < 0.0 ? sl : sr);
      if (j == 0) g.t[j] = -T;
      else if (j == n - 1) g.t[j] = T;
      else if (j == n / 2) g.t[j] = 0.0;
      else g.t[j] = s.t_of(g.sigma[j]);
      g.tau[j] = M.tau_of_t(g.t[j]);
      g.kappa[j] = 1.0;
    }
  }
  // Panel-wise Gauss-Legendre, exact for the degree n-1 interpolant.
  const Rule1D gl = gauss_legendre(n / 2 + 1);
  const Vec bw = barycentric_weights(g.sigma);
  g.C = Eigen::MatrixXd::Zero(n, n);
  Vec l(n);
  for (int j = 1; j < n; ++j) {
    g.C.row(j) = g.C.row(j - 1);
    const double a = g.sigma[j - 1], b = g.sigma[j];
    for (std::size_t q = 0; q < gl.nodes.size(); ++q) {
      const double s = 0.5 * (a + b) + 0.5 * (b - a) * gl.nodes[q];
      lagrange_basis(g.sigma, bw, s, l.data());
      for (int k = 0; k < n; ++k) g.C(j, k) += 0.5 * (b - a) * gl.weights[q] * l[k];
    }
  }
  return g;
}

}  // namespace bz
