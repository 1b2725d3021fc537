#include "boltzscat/special.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "boltzscat/common.hpp"
#include "boltzscat/quadrature.hpp"

namespace bz {

double sphere_area(int D) {
  require(D >= 1, ErrorKind::InvalidArgument, "sphere_area: D must be >= 1");
  return 2.0 * std::pow(std::numbers::pi, 0.5 * D) / std::tgamma(0.5 * D);
}

double a_beta_zero(double beta, int D) {
  require(beta > -D, ErrorKind::Domain, "a_beta: need beta > -D");
  return std::pow(2.0, 0.5 * beta) * std::exp(std::lgamma(0.5 * (D + beta)) - std::lgamma(0.5 * D));
}

double a_beta(double w_norm, double beta, int D) {
  require(beta > -D, ErrorKind::Domain, "a_beta: need beta > -D");
  if (beta == 0.0) return 1.0;
  const double half_lambda = 0.5 * w_norm * w_norm;
  if (half_lambda == 0.0) return a_beta_zero(beta, D);
  const double log_hl = std::log(half_lambda);
  const double base = 0.5 * beta * std::numbers::ln2;
  const long kmax = static_cast<long>(half_lambda + 40.0 * std::sqrt(half_lambda) + 60.0);
  double sum = 0.0;
  for (long k = 0; k <= kmax; ++k) {
    const double lt = -half_lambda + k * log_hl - std::lgamma(k + 1.0) + base +
                      std::lgamma(0.5 * (D + beta) + k) - std::lgamma(0.5 * D + k);
    const double term = std::exp(lt);
    sum += term;
    if (k > half_lambda && term < 1e-18 * sum) break;
  }
  return sum;
}

double a_beta_quadrature(double w_norm, double beta, int D, double rtol) {
  require(beta > -D, ErrorKind::Domain, "a_beta: need beta > -D");
  require(D == 2 || D == 3, ErrorKind::InvalidArgument, "a_beta_quadrature: D must be 2 or 3");
  const double pi = std::numbers::pi;
  const double w = w_norm;
  // Angular mean of the standard normal density on the sphere of radius r about w.
  auto shell = [&](double r) -> double {
    if (D == 2) {
      const int n = 96;
      double s = 0.0;
      for (int k = 0; k < n; ++k) {
        const double phi = 2.0 * pi * (k + 0.5) / n;
        s += std::exp(-0.5 * (w * w - 2.0 * r * w * std::cos(phi) + r * r));
      }
      return s * (2.0 * pi / n) / (2.0 * pi);
    }
    static const Rule1D gl = gauss_legendre(48);
    double s = 0.0;
    for (std::size_t i = 0; i < gl.nodes.size(); ++i)
      s += gl.weights[i] * std::exp(-0.5 * (w * w - 2.0 * r * w * gl.nodes[i] + r * r));
    return s * 2.0 * pi / std::pow(2.0 * pi, 1.5);
  };
  const double p = beta + D;
  const double rmax = w + 14.0;
  // u = r^p absorbs the r^{beta+D-1} weight.
  auto integrand = [&](double u) { return shell(std::pow(u, 1.0 / p)) / p; };
  return adaptive_integrate(integrand, 0.0, std::pow(rmax, p), rtol, 0.0, 30);
}

double cell_average_power(double beta, int D, double h) {
  require(beta > -D, ErrorKind::Domain, "cell_average_power: need beta > -D");
  require(D == 2 || D == 3, ErrorKind::InvalidArgument, "cell_average_power: D must be 2 or 3");
  const double hh = 0.5 * h;
  static const Rule1D gl = gauss_legendre(40);
  const std::size_t n = gl.nodes.size();
  double face = 0.0;
  if (D == 2) {
    for (std::size_t i = 0; i < n; ++i) {
      const double y = hh * gl.nodes[i];
      face += gl.weights[i] * hh * std::pow(hh * hh + y * y, 0.5 * beta);
    }
  } else {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        const double y = hh * gl.nodes[i], z = hh * gl.nodes[j];
        face += gl.weights[i] * gl.weights[j] * hh * hh * std::pow(hh * hh + y * y + z * z, 0.5 * beta);
      }
  }
  const double total = 2.0 * D * hh / (beta + D) * face;
  return total / std::pow(h, D);
}

double theta_power_integral(double a, double b, double c, double p) {
  require(a > 0.0 && c > 0.0, ErrorKind::Domain, "theta_power_integral: need a, c > 0");
  require(a * c - b * b > 0.0, ErrorKind::Domain, "theta_power_integral: need ac - b^2 > 0");
  require(p > 0.5, ErrorKind::Domain, "theta_power_integral: need p > 1/2");
  const double q0 = (a * c - b * b) / a;
  return std::sqrt(std::numbers::pi / a) * std::pow(q0, 0.5 - p) *
         std::exp(std::lgamma(p - 0.5) - std::lgamma(p));
}

namespace {

// Integral of sin(psi)^{2p-2} over [0, psi_max], psi_max in [0, pi]. For p < 1
// the endpoint singularity is removed by u = psi^{2p-1} / (2p-1).
double sin_power_from_zero(double psi_max, double p) {
  if (psi_max <= 0.0) return 0.0;
  const double e = 2.0 * p - 2.0;
  if (p >= 1.0 || psi_max > 0.5 * std::numbers::pi) {
    const double split = std::min(psi_max, 0.5 * std::numbers::pi);
    double s = 0.0;
    if (p >= 1.0) {
      s = adaptive_integrate([&](double x) { return std::pow(std::sin(x), e); }, 0.0, split, 1e-13);
    } else {
      s = sin_power_from_zero(split, p);
    }
    if (psi_max > split)
      s += adaptive_integrate([&](double x) { return std::pow(std::sin(x), e); }, split, psi_max, 1e-13);
    return s;
  }
  const double k = 2.0 * p - 1.0;
  const double umax = std::pow(psi_max, k) / k;
  return adaptive_integrate(
      [&](double u) {
        const double psi = std::pow(k * u, 1.0 / k);
        return psi > 0.0 ? std::pow(std::sin(psi) / psi, e) : 1.0;
      },
      0.0, umax, 1e-13);
}

}  // namespace

ThetaTails theta_power_tails(double a, double b, double c, double p, double T) {
  require(a > 0.0 && c > 0.0 && a * c - b * b > 0.0, ErrorKind::Domain, "theta_power_tails: invalid (a, b, c)");
  require(p > 0.5, ErrorKind::Domain, "theta_power_tails: need p > 1/2");
  require(T >= 0.0, ErrorKind::Domain, "theta_power_tails: need T >= 0");
  // a t^2 - 2 b t + c = a (t - b/a)^2 + q0; t - b/a = sqrt(q0/a) tan(phi).
  const double q0 = (a * c - b * b) / a;
  const double scale = std::sqrt(q0 / a);
  const double pre = scale * std::pow(q0, -p);
  ThetaTails r;
  if (std::isinf(T)) return r;
  const double phi_r = std::atan((T - b / a) / scale);
  const double phi_l = std::atan((-T - b / a) / scale);
  r.right = pre * sin_power_from_zero(0.5 * std::numbers::pi - phi_r, p);
  r.left = pre * sin_power_from_zero(0.5 * std::numbers::pi + phi_l, p);
  return r;
}

}  // namespace bz
