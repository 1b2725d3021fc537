#include "boltzscat/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "boltzscat/parallel.hpp"
#include "boltzscat/quadrature.hpp"
#include "boltzscat/special.hpp"

namespace bz {

namespace {

constexpr double kPi = std::numbers::pi;

double time_power(const GlobalMaxwellian& M, const KernelSpec& k) { return 0.5 * (M.dim() + k.beta); }

// m sqrt(det(Q / 2 pi)), the peak of rho(x, t) / theta^{D/2}.
double rho_scale(const GlobalMaxwellian& M) {
  return M.mass() * M.sqrt_det_Q() / std::pow(2.0 * kPi, 0.5 * M.dim());
}

// Sample point in [-5, 5]^{2D}: Halton, shifted modulo 1 by a seeded offset.
struct Sampler {
  int dim;
  std::vector<double> shift;
  Sampler(int dim, std::uint64_t seed) : dim(dim), shift(dim, 0.0) {
    if (seed != 0) {
      std::mt19937_64 rng(seed);
      std::uniform_real_distribution<double> u(0.0, 1.0);
      for (double& s : shift) s = u(rng);
    }
  }
  void point(std::size_t i, double* out) const {
    halton(i + 1, dim, out);
    for (int d = 0; d < dim; ++d) {
      double x = out[d] + shift[d];
      if (x >= 1.0) x -= 1.0;
      out[d] = 10.0 * x - 5.0;
    }
  }
};

void check_beta(const KernelSpec& k, int D, double hi, const char* what) {
  require(k.D == D, ErrorKind::InvalidArgument, std::string(what) + ": kernel dimension differs from the Maxwellian");
  require(k.beta > 1.0 - D && k.beta <= hi, ErrorKind::Domain,
          std::string(what) + ": beta must lie in (1 - D, " + (hi == 0.0 ? "0" : "1") + "]" +
              (hi == 0.0 ? "; use nu-based bounds for hard potentials" : ""));
}

}  // namespace

double integrate_over_time(const GlobalMaxwellian& M, double p, const std::function<double(double)>& f,
                           double rtol) {
  require(p > 0.5, ErrorKind::Domain, "integrate_over_time: need p > 1/2");
  const double k = p >= 1.0 ? 1.0 : std::ceil(2.0 / (2.0 * p - 1.0));
  const double h = 0.5 * kPi;
  const auto& P = M.params();
  const double r = std::sqrt(P.c / P.a);
  auto half = [&](double sign) {
    return adaptive_integrate(
        [&](double s) {
          const double om = 1.0 - s;
          const double tau = sign * h * (1.0 - std::pow(om, k));
          const double dtau = h * k * std::pow(om, k - 1.0);
          if (dtau == 0.0) return 0.0;
          // cos(tau) taken from the distance to the endpoint to keep it exact near +-pi/2.
          const double ct = std::sin(h * std::pow(om, k));
          const double g2 = P.c - P.b * r * std::sin(2.0 * tau);
          return r * std::pow(ct, 2.0 * p - 2.0) / std::pow(g2, p) * dtau * f(tau);
        },
        0.0, 1.0, rtol);
  };
  return half(1.0) + half(-1.0);
}

ConstantPair mu_of_M(const GlobalMaxwellian& M, const KernelSpec& k, int samples, std::uint64_t seed) {
  const int D = M.dim();
  check_beta(k, D, 0.0, "mu_of_M");
  require(samples > 0, ErrorKind::InvalidArgument, "mu_of_M: samples must be positive");
  const double p = time_power(M, k);
  const double pre = rho_scale(M) * k.bbar;
  const auto& P = M.params();
  ConstantPair r;
  r.bound = pre * a_beta_zero(k.beta, D) * theta_power_integral(P.a, P.b, P.c, p);
  // In whitened coordinates sup_{v,x} A(M)(t) / (pre theta^p) is the sup of
  // exp(-|eta|^2/2) a_beta(|xi|), the same at every t.
  Sampler smp(2 * D, seed);
  const double sup = deterministic_max(samples, [&](std::size_t i) {
    double z[6];
    smp.point(i, z);
    double xi2 = 0.0, eta2 = 0.0;
    for (int d = 0; d < D; ++d) {
      xi2 += z[d] * z[d];
      eta2 += z[D + d] * z[D + d];
    }
    return std::exp(-0.5 * eta2) * a_beta(std::sqrt(xi2), k.beta, D);
  }, 64);
  r.numeric = pre * sup * integrate_over_time(M, p, [](double) { return 1.0; });
  return r;
}

double mu_sharp(const GlobalMaxwellian& M, const KernelSpec& k) {
  const int D = M.dim();
  check_beta(k, D, 0.0, "mu_sharp");
  const auto& P = M.params();
  const ThetaTails h = theta_power_tails(P.a, P.b, P.c, time_power(M, k), 0.0);
  return rho_scale(M) * k.bbar * a_beta_zero(k.beta, D) * std::max(h.left, h.right);
}

double nu_bound(const GlobalMaxwellian& M, const KernelSpec& k) {
  const int D = M.dim();
  check_beta(k, D, 1.0, "nu_bound");
  const double a = M.params().a;
  return M.mass() * k.bbar / (std::pow(2.0 * kPi, D - 0.5) * std::sqrt(a)) *
         (std::pow(2.0 * kPi * a, 0.5 * D) + sphere_area(D) * M.sqrt_det_Q() / (k.beta + D - 1.0));
}

ConstantPair nu_of_M(const GlobalMaxwellian& M, const KernelSpec& k, int samples, std::uint64_t seed) {
  const int D = M.dim();
  ConstantPair r;
  r.bound = nu_bound(M, k);
  require(samples > 0, ErrorKind::InvalidArgument, "nu_of_M: samples must be positive");
  const double p = time_power(M, k);
  const double pre = rho_scale(M) * k.bbar;
  const Whitening w0 = M.whitening_tau(0.0);
  const Eigen::MatrixXd& B = M.params().B;
  const Eigen::MatrixXd& Qh = M.Q_half();
  Sampler smp(2 * D, seed);
  r.numeric = deterministic_max(samples, [&](std::size_t i) {
    double zs[6];
    smp.point(i, zs);
    const Eigen::VectorXd zeta0 = Eigen::Map<Eigen::VectorXd>(zs, 2 * D);
    const Eigen::VectorXd z = w0.Linv * zeta0;
    const Eigen::VectorXd v = z.head(D), x = z.tail(D);
    const Eigen::VectorXd Bv = B * v, Bx = B * x, Qv = Qh * v, Qx = Qh * x;
    return pre * integrate_over_time(M, p, [&](double tau) {
      const auto kc = M.whitening_coefficients(tau);
      double xi2 = 0.0, eta2 = 0.0;
      for (int d = 0; d < D; ++d) {
        const double xi = kc[0] * v[d] + kc[1] * Bv[d] - kc[2] * x[d] + kc[3] * Bx[d];
        const double eta = kc[1] * Qv[d] + kc[3] * Qx[d];
        xi2 += xi * xi;
        eta2 += eta * eta;
      }
      return std::exp(-0.5 * eta2) * a_beta(std::sqrt(xi2), k.beta, D);
    }, 1e-8);
  }, 16);
  return r;
}

double admissible_mass(const Params& p, const KernelSpec& k, double margin) {
  require(margin > 0.0 && margin <= 1.0, ErrorKind::Domain, "admissible_mass: margin must lie in (0, 1]");
  Params unit = p;
  unit.m = 1.0;
  return margin / (4.0 * nu_bound(GlobalMaxwellian(unit), k));
}

namespace {
void check_nu(double nu, const char* what) {
  require(nu > 0.0 && 4.0 * nu < 1.0, ErrorKind::Domain, std::string(what) + ": need 0 < 4 nu < 1");
}
}  // namespace

double eps_of_r(double nu, double r) {
  check_nu(nu, "eps_of_r");
  return (1.0 - 4.0 * nu * (1.0 + 0.5 * r)) * r;
}

double r_max(double nu) {
  check_nu(nu, "r_max");
  return 1.0 / (4.0 * nu) - 1.0;
}

double eps_max(double nu) {
  check_nu(nu, "eps_max");
  return (1.0 - 4.0 * nu) * (1.0 - 4.0 * nu) / (8.0 * nu);
}

double r_of_eps(double nu, double eps) {
  check_nu(nu, "r_of_eps");
  require(eps >= 0.0, ErrorKind::Domain, "r_of_eps: eps must be nonnegative");
  const double g = 1.0 - 4.0 * nu;
  const double x = 8.0 * nu * eps / (g * g);
  require(x <= 1.0, ErrorKind::Domain, "r_of_eps: eps above (1 - 4 nu)^2 / (8 nu)");
  // (1/(4nu) - 1)(1 - sqrt(1 - x)) without cancellation.
  return 2.0 * eps / (g * (1.0 + std::sqrt(1.0 - x)));
}

PositivityThreshold positivity_threshold(double nu) {
  check_nu(nu, "positivity_threshold");
  if (4.0 * nu < 0.5) return {1.0 - 6.0 * nu, false};
  return {eps_max(nu), true};
}

double lipschitz_factor(double nu, double eps) {
  check_nu(nu, "lipschitz_factor");
  const double g = 1.0 - 4.0 * nu;
  const double d = g * g - 8.0 * nu * eps;
  require(d > 0.0, ErrorKind::Domain, "lipschitz_factor: eps at or above (1 - 4 nu)^2 / (8 nu)");
  return 1.0 / std::sqrt(d);
}

double truncation_tail(const GlobalMaxwellian& M, const KernelSpec& k, double T) {
  const int D = M.dim();
  require(D + k.beta > 1.0, ErrorKind::Domain, "truncation_tail: need D + beta > 1");
  const auto& P = M.params();
  const ThetaTails t = theta_power_tails(P.a, P.b, P.c, time_power(M, k), T);
  // For beta > 0 the velocity factor is taken at its centre value a_beta(0).
  return rho_scale(M) * k.bbar * a_beta_zero(k.beta, D) * (t.left + t.right);
}

double time_truncation(const GlobalMaxwellian& M, const KernelSpec& k, double tol) {
  require(tol > 0.0, ErrorKind::Domain, "time_truncation: tol must be positive");
  if (truncation_tail(M, k, 0.0) < tol) return 0.0;
  double hi = 1.0;
  while (truncation_tail(M, k, hi) >= tol) {
    hi *= 2.0;
    require(hi < 1e300, ErrorKind::Domain, "time_truncation: tol too small for the floating-point range");
  }
  double lo = hi == 1.0 ? 0.0 : 0.5 * hi;
  while (hi - lo > 1e-12 * hi) {
    const double mid = 0.5 * (lo + hi);
    if (truncation_tail(M, k, mid) < tol)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

BoundsReport compute_bounds(const GlobalMaxwellian& M, const KernelSpec& k, int samples, std::uint64_t seed) {
  BoundsReport r;
  const ConstantPair nu = nu_of_M(M, k, samples, seed);
  r.nu_bound = nu.bound;
  r.nu_numeric = nu.numeric;
  r.contraction_ok = 4.0 * nu.bound < 1.0;
  if (r.contraction_ok) {
    r.r_max = r_max(nu.bound);
    r.eps_max = eps_max(nu.bound);
    const PositivityThreshold pt = positivity_threshold(nu.bound);
    r.eps_positivity = pt.eps;
    r.positivity_unconditional = pt.unconditional;
  }
  r.mu_available = k.beta <= 0.0;
  if (r.mu_available) {
    const ConstantPair mu = mu_of_M(M, k, samples, seed);
    r.mu_bound = mu.bound;
    r.mu_numeric = mu.numeric;
    r.mu_sharp = mu_sharp(M, k);
  }
  const auto& P = M.params();
  const double p = 0.5 * (M.dim() + k.beta);
  r.theta_integral_closed = theta_power_integral(P.a, P.b, P.c, p);
  r.theta_integral_quadrature = integrate_over_time(M, p, [](double) { return 1.0; });
  return r;
}

}  // namespace bz
