#pragma once

#include <cstdint>
#include <functional>

#include "boltzscat/collision.hpp"
#include "boltzscat/maxwellian.hpp"

namespace bz {

// Integral over the whole time line of theta(t)^p f(tau), written in
// tau = atan(t sqrt(a/c)). The endpoint singularity of theta^p dt/dtau for
// p < 1 is absorbed by a polynomial stretching of tau near +-pi/2.
double integrate_over_time(const GlobalMaxwellian& M, double p, const std::function<double(double)>& f,
                           double rtol = 1e-10);

struct ConstantPair {
  double bound = 0.0;
  double numeric = 0.0;
};

// Time integral of sup A(M)(t). Closed-form bound and the integral of the
// sup over a low-discrepancy (v, x) sample. Requires beta in (1-D, 0].
ConstantPair mu_of_M(const GlobalMaxwellian& M, const KernelSpec& k, int samples = 4096, std::uint64_t seed = 0);

// Larger of the two half-line integrals of the mu bound integrand.
double mu_sharp(const GlobalMaxwellian& M, const KernelSpec& k);

// Sup over characteristics of the time integral of A(M). The numeric value
// is a sampled lower estimate. Requires beta in (1-D, 1].
ConstantPair nu_of_M(const GlobalMaxwellian& M, const KernelSpec& k, int samples = 4096, std::uint64_t seed = 0);

// Closed-form nu bound alone (cheap).
double nu_bound(const GlobalMaxwellian& M, const KernelSpec& k);

// Mass at which nu_bound equals margin / 4, from the m = 1 member of p.
double admissible_mass(const Params& p, const KernelSpec& k, double margin);

double eps_of_r(double nu, double r);
// Smaller root of eps_of_r(nu, r) = eps. eps may equal eps_max (r = r_max).
double r_of_eps(double nu, double eps);
double r_max(double nu);
double eps_max(double nu);

struct PositivityThreshold {
  double eps = 0.0;
  bool unconditional = false;  // 1/2 <= 4 nu < 1: every admissible eps gives r <= 1
};
PositivityThreshold positivity_threshold(double nu);

// 1 / sqrt((1 - 4 nu)^2 - 8 nu eps).
double lipschitz_factor(double nu, double eps);

// Tail of the mu-type bound integrand outside [-T, T].
double truncation_tail(const GlobalMaxwellian& M, const KernelSpec& k, double T);
// Smallest T (to 1e-12 relative) with truncation_tail(T) < tol; 0 if the full integral is below tol.
double time_truncation(const GlobalMaxwellian& M, const KernelSpec& k, double tol);

struct BoundsReport {
  bool mu_available = false;  // beta <= 0
  double mu_bound = 0.0;
  double mu_numeric = 0.0;
  double mu_sharp = 0.0;
  double nu_bound = 0.0;
  double nu_numeric = 0.0;
  bool contraction_ok = false;
  double r_max = 0.0;
  double eps_max = 0.0;
  double eps_positivity = 0.0;
  bool positivity_unconditional = false;
  double theta_integral_closed = 0.0;
  double theta_integral_quadrature = 0.0;
};
BoundsReport compute_bounds(const GlobalMaxwellian& M, const KernelSpec& k, int samples = 4096,
                            std::uint64_t seed = 0);

}  // namespace bz
