#pragma once

namespace bz {

// |S^{D-1}| = 2 pi^{D/2} / Gamma(D/2).
double sphere_area(int D);

// a_beta(0) = 2^{beta/2} Gamma((D+beta)/2) / Gamma(D/2).
double a_beta_zero(double beta, int D);

// a_beta(w) = E|w - Z|^beta for Z standard normal in R^D, depending only on |w|.
// Poisson mixture of central chi moments (|w - Z|^2 is noncentral chi-square).
double a_beta(double w_norm, double beta, int D);

// Same quantity by adaptive quadrature in polar coordinates centred at w.
double a_beta_quadrature(double w_norm, double beta, int D, double rtol = 1e-12);

// Mean of |z|^beta over the cube [-h/2, h/2]^D (beta > -D).
double cell_average_power(double beta, int D, double h);

// Integral over the real line of theta(t)^p for theta = 1/(a t^2 - 2 b t + c), p > 1/2.
double theta_power_integral(double a, double b, double c, double p);

// Integrals of theta(t)^p over t > T (right) and t < -T (left). T = 0 gives
// the two half-line integrals.
struct ThetaTails {
  double right = 0.0;
  double left = 0.0;
};
ThetaTails theta_power_tails(double a, double b, double c, double p, double T);

}  // namespace bz
