#pragma once

#include "boltzscat/solver.hpp"

namespace bz {

enum class Direction { Plus, Minus };
const char* direction_name(Direction d);

struct Asymptote {
  DistributionField field;  // comoving, t = +-inf (or +-T for a truncated window)
  double tail_bound = 0.0;  // weighted sup error bar from the untreated time tail
};
// Asymptotic state of a solved trajectory: the comoving field at the last
// (Plus) or first (Minus) node.
Asymptote extract_asymptote(const Propagator& P, const Trajectory& traj, Direction d);

struct ScatterResult {
  DistributionField output;  // comoving; t = 0 for wave_inverse, +-inf for scatter / scatter_inverse
  PicardResult solve;
  double eps = 0.0;  // sup |h_in - 1|
  double r = 0.0;    // certified output radius for eps
  double out_dev = 0.0;  // sup |h_out - 1|
};

// Data F at t = +inf (Plus) or -inf (Minus) -> F_in at t = 0 with T(F_in) = F.
ScatterResult wave_inverse(const Propagator& P, const DistributionField& F_inf, Direction d,
                           const std::vector<Vec>* start = nullptr);
// F^{-inf} -> F^{+inf}.
ScatterResult scatter(const Propagator& P, const DistributionField& F_minus, const std::vector<Vec>* start = nullptr);
// F^{+inf} -> F^{-inf}.
ScatterResult scatter_inverse(const Propagator& P, const DistributionField& F_plus,
                              const std::vector<Vec>* start = nullptr);

struct ConservationReport {
  Vec before;
  Vec after;
  Vec scale;     // absolute-density moments of the first field
  Vec residual;  // |after - before| / scale, componentwise
  double max_residual = 0.0;
};
ConservationReport check_scatter_conservation(const DistributionField& F_minus, const DistributionField& F_plus);

struct HReport {
  double H_minus = 0.0;
  double H_plus = 0.0;
  double slack = 0.0;
  bool decreasing = false;  // H_plus <= H_minus + slack
  bool equality = false;    // |H_plus - H_minus| <= slack
};
// Both fields must be nonnegative.
HReport check_H_decrease(const DistributionField& F_minus, const DistributionField& F_plus, double slack);

struct FitResult {
  Params params;
  double residual = 0.0;  // max |moment mismatch| / mass
  int iterations = 0;
  bool converged = false;
};
// Global Maxwellian whose invariant vector equals `moments` (Newton, numerical Jacobian).
FitResult fit_global_maxwellian(const Vec& moments, int D, double tol = 1e-10, int max_iters = 100);

struct InjectivityReport {
  double mu_bar = 0.0;
  double asymptote_distance = 0.0;
  Vec measured;  // sup |h1 - h2| per node
  Vec bound;     // asymptote_distance * exp(4 mu_bar) per node
  double tol = 0.0;
  bool ok = false;
};
// Two trajectories with their + asymptotes at the last node; beta <= 0 only.
InjectivityReport injectivity_bound(const Propagator& P, const Trajectory& a, const Trajectory& b, double mu_bar,
                                    double tol);

struct LipschitzReport {
  double input_distance = 0.0;
  double eps = 0.0;
  double output_distance = 0.0;
  double bound = 0.0;
  bool ok = false;
};
// |out_a - out_b| <= |in_a - in_b| / sqrt((1 - 4 nu)^2 - 8 nu eps) + tol, eps the larger input radius.
LipschitzReport lipschitz_check(double nu_bar, const Vec& in_a, const Vec& in_b, const Vec& out_a, const Vec& out_b,
                                double tol);

}  // namespace bz
