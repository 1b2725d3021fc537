#pragma once

#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "boltzscat/bounds.hpp"
#include "boltzscat/collision.hpp"
#include "boltzscat/phase_field.hpp"
#include "boltzscat/timegrid.hpp"

namespace bz {

// Normalized grid on which collisions are evaluated at each time node:
// xi (local thermal velocity) times eta (whitened lab position).
struct CollisionSetup {
  int n_xi = 16;
  double xi_halfwidth = 5.0;
  int n_eta = 16;
  double eta_halfwidth = 5.0;
  int n_omega = 16;
  int interp_order = 4;
};

struct SolverConfig {
  double T = std::numeric_limits<double>::infinity();
  int Nt = 17;
  double picard_tol = 1e-9;
  int max_iters = 60;
  double slack = 0.05;  // allowed excess of the measured contraction ratio
};

// One comoving relative density per time node.
struct Trajectory {
  TimeGrid times;
  std::vector<Vec> h;
  DistributionField field(const PhaseGrid& g, const Params& ref, int j) const;
};

// Comoving collision integrand for the reference M on a fixed grid:
// g(tau, h) = dt/dtau * B(F, F)(v, x + t v, t) / M(v, x, 0) for F = h M.
class Propagator {
 public:
  Propagator(const Params& ref, const KernelSpec& k, const PhaseGrid& grid, const CollisionSetup& cs,
             const SolverConfig& cfg);

  const GlobalMaxwellian& ref() const { return M_; }
  const KernelSpec& kernel() const { return k_; }
  const PhaseGrid& grid() const { return grid_; }
  const TimeGrid& times() const { return times_; }
  const CollisionOperator& op() const { return *op_; }
  const SolverConfig& config() const { return cfg_; }
  double nu_bar() const { return nu_bar_; }

  // Integrand at node j for B(F, G); F == G takes the symmetric fast path.
  Vec integrand(int j, const Vec& hF, const Vec& hG) const;
  Vec integrand(int j, const Vec& h) const { return integrand(j, h, h); }

  // H[F] and the entropy production rate (integral of B(F,F) ln F) at node j.
  struct NodeEntropy {
    double H = 0.0;
    double production = 0.0;
  };
  NodeEntropy entropy_at(int j, const Vec& h) const;

  // Cumulative integrals I_j = int_{tau_0}^{tau_j} g, in place of g.
  void cumulate(std::vector<Vec>& g) const;

 private:
  // h interpolated onto the (xi, eta) lab grid at node j (rows xi, columns eta).
  Vec to_lab_grid(int j, const Vec& h) const;
  // Lab-grid values pulled back to comoving nodes, times the exact factor
  // m sqrt(det(Q/2pi)) theta^p dt/dtau exp(-|eta|^2/2).
  Vec from_lab_grid(int j, const Vec& U) const;

  GlobalMaxwellian M_;
  KernelSpec k_;
  PhaseGrid grid_;
  CollisionSetup cs_;
  SolverConfig cfg_;
  TimeGrid times_;
  std::unique_ptr<CollisionOperator> op_;
  std::vector<Whitening> white_;
  Vec eta_nodes_;
  double power_ = 0.0;
  double nu_bar_ = 0.0;
};

struct PicardLog {
  std::vector<double> deltas;  // sup over nodes of successive differences
  std::vector<double> ratios;  // deltas[k] / deltas[k-1]
  int iterations = 0;
  bool converged = false;
  double residual = 0.0;  // ||G - E(G)|| after the last iterate
  double max_ratio() const;
};

// Fixed point of f_j = data + int_{tau_a}^{tau_j} g(f), anchored at node a.
// Covers the Cauchy problem (a = middle) and the wave problems (a = first / last).
struct PicardResult {
  Trajectory traj;
  PicardLog log;
};
PicardResult picard_solve(const Propagator& P, const Vec& data, int anchor, const std::vector<Vec>* start = nullptr);

// Cauchy problem from comoving data at t = 0. Checks the data ball.
PicardResult solve_cauchy(const Propagator& P, const DistributionField& F_in,
                          const std::vector<Vec>* start = nullptr);

// C(G, G) at every node: integral of the integrand from t = 0.
std::vector<Vec> collision_history(const Propagator& P, const Trajectory& G);

struct PositivityVerdict {
  bool ok = true;
  int worst_node = -1;
  std::size_t worst_index = 0;
  double worst_value = 1.0;
  double lo = 0.0;
  double hi = 0.0;
  std::string message;
};
PositivityVerdict check_positivity(const Trajectory& traj, double r, double tol);

struct StabilityReport {
  double data_distance = 0.0;
  double eps = 0.0;
  double measured = 0.0;
  double bound_lipschitz = 0.0;
  bool gronwall_available = false;
  double bound_gronwall = 0.0;
  bool ok = false;
};
// Trajectory distance of two solves against the Lipschitz and (beta <= 0) Gronwall bounds.
StabilityReport stability_pair(const Propagator& P, const Trajectory& a, const Trajectory& b, const Vec& in_a,
                               const Vec& in_b, double mu_bar, double tol);

struct NodeDiagnostics {
  double t = 0.0;
  Vec moments;
  double H = 0.0;
  double entropy_production = 0.0;
  double sup_dev = 0.0;
};
std::vector<NodeDiagnostics> run_diagnostics(const Propagator& P, const Trajectory& traj);

}  // namespace bz
