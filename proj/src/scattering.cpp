#include "boltzscat/scattering.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "boltzscat/parallel.hpp"

namespace bz {

const char* direction_name(Direction d) { return d == Direction::Plus ? "plus" : "minus"; }

namespace {

double sup_dev(const Vec& h) {
  return deterministic_max(h.size(), [&](std::size_t i) { return std::abs(h[i] - 1.0); });
}

double sup_diff(const Vec& a, const Vec& b) {
  return deterministic_max(a.size(), [&](std::size_t i) { return std::abs(a[i] - b[i]); });
}

double radius_for(double nu, double eps) {
  return eps <= eps_max(nu) ? r_of_eps(nu, eps) : r_max(nu);
}

void check_input(const Propagator& P, const DistributionField& F, const char* what, double* eps) {
  require(F.grid == P.grid(), ErrorKind::InvalidArgument, std::string(what) + ": field grid differs from the solver grid");
  require(F.frame == Frame::Comoving, ErrorKind::InvalidArgument, std::string(what) + ": field must be comoving");
  const double nu = P.nu_bar();
  require(4.0 * nu < 1.0, ErrorKind::Domain,
          std::string(what) + ": certified nu = " + std::to_string(nu) + " violates nu < 1/4");
  *eps = sup_dev(F.h);
  require(*eps < eps_max(nu), ErrorKind::Domain,
          std::string(what) + ": |F - M(0)| = " + std::to_string(*eps) + " is not below (1 - 4 nu)^2 / (8 nu) = " +
              std::to_string(eps_max(nu)));
}

ScatterResult anchored(const Propagator& P, const DistributionField& F, int anchor, int read, double t_out,
                       const char* what, const std::vector<Vec>* start) {
  ScatterResult r;
  check_input(P, F, what, &r.eps);
  r.r = r_of_eps(P.nu_bar(), r.eps);
  r.solve = picard_solve(P, F.h, anchor, start);
  if (!r.solve.log.converged) {
    std::ostringstream os;
    os << what << ": no convergence after " << r.solve.log.iterations << " iterations (last delta "
       << r.solve.log.deltas.back() << ")";
    fail(ErrorKind::Convergence, os.str());
  }
  r.output = reference_field(P.grid(), P.ref().params(), t_out, Frame::Comoving);
  r.output.h = r.solve.traj.h[read];
  r.out_dev = sup_dev(r.output.h);
  return r;
}

}  // namespace

Asymptote extract_asymptote(const Propagator& P, const Trajectory& traj, Direction d) {
  const int n = traj.times.size();
  require(n >= 2, ErrorKind::InvalidArgument, "extract_asymptote: trajectory has a single node");
  const int j = d == Direction::Plus ? n - 1 : 0;
  Asymptote a;
  a.field = traj.field(P.grid(), P.ref().params(), j);
  const double T = std::abs(traj.times.t[j]);
  if (std::isfinite(T)) {
    const double nu = P.nu_bar();
    const double r = radius_for(nu, sup_dev(traj.h[traj.times.middle()]));
    // |B(F, F)| <= (1 + r)^2 M A(M) for F within (1 +- r) M.
    a.tail_bound = (1.0 + r) * (1.0 + r) * truncation_tail(P.ref(), P.kernel(), T);
  }
  return a;
}

ScatterResult wave_inverse(const Propagator& P, const DistributionField& F_inf, Direction d,
                           const std::vector<Vec>* start) {
  const int n = P.times().size();
  require(n >= 3, ErrorKind::InvalidArgument, "wave_inverse: needs a time window (T > 0)");
  return anchored(P, F_inf, d == Direction::Plus ? n - 1 : 0, P.times().middle(), 0.0, "wave_inverse", start);
}

ScatterResult scatter(const Propagator& P, const DistributionField& F_minus, const std::vector<Vec>* start) {
  const int n = P.times().size();
  require(n >= 3, ErrorKind::InvalidArgument, "scatter: needs a time window (T > 0)");
  return anchored(P, F_minus, 0, n - 1, P.times().t[n - 1], "scatter", start);
}

ScatterResult scatter_inverse(const Propagator& P, const DistributionField& F_plus, const std::vector<Vec>* start) {
  const int n = P.times().size();
  require(n >= 3, ErrorKind::InvalidArgument, "scatter_inverse: needs a time window (T > 0)");
  return anchored(P, F_plus, n - 1, 0, P.times().t[0], "scatter_inverse", start);
}

ConservationReport check_scatter_conservation(const DistributionField& F_minus, const DistributionField& F_plus) {
  require(F_minus.grid == F_plus.grid, ErrorKind::InvalidArgument, "check_scatter_conservation: grids differ");
  require(F_minus.frame == Frame::Comoving && F_plus.frame == Frame::Comoving, ErrorKind::InvalidArgument,
          "check_scatter_conservation: fields must be comoving");
  ConservationReport c;
  c.before = moments(F_minus);
  c.after = moments(F_plus);
  c.scale = moment_scales(F_minus);
  c.residual.resize(c.before.size());
  for (std::size_t k = 0; k < c.before.size(); ++k) {
    c.residual[k] = std::abs(c.after[k] - c.before[k]) / c.scale[k];
    c.max_residual = std::max(c.max_residual, c.residual[k]);
  }
  return c;
}

HReport check_H_decrease(const DistributionField& F_minus, const DistributionField& F_plus, double slack) {
  HReport h;
  h.slack = slack;
  h.H_minus = h_functional(F_minus);
  h.H_plus = h_functional(F_plus);
  h.decreasing = h.H_plus <= h.H_minus + slack;
  h.equality = std::abs(h.H_plus - h.H_minus) <= slack;
  return h;
}

namespace {

// Unknowns u = (m, x0, v0, a, b, c, B_ij for i < j).
Vec pack(const Params& p) {
  Vec u;
  u.push_back(p.m);
  for (int i = 0; i < p.D; ++i) u.push_back(p.x0[i]);
  for (int i = 0; i < p.D; ++i) u.push_back(p.v0[i]);
  u.push_back(p.a);
  u.push_back(p.b);
  u.push_back(p.c);
  for (int i = 0; i < p.D; ++i)
    for (int j = i + 1; j < p.D; ++j) u.push_back(p.B(i, j));
  return u;
}

Params unpack(const Vec& u, int D) {
  Params p = Params::unit(D);
  int k = 0;
  p.m = u[k++];
  for (int i = 0; i < D; ++i) p.x0[i] = u[k++];
  for (int i = 0; i < D; ++i) p.v0[i] = u[k++];
  p.a = u[k++];
  p.b = u[k++];
  p.c = u[k++];
  for (int i = 0; i < D; ++i)
    for (int j = i + 1; j < D; ++j) {
      p.B(i, j) = u[k++];
      p.B(j, i) = -p.B(i, j);
    }
  return p;
}

// Moment mismatch over mass; false if u is not a valid parameter set.
bool mismatch(const Vec& u, int D, const Vec& target, Eigen::VectorXd& out) {
  const Params p = unpack(u, D);
  if (!validate_params(p).ok) return false;
  const Vec inv = GlobalMaxwellian(p).invariants();
  out.resize(static_cast<Eigen::Index>(inv.size()));
  for (std::size_t k = 0; k < inv.size(); ++k) out[static_cast<Eigen::Index>(k)] = (inv[k] - target[k]) / target[0];
  return true;
}

}  // namespace

FitResult fit_global_maxwellian(const Vec& mom, int D, double tol, int max_iters) {
  require(D == 2 || D == 3, ErrorKind::InvalidArgument, "fit_global_maxwellian: D must be 2 or 3");
  require(static_cast<int>(mom.size()) == invariant_count(D), ErrorKind::InvalidArgument,
          "fit_global_maxwellian: moment vector has the wrong length");
  for (double x : mom) require(std::isfinite(x), ErrorKind::InvalidArgument, "fit_global_maxwellian: non-finite moment");
  const double m = mom[0];
  require(m > 0.0, ErrorKind::Domain, "fit_global_maxwellian: mass must be positive");
  // Gaussian closure with b = 0, B = 0.
  Params g = Params::unit(D, m);
  for (int i = 0; i < D; ++i) {
    g.v0[i] = mom[1 + i] / m;
    g.x0[i] = mom[2 + D + i] / m;
  }
  const double ev = 2.0 * mom[1 + D] - m * g.v0.squaredNorm();
  const double ex = 2.0 * mom[2 + 2 * D] - m * g.x0.squaredNorm();
  require(ev > 0.0 && ex > 0.0, ErrorKind::Domain,
          "fit_global_maxwellian: moments not realizable (nonpositive central second moments)");
  g.c = D * m / ev;
  g.a = D * m / ex;

  Vec u = pack(g);
  const int n = static_cast<int>(u.size());
  Eigen::VectorXd r;
  require(mismatch(u, D, mom, r), ErrorKind::Domain, "fit_global_maxwellian: closure guess is not a valid Maxwellian");
  FitResult f;
  for (f.iterations = 0; f.iterations < max_iters; ++f.iterations) {
    f.residual = r.lpNorm<Eigen::Infinity>();
    if (f.residual < 0.01 * tol) break;
    Eigen::MatrixXd J(n, n);
    for (int i = 0; i < n; ++i) {
      const double h = 1e-6 * std::max(1.0, std::abs(u[i]));
      Vec up = u, um = u;
      up[i] += h;
      um[i] -= h;
      Eigen::VectorXd rp, rm;
      const bool okp = mismatch(up, D, mom, rp), okm = mismatch(um, D, mom, rm);
      if (okp && okm)
        J.col(i) = (rp - rm) / (2.0 * h);
      else if (okp)
        J.col(i) = (rp - r) / h;
      else if (okm)
        J.col(i) = (r - rm) / h;
      else
        fail(ErrorKind::Convergence, "fit_global_maxwellian: iterate sits on the boundary of valid parameters");
    }
    const Eigen::VectorXd step = J.colPivHouseholderQr().solve(-r);
    double lambda = 1.0;
    bool accepted = false;
    for (int halvings = 0; halvings < 40; ++halvings, lambda *= 0.5) {
      Vec trial = u;
      for (int i = 0; i < n; ++i) trial[i] += lambda * step[i];
      Eigen::VectorXd rt;
      if (mismatch(trial, D, mom, rt) && rt.lpNorm<Eigen::Infinity>() < f.residual) {
        u = trial;
        r = rt;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
  }
  f.residual = r.lpNorm<Eigen::Infinity>();
  f.converged = f.residual < tol;
  f.params = unpack(u, D);
  return f;
}

InjectivityReport injectivity_bound(const Propagator& P, const Trajectory& a, const Trajectory& b, double mu_bar,
                                    double tol) {
  require(P.kernel().beta <= 0.0, ErrorKind::Domain,
          "injectivity_bound: only established for beta <= 0 (soft potentials and Maxwell molecules)");
  require(a.h.size() == b.h.size() && a.h.size() >= 2, ErrorKind::InvalidArgument,
          "injectivity_bound: trajectories must share a time grid");
  InjectivityReport r;
  r.mu_bar = mu_bar;
  r.tol = tol;
  r.asymptote_distance = sup_diff(a.h.back(), b.h.back());
  const double bound = r.asymptote_distance * std::exp(4.0 * mu_bar);
  r.ok = true;
  for (std::size_t j = 0; j < a.h.size(); ++j) {
    r.measured.push_back(sup_diff(a.h[j], b.h[j]));
    r.bound.push_back(bound);
    r.ok = r.ok && r.measured.back() <= bound + tol;
  }
  return r;
}

LipschitzReport lipschitz_check(double nu_bar, const Vec& in_a, const Vec& in_b, const Vec& out_a, const Vec& out_b,
                                double tol) {
  LipschitzReport r;
  r.input_distance = sup_diff(in_a, in_b);
  r.eps = std::max(sup_dev(in_a), sup_dev(in_b));
  require(r.eps < eps_max(nu_bar), ErrorKind::Domain, "lipschitz_check: inputs outside the admissible ball");
  r.output_distance = sup_diff(out_a, out_b);
  r.bound = r.input_distance * lipschitz_factor(nu_bar, r.eps);
  r.ok = r.output_distance <= r.bound + tol;
  return r;
}

}  // namespace bz
