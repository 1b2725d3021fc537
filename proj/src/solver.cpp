#include "boltzscat/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "boltzscat/parallel.hpp"
#include "boltzscat/quadrature.hpp"

namespace bz {

DistributionField Trajectory::field(const PhaseGrid& g, const Params& ref, int j) const {
  DistributionField f = reference_field(g, ref, times.t[j], Frame::Comoving);
  f.h = h[j];
  return f;
}

double PicardLog::max_ratio() const {
  double r = 0.0;
  for (double x : ratios) r = std::max(r, x);
  return r;
}

Propagator::Propagator(const Params& ref, const KernelSpec& k, const PhaseGrid& grid, const CollisionSetup& cs,
                       const SolverConfig& cfg)
    : M_(ref), k_(k), grid_(grid), cs_(cs), cfg_(cfg) {
  const ParamCheck pc = validate_params(ref);
  require(pc.ok, ErrorKind::Domain, "reference Maxwellian rejected: " + pc.reason);
  k_.check();
  require(k_.D == ref.D, ErrorKind::InvalidArgument, "kernel.D does not match maxwellian.D");
  require(k_.beta <= 1.0, ErrorKind::Domain, "solver paths need beta <= 1");
  grid_.check(M_);
  require(cfg.picard_tol > 0.0, ErrorKind::InvalidArgument, "solver.picard_tol must be positive");
  require(cfg.max_iters >= 1, ErrorKind::InvalidArgument, "solver.max_iters must be at least 1");
  require(cs.n_eta >= 4 && cs.eta_halfwidth > 0.0, ErrorKind::InvalidArgument,
          "collision: n_eta >= 4 and eta_halfwidth > 0 required");
  power_ = 0.5 * (ref.D + k_.beta);
  require(std::isfinite(cfg.T) || power_ >= 1.0, ErrorKind::Domain,
          "time.T = inf needs D + beta >= 2; give a finite T (see bounds time_truncation)");
  times_ = TimeGrid::make(M_, cfg.T, cfg.Nt, power_);
  op_ = std::make_unique<CollisionOperator>(k_, cs.n_xi, cs.xi_halfwidth, cs.n_omega, cs.interp_order);
  for (double tau : times_.tau) white_.push_back(M_.whitening_tau(tau));
  eta_nodes_ = uniform_nodes(cs.n_eta, cs.eta_halfwidth);
  nu_bar_ = nu_bound(M_, k_);
}

Vec Propagator::to_lab_grid(int j, const Vec& h) const {
  const int D = grid_.D;
  const std::size_t rows = op_->node_count();
  std::size_t ncols = 1;
  for (int d = 0; d < D; ++d) ncols *= cs_.n_eta;
  const Eigen::MatrixXd& Li = white_[j].Linv;
  const FieldInterpolator interp(grid_, h);
  Vec out(rows * ncols);
  parallel_for(rows, 4, [&](std::size_t b, std::size_t e) {
    Eigen::VectorXd zeta(2 * D), z(2 * D);
    for (std::size_t a = b; a < e; ++a) {
      for (int d = 0; d < D; ++d) zeta[d] = op_->node_coords()[a * D + d];
      for (std::size_t c = 0; c < ncols; ++c) {
        std::size_t r = c;
        for (int d = D - 1; d >= 0; --d) {
          zeta[D + d] = eta_nodes_[r % cs_.n_eta];
          r /= cs_.n_eta;
        }
        z.noalias() = Li * zeta;
        out[a * ncols + c] = interp(z.data());
      }
    }
  });
  return out;
}

Vec Propagator::from_lab_grid(int j, const Vec& U) const {
  const int D = grid_.D;
  const double kappa = times_.kappa[j];
  const double pre = M_.mass() * M_.sqrt_det_Q() / std::pow(2.0 * std::numbers::pi, 0.5 * D) * kappa;
  Vec out(grid_.size(), 0.0);
  if (pre == 0.0) return out;
  int dims[6];
  std::size_t strides[6];
  for (int d = 0; d < D; ++d) {
    dims[d] = cs_.n_xi;
    dims[D + d] = cs_.n_eta;
  }
  strides[2 * D - 1] = 1;
  for (int d = 2 * D - 2; d >= 0; --d) strides[d] = strides[d + 1] * dims[d + 1];
  const double hx = op_->half_width(), dxi = op_->spacing();
  const double he = cs_.eta_halfwidth, deta = 2.0 * he / (cs_.n_eta - 1);
  const Eigen::MatrixXd& L = white_[j].L;
  parallel_for(grid_.size(), 1024, [&](std::size_t b, std::size_t e) {
    Eigen::VectorXd z(2 * D), zeta(2 * D);
    double q[6];
    for (std::size_t i = b; i < e; ++i) {
      grid_.node(i, z.data(), z.data() + D);
      zeta.noalias() = L * z;
      double eta2 = 0.0;
      for (int d = 0; d < D; ++d) {
        q[d] = (zeta[d] + hx) / dxi;
        q[D + d] = (zeta[D + d] + he) / deta;
        eta2 += zeta[D + d] * zeta[D + d];
      }
      out[i] = pre * std::exp(-0.5 * eta2) * cubic_tensor_interp(U.data(), 2 * D, dims, strides, q);
    }
  });
  return out;
}

Vec Propagator::integrand(int j, const Vec& hF, const Vec& hG) const {
  require(hF.size() == grid_.size() && hG.size() == grid_.size(), ErrorKind::InvalidArgument,
          "integrand: field size mismatch");
  if (times_.kappa[j] == 0.0) return Vec(grid_.size(), 0.0);
  const Vec F = to_lab_grid(j, hF);
  const bool same = &hF == &hG || hF == hG;
  const Vec Gs = same ? Vec() : to_lab_grid(j, hG);
  const double* G = same ? F.data() : Gs.data();
  const std::size_t ncols = F.size() / op_->node_count();
  Vec gain(F.size()), loss(F.size());
  op_->apply(F.data(), G, ncols, gain.data(), loss.data());
  for (std::size_t i = 0; i < gain.size(); ++i) gain[i] -= loss[i];
  return from_lab_grid(j, gain);
}

Propagator::NodeEntropy Propagator::entropy_at(int j, const Vec& h) const {
  NodeEntropy r;
  r.H = h_functional([&] {
    DistributionField f = reference_field(grid_, M_.params(), times_.t[j], Frame::Comoving);
    f.h = h;
    return f;
  }());
  const double theta = M_.theta(times_.t[j]);
  if (!(theta > 0.0) || std::isinf(times_.t[j])) return r;
  const int D = grid_.D;
  const Vec F = to_lab_grid(j, h);
  const std::size_t rows = op_->node_count(), ncols = F.size() / rows;
  for (std::size_t i = 0; i < F.size(); ++i) {
    if (!(F[i] > 0.0)) {
      std::ostringstream os;
      os << "entropy production: F <= 0 at time node " << j << ", lab grid point " << i;
      fail(ErrorKind::Domain, os.str());
    }
  }
  Vec gain(F.size()), loss(F.size());
  op_->apply(F.data(), F.data(), ncols, gain.data(), loss.data());
  const Vec weta = trapezoid_weights(cs_.n_eta, cs_.eta_halfwidth);
  const double rate = M_.mass() * M_.sqrt_det_Q() / std::pow(2.0 * std::numbers::pi, 0.5 * D) *
                      std::pow(theta, power_);
  const double lpeak = std::log(M_.peak());
  // Lab volume element is d zeta / sqrt(det Q).
  r.production = deterministic_sum(rows, [&](std::size_t a) {
    double xi2 = 0.0;
    for (int d = 0; d < D; ++d) xi2 += op_->node_coords()[a * D + d] * op_->node_coords()[a * D + d];
    double s = 0.0;
    for (std::size_t c = 0; c < ncols; ++c) {
      double eta2 = 0.0, w = 1.0;
      std::size_t rr = c;
      for (int d = D - 1; d >= 0; --d) {
        const std::size_t k = rr % cs_.n_eta;
        rr /= cs_.n_eta;
        eta2 += eta_nodes_[k] * eta_nodes_[k];
        w *= weta[k];
      }
      // ln M is a collision invariant, so only ln(F / M) is weighted.
      const double lnM = lpeak - 0.5 * (xi2 + eta2);
      const double B = rate * std::exp(-0.5 * eta2) * (gain[a * ncols + c] - loss[a * ncols + c]) * std::exp(lnM);
      s += w * B * std::log(F[a * ncols + c]);
    }
    return op_->quad_weights()[a] * s / M_.sqrt_det_Q();
  }, 1);
  return r;
}

void Propagator::cumulate(std::vector<Vec>& g) const {
  const int n = times_.size();
  const std::size_t N = grid_.size();
  std::vector<Vec> out(n, Vec(N, 0.0));
  parallel_for(N, 4096, [&](std::size_t b, std::size_t e) {
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        const double c = times_.C(j, k);
        if (c == 0.0) continue;
        for (std::size_t i = b; i < e; ++i) out[j][i] += c * g[k][i];
      }
  });
  g.swap(out);
}

namespace {

double sup_diff(const Vec& a, const Vec& b) {
  return deterministic_max(a.size(), [&](std::size_t i) { return std::abs(a[i] - b[i]); });
}

// E(G)_j = data + I_j - I_anchor.
std::vector<Vec> apply_map(const Propagator& P, const std::vector<Vec>& G, const Vec& data, int anchor) {
  const int n = P.times().size();
  std::vector<Vec> g(n);
  for (int j = 0; j < n; ++j) g[j] = P.integrand(j, G[j]);
  P.cumulate(g);
  const Vec Ia = g[anchor];
  for (int j = 0; j < n; ++j)
    for (std::size_t i = 0; i < data.size(); ++i) g[j][i] = data[i] + (g[j][i] - Ia[i]);
  return g;
}

}  // namespace

PicardResult picard_solve(const Propagator& P, const Vec& data, int anchor, const std::vector<Vec>* start) {
  const int n = P.times().size();
  require(anchor >= 0 && anchor < n, ErrorKind::InvalidArgument, "picard_solve: anchor outside the time grid");
  require(data.size() == P.grid().size(), ErrorKind::InvalidArgument, "picard_solve: data size mismatch");
  PicardResult res;
  res.traj.times = P.times();
  if (start) {
    require(static_cast<int>(start->size()) == n, ErrorKind::InvalidArgument, "picard_solve: bad starting iterate");
    res.traj.h = *start;
  } else {
    res.traj.h.assign(n, data);
  }
  if (n == 1) {
    res.traj.h[0] = data;
    res.log.converged = true;
    return res;
  }
  const SolverConfig& cfg = P.config();
  for (int it = 0; it < cfg.max_iters; ++it) {
    std::vector<Vec> next = apply_map(P, res.traj.h, data, anchor);
    double delta = 0.0;
    for (int j = 0; j < n; ++j) delta = std::max(delta, sup_diff(next[j], res.traj.h[j]));
    if (!res.log.deltas.empty() && res.log.deltas.back() > 0.0)
      res.log.ratios.push_back(delta / res.log.deltas.back());
    res.log.deltas.push_back(delta);
    res.traj.h.swap(next);
    res.log.iterations = it + 1;
    if (delta < cfg.picard_tol) {
      res.log.converged = true;
      break;
    }
  }
  const std::vector<Vec> again = apply_map(P, res.traj.h, data, anchor);
  for (int j = 0; j < n; ++j) res.log.residual = std::max(res.log.residual, sup_diff(again[j], res.traj.h[j]));
  return res;
}

PicardResult solve_cauchy(const Propagator& P, const DistributionField& F_in, const std::vector<Vec>* start) {
  require(F_in.grid == P.grid(), ErrorKind::InvalidArgument, "solve_cauchy: data grid differs from the solver grid");
  require(F_in.frame == Frame::Comoving || F_in.t == 0.0, ErrorKind::InvalidArgument,
          "solve_cauchy: data must be given at t = 0");
  const double nu = P.nu_bar();
  require(4.0 * nu < 1.0, ErrorKind::Domain,
          "solve_cauchy: certified nu = " + std::to_string(nu) + " violates nu < 1/4");
  double dist = 0.0;
  for (double x : F_in.h) dist = std::max(dist, std::abs(x - 1.0));
  require(dist < eps_max(nu), ErrorKind::Domain,
          "solve_cauchy: |F_in - M(0)| = " + std::to_string(dist) + " is not below (1 - 4 nu)^2 / (8 nu) = " +
              std::to_string(eps_max(nu)));
  return picard_solve(P, F_in.h, P.times().middle(), start);
}

std::vector<Vec> collision_history(const Propagator& P, const Trajectory& G) {
  const int n = P.times().size();
  std::vector<Vec> g(n);
  for (int j = 0; j < n; ++j) g[j] = P.integrand(j, G.h[j]);
  if (n == 1) {
    g[0].assign(g[0].size(), 0.0);
    return g;
  }
  P.cumulate(g);
  const Vec I0 = g[P.times().middle()];
  for (auto& v : g)
    for (std::size_t i = 0; i < v.size(); ++i) v[i] -= I0[i];
  return g;
}

PositivityVerdict check_positivity(const Trajectory& traj, double r, double tol) {
  PositivityVerdict v;
  v.lo = 1.0 - r - tol;
  v.hi = 1.0 + r + tol;
  double worst = 0.0;
  for (std::size_t j = 0; j < traj.h.size(); ++j) {
    for (std::size_t i = 0; i < traj.h[j].size(); ++i) {
      const double x = traj.h[j][i];
      const double excess = std::max(v.lo - x, x - v.hi);
      if (!(excess <= worst) || std::isnan(x)) {
        worst = std::isnan(x) ? INFINITY : excess;
        v.ok = false;
        v.worst_node = static_cast<int>(j);
        v.worst_index = i;
        v.worst_value = x;
      }
    }
  }
  if (!v.ok) {
    std::ostringstream os;
    os << "h = " << v.worst_value << " at time node " << v.worst_node << ", grid node " << v.worst_index
       << " lies outside [" << v.lo << ", " << v.hi << "]";
    v.message = os.str();
  }
  return v;
}

StabilityReport stability_pair(const Propagator& P, const Trajectory& a, const Trajectory& b, const Vec& in_a,
                               const Vec& in_b, double mu_bar, double tol) {
  StabilityReport s;
  s.data_distance = sup_diff(in_a, in_b);
  for (std::size_t i = 0; i < in_a.size(); ++i)
    s.eps = std::max({s.eps, std::abs(in_a[i] - 1.0), std::abs(in_b[i] - 1.0)});
  for (std::size_t j = 0; j < a.h.size(); ++j) s.measured = std::max(s.measured, sup_diff(a.h[j], b.h[j]));
  s.bound_lipschitz = s.data_distance * lipschitz_factor(P.nu_bar(), s.eps);
  double bound = s.bound_lipschitz;
  s.gronwall_available = P.kernel().beta <= 0.0;
  if (s.gronwall_available) {
    s.bound_gronwall = s.data_distance * std::exp(4.0 * mu_bar);
    bound = std::min(bound, s.bound_gronwall);
  }
  s.ok = s.measured <= bound + tol;
  return s;
}

std::vector<NodeDiagnostics> run_diagnostics(const Propagator& P, const Trajectory& traj) {
  std::vector<NodeDiagnostics> out;
  for (int j = 0; j < static_cast<int>(traj.h.size()); ++j) {
    NodeDiagnostics d;
    d.t = traj.times.t[j];
    const DistributionField f = traj.field(P.grid(), P.ref().params(), j);
    d.moments = moments(f);
    const auto e = P.entropy_at(j, traj.h[j]);
    d.H = e.H;
    d.entropy_production = e.production;
    d.sup_dev = deterministic_max(f.h.size(), [&](std::size_t i) { return std::abs(f.h[i] - 1.0); });
    out.push_back(std::move(d));
  }
  return out;
}

}  // namespace bz
