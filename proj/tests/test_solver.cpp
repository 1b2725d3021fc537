#include <doctest.h>

#include <cmath>
#include <numbers>

#include "boltzscat/solver.hpp"
#include "support.hpp"

using namespace bz;

namespace {

// Small grids: these tests check structure, not accuracy.
struct Small {
  KernelSpec k = KernelSpec::constant(2, 0.0);
  Params p;
  PhaseGrid g;
  CollisionSetup cs;
  SolverConfig cfg;
  explicit Small(double margin = 0.4, int Nt = 7) {
    p = Params::unit(2);
    p.m = admissible_mass(p, k, margin);
    g = PhaseGrid::around(GlobalMaxwellian(p), 10, 10);
    cs.n_xi = cs.n_eta = 10;
    cs.n_omega = 12;
    cfg.Nt = Nt;
  }
  Propagator propagator() const { return Propagator(p, k, g, cs, cfg); }
};

}  // namespace

TEST_CASE("time grid nodes and the spectral integration matrix") {
  Params p = Params::unit(2);
  p.a = 2.0;
  const GlobalMaxwellian M(p);
  const TimeGrid tg = TimeGrid::make(M, std::numeric_limits<double>::infinity(), 9);
  CHECK(tg.size() == 9);
  CHECK(tg.t[tg.middle()] == 0.0);
  CHECK(std::isinf(tg.t.front()));
  CHECK(std::isinf(tg.t.back()));
  CHECK(tg.tau.back() == doctest::Approx(0.5 * std::numbers::pi));
  for (int j = 0; j < tg.size(); ++j) CHECK(tg.C(0, j) == 0.0);
  // C integrates polynomials of degree < n exactly.
  Vec g(tg.size());
  for (int j = 0; j < tg.size(); ++j) g[j] = 1.0 + tg.tau[j] - 3.0 * std::pow(tg.tau[j], 5);
  auto prim = [](double s) { return s + 0.5 * s * s - 0.5 * std::pow(s, 6); };
  for (int j = 0; j < tg.size(); ++j) {
    double s = 0.0;
    for (int k = 0; k < tg.size(); ++k) s += tg.C(j, k) * g[k];
    CHECK(s == doctest::Approx(prim(tg.tau[j]) - prim(tg.tau[0])).epsilon(1e-11));
  }
  const TimeGrid fin = TimeGrid::make(M, 3.0, 5);
  CHECK(fin.t.front() == doctest::Approx(-3.0));
  CHECK(fin.t.back() == doctest::Approx(3.0));
}

TEST_CASE("soft kernels integrate in the clock variable") {
  Params p = Params::unit(2);
  p.a = 1.4;
  p.b = 0.3;
  p.c = 0.7;
  const GlobalMaxwellian M(p);
  auto weighted = [](const TimeGrid& g, const Vec& kappa) {
    double s = 0.0;
    const int n = g.size();
    for (int k = 0; k < n; ++k)
      s += g.C(n - 1, k) * kappa[k] * (1.0 + 0.5 * std::sin(g.tau[k]) + 0.3 * std::cos(2.0 * g.tau[k]));
    return s;
  };
  const TimeGrid c = TimeGrid::make(M, 3.0, 41, 0.75);
  CHECK(c.t.front() == -3.0);
  CHECK(c.t.back() == 3.0);
  CHECK(c.t[c.middle()] == 0.0);
  for (double k : c.kappa) CHECK(k == 1.0);
  for (int j = 1; j + 1 < c.size(); ++j) CHECK(c.t[j] > c.t[j - 1]);
  // At a short window the tau grid is fine; the two must agree.
  const TimeGrid tg = TimeGrid::make(M, 3.0, 41, 1.0);
  Vec kt(tg.size());
  for (int j = 0; j < tg.size(); ++j) kt[j] = M.theta_power_dt_dtau(tg.tau[j], 0.75);
  CHECK(bzt::rel(weighted(c, c.kappa), weighted(tg, kt)) < 1e-10);
  // Very long window: the endpoint weight is near singular in tau, not in the clock.
  const TimeGrid c17 = TimeGrid::make(M, 1.4e9, 17, 0.75), c41 = TimeGrid::make(M, 1.4e9, 41, 0.75);
  CHECK(bzt::rel(weighted(c17, c17.kappa), weighted(c41, c41.kappa)) < 1e-4);
  CHECK_THROWS_AS(TimeGrid::make(M, std::numeric_limits<double>::infinity(), 9, 0.75), Error);
}

TEST_CASE("the global Maxwellian is a fixed point") {
  const Small s;
  const Propagator P = s.propagator();
  CHECK(4.0 * P.nu_bar() == doctest::Approx(0.4));
  const PicardResult r = solve_cauchy(P, reference_field(s.g, s.p, 0.0, Frame::Comoving));
  CHECK(r.log.converged);
  for (const Vec& h : r.traj.h)
    for (double v : h) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("perturbed Cauchy solve contracts at the certified rate") {
  const Small s;
  const Propagator P = s.propagator();
  Perturbation pp;
  pp.eps = 0.3;
  pp.seed = 3;
  pp.kmax = 2.5;
  const DistributionField F = perturbed_field(s.g, s.p, pp);
  const PicardResult r = solve_cauchy(P, F);
  REQUIRE(r.log.converged);
  const double rr = r_of_eps(P.nu_bar(), 0.3);
  CHECK(r.log.max_ratio() <= 4.0 * P.nu_bar() * (1.0 + rr) + P.config().slack);
  // The middle node reproduces the data.
  for (std::size_t i = 0; i < F.h.size(); ++i) CHECK(r.traj.h[P.times().middle()][i] == doctest::Approx(F.h[i]));
  // Positivity: eps = 0.3 <= 1 - 6 nu = 0.4.
  CHECK(0.3 <= 1.0 - 6.0 * P.nu_bar());
  CHECK(check_positivity(r.traj, rr, 1e-9).ok);
  const auto diag = run_diagnostics(P, r.traj);
  CHECK(diag.size() == static_cast<std::size_t>(P.times().size()));
  for (const auto& d : diag) CHECK(d.sup_dev <= rr + 1e-9);

  // Warm start from the converged trajectory stops at once.
  const PicardResult w = solve_cauchy(P, F, &r.traj.h);
  CHECK(w.log.iterations <= 2);

  const PicardResult r2 = solve_cauchy(P, F);
  CHECK(r2.traj.h == r.traj.h);
}

TEST_CASE("admissibility is enforced") {
  Small big(0.4);
  big.p.m *= 2.6;  // 4 nu = 1.04
  CHECK_THROWS_AS(solve_cauchy(big.propagator(), reference_field(big.g, big.p, 0.0, Frame::Comoving)), Error);
  const Small s;
  const Propagator P = s.propagator();
  DistributionField F = reference_field(s.g, s.p, 0.0, Frame::Comoving);
  for (double& h : F.h) h = 1.0 + 1.01 * eps_max(P.nu_bar());
  CHECK_THROWS_AS(solve_cauchy(P, F), Error);
}

TEST_CASE("positivity sandwich reports the worst node") {
  Trajectory t;
  t.h = {Vec{1.0, 0.9}, Vec{0.6, 1.1}};
  const PositivityVerdict ok = check_positivity(t, 0.5, 1e-9);
  CHECK(ok.ok);
  CHECK(ok.lo == doctest::Approx(0.5));
  t.h[1][0] = 0.2;
  t.h[0][1] = 1.6;
  const PositivityVerdict bad = check_positivity(t, 0.5, 1e-9);
  CHECK_FALSE(bad.ok);
  CHECK(bad.worst_node == 1);
  CHECK(bad.worst_index == 0);
  CHECK(bad.worst_value == 0.2);
  CHECK_FALSE(bad.message.empty());
}

TEST_CASE("stability of two nearby solves") {
  const Small s;
  const Propagator P = s.propagator();
  Perturbation pa, pb;
  pa.eps = 0.2;
  pa.seed = 1;
  pa.kmax = 2.0;
  pb = pa;
  pb.seed = 2;
  pb.eps = 0.15;
  const DistributionField A = perturbed_field(s.g, s.p, pa), B = perturbed_field(s.g, s.p, pb);
  const PicardResult ra = solve_cauchy(P, A), rb = solve_cauchy(P, B);
  const ConstantPair mu = mu_of_M(P.ref(), P.kernel(), 256, 1);
  const StabilityReport rep = stability_pair(P, ra.traj, rb.traj, A.h, B.h, mu.bound, 1e-8);
  CHECK(rep.ok);
  CHECK(rep.gronwall_available);
  CHECK(rep.measured <= rep.bound_lipschitz);
  CHECK(rep.measured <= rep.bound_gronwall);
  CHECK(rep.measured >= rep.data_distance - 1e-12);
}
