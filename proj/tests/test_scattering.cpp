#include <doctest.h>

#include <random>

#include "boltzscat/scattering.hpp"
#include "support.hpp"

using namespace bz;

namespace {

struct Small {
  KernelSpec k;
  Params p;
  PhaseGrid g;
  CollisionSetup cs;
  SolverConfig cfg;
  explicit Small(double beta = 0.0, double T = std::numeric_limits<double>::infinity()) {
    k = KernelSpec::constant(2, beta);
    p = Params::unit(2);
    p.m = admissible_mass(p, k, 0.4);
    g = PhaseGrid::around(GlobalMaxwellian(p), 10, 10);
    cs.n_xi = cs.n_eta = 10;
    cs.n_omega = 12;
    cfg.Nt = 7;
    cfg.T = T;
  }
  Propagator propagator() const { return Propagator(p, k, g, cs, cfg); }
  DistributionField perturbed(double eps, std::uint64_t seed, double t) const {
    Perturbation pp;
    pp.eps = eps;
    pp.seed = seed;
    pp.kmax = 2.5;
    DistributionField f = perturbed_field(g, p, pp);
    f.t = t;
    return f;
  }
};

const double kInf = std::numeric_limits<double>::infinity();

}  // namespace

TEST_CASE("fit recovers random Maxwellian parameters") {
  std::mt19937_64 rng(17);
  for (int s = 0; s < 20; ++s) {
    const int D = s % 3 == 0 ? 3 : 2;
    const Params p = bzt::random_params(rng, D, 0.4 + 0.05 * s);
    const FitResult f = fit_global_maxwellian(GlobalMaxwellian(p).invariants(), D);
    REQUIRE(f.converged);
    CHECK(std::abs(f.params.m - p.m) < 1e-8);
    CHECK(std::abs(f.params.a - p.a) < 1e-8);
    CHECK(std::abs(f.params.b - p.b) < 1e-8);
    CHECK(std::abs(f.params.c - p.c) < 1e-8);
    CHECK((f.params.x0 - p.x0).norm() < 1e-8);
    CHECK((f.params.v0 - p.v0).norm() < 1e-8);
    CHECK((f.params.B - p.B).norm() < 1e-8);
  }
}

TEST_CASE("fit of an isotropic centred moment vector") {
  const Params p = Params::unit(3, 2.0);
  const FitResult f = fit_global_maxwellian(GlobalMaxwellian(p).invariants(), 3);
  CHECK(f.converged);
  CHECK(f.params.b == doctest::Approx(0.0).epsilon(1e-10));
  CHECK(f.params.B.norm() < 1e-10);
  CHECK(f.params.x0.norm() < 1e-10);
  CHECK(f.params.v0.norm() < 1e-10);
  Vec bad = GlobalMaxwellian(p).invariants();
  bad[0] = -1.0;
  CHECK_THROWS_AS(fit_global_maxwellian(bad, 3), Error);
}

TEST_CASE("scattering fixes the reference Maxwellian") {
  const Small s;
  const Propagator P = s.propagator();
  const ScatterResult r = scatter(P, reference_field(s.g, s.p, -kInf, Frame::Comoving));
  CHECK(r.out_dev < 1e-12);
  CHECK(r.output.t == kInf);
  const ConservationReport c = check_scatter_conservation(reference_field(s.g, s.p, -kInf, Frame::Comoving), r.output);
  CHECK(c.max_residual < 1e-12);
}

TEST_CASE("scattering round trips and the H inequality on a coarse grid") {
  const Small s;
  const Propagator P = s.propagator();
  const DistributionField Fm = s.perturbed(0.3, 7, -kInf);
  const ScatterResult fw = scatter(P, Fm);
  CHECK(fw.solve.log.converged);
  CHECK(fw.out_dev <= fw.r + 1e-9);
  const ScatterResult bw = scatter_inverse(P, fw.output);
  CHECK(bw.output.t == -kInf);
  CHECK(weighted_sup_norm(bw.output, Fm) < 1e-6);

  const ScatterResult wi = wave_inverse(P, fw.output, Direction::Plus);
  CHECK(wi.output.t == 0.0);
  const PicardResult cs = solve_cauchy(P, wi.output);
  CHECK(weighted_sup_norm(extract_asymptote(P, cs.traj, Direction::Plus).field, fw.output) < 1e-6);
  CHECK(weighted_sup_norm(extract_asymptote(P, cs.traj, Direction::Minus).field, Fm) < 1e-6);

  const ConservationReport c = check_scatter_conservation(Fm, fw.output);
  CHECK(c.max_residual < 1e-3);
  // The coarse grid does not resolve H to better than a few 1e-6.
  CHECK(check_H_decrease(Fm, fw.output, 1e-4).decreasing);
}

TEST_CASE("scaled Maxwellians give H equality") {
  const Small s;
  const Propagator P = s.propagator();
  DistributionField F = reference_field(s.g, s.p, -kInf, Frame::Comoving);
  for (double& h : F.h) h = 1.1;
  const ScatterResult r = scatter(P, F);
  const HReport h = check_H_decrease(F, r.output, 1e-9);
  CHECK(h.equality);
  CHECK(h.decreasing);
}

TEST_CASE("finite windows carry a tail bound that shrinks with T") {
  const Small s20(0.0, 20.0), s80(0.0, 80.0);
  const Propagator P20 = s20.propagator(), P80 = s80.propagator();
  const DistributionField F = s20.perturbed(0.2, 4, 0.0);
  const Asymptote a20 = extract_asymptote(P20, solve_cauchy(P20, F).traj, Direction::Plus);
  const Asymptote a80 = extract_asymptote(P80, solve_cauchy(P80, F).traj, Direction::Plus);
  CHECK(a20.tail_bound > 0.0);
  CHECK(a80.tail_bound < 0.5 * a20.tail_bound);
  CHECK(a20.field.t == doctest::Approx(20.0));
  const Small sinf;
  const Propagator Pinf = sinf.propagator();
  CHECK(extract_asymptote(Pinf, solve_cauchy(Pinf, F).traj, Direction::Minus).tail_bound == 0.0);
}

TEST_CASE("injectivity and Lipschitz checks") {
  const Small s;
  const Propagator P = s.propagator();
  const DistributionField A = s.perturbed(0.2, 1, -kInf), B = s.perturbed(0.15, 2, -kInf);
  const ScatterResult ra = scatter(P, A), rb = scatter(P, B);
  const double mu = mu_of_M(P.ref(), P.kernel(), 256, 1).bound;
  const InjectivityReport inj = injectivity_bound(P, ra.solve.traj, rb.solve.traj, mu, 1e-8);
  CHECK(inj.ok);
  CHECK(inj.measured.size() == static_cast<std::size_t>(P.times().size()));
  const LipschitzReport lip = lipschitz_check(P.nu_bar(), A.h, B.h, ra.output.h, rb.output.h, 1e-8);
  CHECK(lip.ok);
  CHECK(lip.output_distance <= lip.bound + 1e-8);
  const LipschitzReport same = lipschitz_check(P.nu_bar(), A.h, A.h, ra.output.h, ra.output.h, 0.0);
  CHECK(same.ok);
  CHECK(same.output_distance == 0.0);

  const Small hard(1.0);
  const Propagator Ph = hard.propagator();
  CHECK_THROWS_AS(injectivity_bound(Ph, ra.solve.traj, rb.solve.traj, mu, 1e-8), Error);
}
