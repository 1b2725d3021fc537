#include <doctest.h>

#include <numbers>
#include <random>

#include "boltzscat/collision.hpp"
#include "boltzscat/special.hpp"
#include "support.hpp"

using namespace bz;
using std::numbers::pi;

namespace {

const double kY[2] = {0.3, -0.2};
const double kT = 0.4;

// Local Maxwellian near, but not equal to, the frame of the unit reference at (kY, kT).
std::function<double(const double*)> shifted_local(const GlobalMaxwellian& M) {
  const HydroFields hy = M.hydro(kY, kT);
  return [hy](const double* v) {
    const double th = 1.1 * hy.theta;
    const double r2 = (v[0] - hy.u[0] - 0.1) * (v[0] - hy.u[0] - 0.1) + (v[1] - hy.u[1]) * (v[1] - hy.u[1]);
    return hy.rho / (2.0 * pi * th) * std::exp(-r2 / (2.0 * th));
  };
}

double bmm_residual(int n) {
  const GlobalMaxwellian M(Params::unit(2));
  const CollisionOperator op(KernelSpec::constant(2, 0.0), n, 5.0, 16, 4);
  const LocalCollision lc(op, M, kY, kT);
  const Vec h = lc.relative(shifted_local(M));
  const auto T = lc.collide(h, h);
  double res = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    res = std::max(res, std::abs(T.gain[i] - T.loss[i]));
    scale = std::max(scale, T.loss[i]);
  }
  return res / scale;
}

}  // namespace

TEST_CASE("post-collision velocities conserve momentum and energy") {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> n(0.0, 2.0);
  double worst = 0.0;
  for (int D : {2, 3})
    for (int s = 0; s < 1000; ++s) {
      double v[3], w[3], om[3], vp[3], wp[3], norm = 0.0;
      for (int i = 0; i < D; ++i) {
        v[i] = n(rng);
        w[i] = n(rng);
        om[i] = n(rng);
        norm += om[i] * om[i];
      }
      for (int i = 0; i < D; ++i) om[i] /= std::sqrt(norm);
      post_collision(D, v, w, om, vp, wp);
      double e0 = 0.0, e1 = 0.0, r0 = 0.0, r1 = 0.0;
      for (int i = 0; i < D; ++i) {
        worst = std::max(worst, std::abs(vp[i] + wp[i] - v[i] - w[i]));
        e0 += v[i] * v[i] + w[i] * w[i];
        e1 += vp[i] * vp[i] + wp[i] * wp[i];
        r0 += (v[i] - w[i]) * (v[i] - w[i]);
        r1 += (vp[i] - wp[i]) * (vp[i] - wp[i]);
      }
      worst = std::max(worst, std::abs(e1 - e0) / e0);
      CHECK(r1 == doctest::Approx(r0).epsilon(1e-12));
    }
  CHECK(worst <= 1e-13);
}

TEST_CASE("kernel specs") {
  const KernelSpec k = KernelSpec::constant(3, -0.5, 2.0);
  CHECK(k.bbar == doctest::Approx(8.0 * pi).epsilon(1e-14));
  const KernelSpec flat = KernelSpec::table(2, 0.0, {-1.0, 0.0, 1.0}, {1.5, 1.5, 1.5});
  CHECK(flat.bbar == doctest::Approx(3.0 * pi).epsilon(1e-10));
  const KernelSpec ramp = KernelSpec::table(2, 0.0, {-1.0, 1.0}, {0.0, 2.0});
  CHECK(ramp.bhat(0.5) == doctest::Approx(1.5));
  // Mean of 1 + cos over the circle is 1.
  CHECK(ramp.compute_bbar() == doctest::Approx(2.0 * pi).epsilon(1e-8));
  CHECK_THROWS_AS(KernelSpec::constant(2, -1.0).check(), Error);
  CHECK_THROWS_AS(KernelSpec::constant(2, 2.5).check(), Error);
  CHECK_THROWS_AS(KernelSpec::table(2, 0.0, {-1.0, 1.0}, {1.0, -0.1}).check(), Error);
}

TEST_CASE("gain equals loss exactly for the grid Maxwellian") {
  for (int D : {2, 3})
    for (int order : {2, 4}) {
      const int n = D == 2 ? 12 : 8;
      const CollisionOperator op(KernelSpec::constant(D, -0.5), n, 5.0, D == 2 ? 16 : 6, order);
      const std::size_t N = op.node_count();
      Vec h(N * 2, 1.0), g(N * 2), l(N * 2);
      op.apply(h.data(), h.data(), 2, g.data(), l.data());
      double worst = 0.0;
      for (std::size_t i = 0; i < g.size(); ++i) worst = std::max(worst, std::abs(g[i] - l[i]) / l[i]);
      CAPTURE(D);
      CAPTURE(order);
      CHECK(worst < 1e-12);
    }
}

TEST_CASE("symmetric fast path matches the general bilinear path") {
  const CollisionOperator op(KernelSpec::constant(2, 0.0), 12, 5.0, 16, 4);
  const std::size_t N = op.node_count(), nc = 3;
  Vec h(N * nc);
  for (std::size_t i = 0; i < h.size(); ++i) h[i] = 1.0 + 0.2 * std::sin(0.37 * i) * std::cos(0.011 * i);
  const Vec copy = h;
  Vec g1(h.size()), l1(h.size()), g2(h.size()), l2(h.size());
  op.apply(h.data(), h.data(), nc, g1.data(), l1.data());
  op.apply(h.data(), copy.data(), nc, g2.data(), l2.data());
  for (std::size_t i = 0; i < h.size(); ++i) {
    CHECK(g1[i] == doctest::Approx(g2[i]).epsilon(1e-12));
    CHECK(l1[i] == doctest::Approx(l2[i]).epsilon(1e-12));
  }
}

TEST_CASE("B(M, M) residual in a mismatched frame shrinks under refinement") {
  const double r12 = bmm_residual(12), r16 = bmm_residual(16), r24 = bmm_residual(24);
  CHECK(r16 <= 1e-3);
  CHECK(r16 < r12);
  CHECK(r24 < r16);
}

TEST_CASE("weak-form moments of a perturbed field are small against their scale") {
  const GlobalMaxwellian M(Params::unit(2));
  const CollisionOperator op(KernelSpec::constant(2, 0.0), 16, 5.0, 16, 4);
  const LocalCollision lc(op, M, kY, kT);
  const Vec h = lc.relative([&](const double* v) {
    return M.eval(v, kY, kT) * (1.0 + 0.1 * std::cos(0.7 * v[0] - 0.4 * v[1] + 0.3));
  });
  const auto wm = lc.weak_form_moments(h);
  for (std::size_t k = 0; k < wm.residual.size(); ++k) CHECK(std::abs(wm.residual[k]) <= 1e-3 * wm.scale[k]);
}

TEST_CASE("entropy production: zero for Maxwellians, negative for a bimaxwellian") {
  const GlobalMaxwellian M(Params::unit(2));
  for (double beta : {-0.5, 0.0, 1.0}) {
    CAPTURE(beta);
    const CollisionOperator op(KernelSpec::constant(2, beta), 16, 5.0, 16, 4);
    const LocalCollision lm(op, M, kY, kT);
    const Vec hm = lm.relative([&](const double* v) { return M.eval(v, kY, kT); });
    CHECK(lm.entropy_production(hm) <= 1e-6 * lm.entropy_scale(hm));

    HydroFields guess;
    guess.rho = 1.0;
    guess.u = Eigen::VectorXd::Zero(2);
    guess.theta = 1.0;
    auto loc = [](const double* v) {
      const double r2 = (v[0] - 0.4) * (v[0] - 0.4) + (v[1] + 0.2) * (v[1] + 0.2);
      return 0.7 / (2.0 * pi * 1.3) * std::exp(-r2 / 2.6);
    };
    const LocalCollision la = LocalCollision::adapted(op, loc, guess);
    CHECK(la.local().u[0] == doctest::Approx(0.4).epsilon(1e-4));
    CHECK(la.local().theta == doctest::Approx(1.3).epsilon(1e-4));
    const Vec hl = la.relative(loc);
    CHECK(std::abs(la.entropy_production(hl)) <= 1e-6 * la.entropy_scale(hl));

    auto bimax = [](const double* v) {
      return 0.5 / (2.0 * pi) *
             (std::exp(-0.5 * ((v[0] - 2.0) * (v[0] - 2.0) + v[1] * v[1])) +
              std::exp(-0.5 * ((v[0] + 2.0) * (v[0] + 2.0) + v[1] * v[1])));
    };
    const LocalCollision lb = LocalCollision::adapted(op, bimax, guess);
    const Vec hb = lb.relative(bimax);
    CHECK(lb.entropy_production(hb) < -1e-3 * lb.entropy_scale(hb));
  }
}

TEST_CASE("discrete loss rate of M matches the closed form") {
  const GlobalMaxwellian M(Params::unit(2));
  for (double beta : {-0.5, 0.0, 1.0}) {
    const KernelSpec k = KernelSpec::constant(2, beta);
    const CollisionOperator op(k, 16, 5.0, 16, 4);
    const LocalCollision lc(op, M, kY, kT);
    const Vec A = lc.loss_rate(Vec(op.node_count(), 1.0));
    double worst = 0.0;
    for (std::size_t i = 0; i < op.node_count(); ++i) {
      const double* v = lc.velocity(i);
      double xi2 = 0.0;
      for (int d = 0; d < 2; ++d) xi2 += op.node_coords()[i * 2 + d] * op.node_coords()[i * 2 + d];
      if (xi2 > 9.0) continue;
      worst = std::max(worst, bzt::rel(A[i], loss_rate_maxwellian(M, k, v, kY, kT)));
    }
    CAPTURE(beta);
    // The |z|^beta singularity (beta < 0) and growth (beta > 0) cost accuracy on this grid.
    CHECK(worst < (beta == 0.0 ? 2e-3 : 2e-2));
  }
}
