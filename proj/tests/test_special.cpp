#include <doctest.h>

#include <cmath>
#include <numbers>

#include "boltzscat/quadrature.hpp"
#include "boltzscat/special.hpp"
#include "support.hpp"

using namespace bz;
using std::numbers::pi;

namespace {

// E|Z|^beta for Z ~ N(0, I_D): trapezoid in u = ln r, which converges geometrically.
double moment_oracle(double beta, int D) {
  const double area = D == 2 ? 2.0 * pi : 4.0 * pi;
  const double h = 1e-3;
  double s = 0.0;
  for (double u = -60.0; u <= 4.0; u += h) {
    const double r = std::exp(u);
    s += std::pow(r, beta + D) * std::exp(-0.5 * r * r);
  }
  return s * h * area / std::pow(2.0 * pi, 0.5 * D);
}

}  // namespace

TEST_CASE("sphere area") {
  CHECK(sphere_area(2) == doctest::Approx(2.0 * pi).epsilon(1e-15));
  CHECK(sphere_area(3) == doctest::Approx(4.0 * pi).epsilon(1e-15));
}

TEST_CASE("a_beta(0) against an independent radial quadrature") {
  for (int D : {2, 3})
    for (double beta : {-0.5, 0.0, 1.0, 2.0}) {
      CAPTURE(D);
      CAPTURE(beta);
      CHECK(bzt::rel(a_beta_zero(beta, D), moment_oracle(beta, D)) < 1e-9);
    }
  CHECK(a_beta_zero(0.0, 2) == 1.0);
  CHECK(a_beta_zero(2.0, 3) == doctest::Approx(3.0).epsilon(1e-14));
}

TEST_CASE("a_beta series agrees with polar quadrature and the beta = 2 identity") {
  for (int D : {2, 3})
    for (double beta : {-0.7, -0.5, 0.5, 1.0})
      for (double w : {0.0, 0.3, 1.7, 4.0, 9.0}) {
        CAPTURE(D);
        CAPTURE(beta);
        CAPTURE(w);
        CHECK(bzt::rel(a_beta(w, beta, D), a_beta_quadrature(w, beta, D)) < 1e-9);
      }
  for (double w : {0.0, 0.5, 3.0}) CHECK(a_beta(w, 2.0, 3) == doctest::Approx(w * w + 3.0).epsilon(1e-12));
  CHECK(a_beta(0.0, 0.0, 2) == 1.0);
}

TEST_CASE("a_beta is monotone in |w| with the sign of beta") {
  double prev_hard = a_beta(0.0, 1.0, 2), prev_soft = a_beta(0.0, -0.5, 2);
  for (double w = 0.25; w < 8.0; w += 0.25) {
    const double hard = a_beta(w, 1.0, 2), soft = a_beta(w, -0.5, 2);
    CHECK(hard > prev_hard);
    CHECK(soft < prev_soft);
    prev_hard = hard;
    prev_soft = soft;
  }
}

TEST_CASE("theta power integrals and tails") {
  // p = 1 and p = 2 have elementary antiderivatives.
  const double a = 1.7, b = 0.4, c = 0.9, d = a * c - b * b;
  CHECK(bzt::rel(theta_power_integral(a, b, c, 1.0), pi / std::sqrt(d)) < 1e-12);
  CHECK(bzt::rel(theta_power_integral(a, b, c, 2.0), pi * a / (2.0 * std::pow(d, 1.5))) < 1e-12);
  const ThetaTails half = theta_power_tails(a, b, c, 1.5, 0.0);
  CHECK(bzt::rel(half.left + half.right, theta_power_integral(a, b, c, 1.5)) < 1e-10);
  for (double T : {0.5, 3.0, 40.0}) {
    const ThetaTails t = theta_power_tails(1.0, 0.0, 1.0, 1.0, T);
    CHECK(bzt::rel(t.right, 0.5 * pi - std::atan(T)) < 1e-9);
    CHECK(bzt::rel(t.left, t.right) < 1e-12);
  }
  // Tail ~ 1/T for p = 1: doubling T halves it asymptotically.
  const double r1 = theta_power_tails(a, b, c, 1.0, 1e4).right, r2 = theta_power_tails(a, b, c, 1.0, 2e4).right;
  CHECK(r2 / r1 == doctest::Approx(0.5).epsilon(1e-3));
}

TEST_CASE("cell average of |z|^beta") {
  CHECK(cell_average_power(0.0, 2, 0.3) == doctest::Approx(1.0));
  CHECK(cell_average_power(2.0, 2, 0.3) == doctest::Approx(0.09 / 6.0).epsilon(1e-10));
  CHECK(cell_average_power(2.0, 3, 0.3) == doctest::Approx(0.09 / 4.0).epsilon(1e-10));
}

TEST_CASE("Gauss-Legendre exactness and adaptive integration") {
  for (int n : {1, 3, 8, 20}) {
    const Rule1D r = gauss_legendre(n);
    for (int k = 0; k <= 2 * n - 1; ++k) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += r.weights[i] * std::pow(r.nodes[i], k);
      CHECK(s == doctest::Approx(k % 2 ? 0.0 : 2.0 / (k + 1)).epsilon(1e-13));
    }
  }
  CHECK(adaptive_integrate([](double x) { return std::exp(-x * x); }, -8.0, 8.0, 1e-13) ==
        doctest::Approx(std::sqrt(pi)).epsilon(1e-12));
  CHECK(adaptive_integrate([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, 1e-10) ==
        doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("uniform nodes and trapezoid weights") {
  const Vec x = uniform_nodes(5, 2.0), w = trapezoid_weights(5, 2.0);
  CHECK(x.front() == -2.0);
  CHECK(x.back() == 2.0);
  double s = 0.0;
  for (double v : w) s += v;
  CHECK(s == doctest::Approx(4.0));
  CHECK(w.front() == doctest::Approx(0.5));
}

TEST_CASE("sphere rules: total area and isotropic second moments") {
  for (int D : {2, 3}) {
    const SphereRule r = sphere_rule(D, 8);
    double s = 0.0;
    std::vector<double> second(D * D, 0.0);
    for (std::size_t q = 0; q < r.count(); ++q) {
      s += r.weights[q];
      for (int i = 0; i < D; ++i)
        for (int j = 0; j < D; ++j) second[i * D + j] += r.weights[q] * r.points[q * D + i] * r.points[q * D + j];
    }
    CHECK(s == doctest::Approx(sphere_area(D)).epsilon(1e-13));
    for (int i = 0; i < D; ++i)
      for (int j = 0; j < D; ++j)
        CHECK(second[i * D + j] == doctest::Approx(i == j ? sphere_area(D) / D : 0.0).epsilon(1e-12));
    const FoldedSphere f = fold_antipodes(r);
    double t = 0.0;
    for (std::size_t q = 0; q < f.count(); ++q) t += f.weights[q] + f.antipodal_weights[q];
    CHECK(t == doctest::Approx(s).epsilon(1e-13));
    CHECK(f.count() == r.count() / 2);
  }
}

TEST_CASE("Halton points and Chebyshev-Lobatto nodes") {
  double p[2];
  halton(1, 2, p);
  CHECK(p[0] == 0.5);
  CHECK(p[1] == doctest::Approx(1.0 / 3.0));
  halton(2, 2, p);
  CHECK(p[0] == 0.25);
  CHECK(p[1] == doctest::Approx(2.0 / 3.0));
  const Vec c = chebyshev_lobatto(5);
  REQUIRE(c.size() == 5);
  CHECK(c[0] == -1.0);
  CHECK(c[2] == doctest::Approx(0.0));
  CHECK(c[3] == doctest::Approx(std::sqrt(0.5)));
  CHECK(c[4] == 1.0);
}

TEST_CASE("barycentric interpolation reproduces polynomials") {
  const Vec x = chebyshev_lobatto(7), bw = barycentric_weights(x);
  auto poly = [](double t) { return 1.0 - 2.0 * t + 0.5 * std::pow(t, 4) + 0.25 * std::pow(t, 6); };
  Vec l(x.size());
  for (double t : {-0.93, -0.2, 0.0, 0.41, 0.999}) {
    lagrange_basis(x, bw, t, l.data());
    double s = 0.0, one = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
      s += l[k] * poly(x[k]);
      one += l[k];
    }
    CHECK(s == doctest::Approx(poly(t)).epsilon(1e-13));
    CHECK(one == doctest::Approx(1.0).epsilon(1e-14));
  }
}
