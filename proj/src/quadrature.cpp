#include "boltzscat/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace bz {

Rule1D gauss_legendre(int n) {
  require(n >= 1, ErrorKind::InvalidArgument, "gauss_legendre: n must be >= 1");
  Rule1D r;
  r.nodes.resize(n);
  r.weights.resize(n);
  auto legendre = [n](double x, double& pn, double& dpn) {
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = pk;
    }
    pn = p1;
    dpn = n * (x * p1 - p0) / (x * x - 1.0);
  };
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double pn = 0.0, dpn = 1.0;
    for (int it = 0; it < 100; ++it) {
      legendre(x, pn, dpn);
      const double dx = pn / dpn;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    legendre(x, pn, dpn);
    const double w = 2.0 / ((1.0 - x * x) * dpn * dpn);
    r.nodes[i] = -x;
    r.nodes[n - 1 - i] = x;
    r.weights[i] = w;
    r.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) r.nodes[n / 2] = 0.0;
  return r;
}

namespace {

const Rule1D& panel_rule() {
  static const Rule1D r = gauss_legendre(10);
  return r;
}

double panel(const std::function<double(double)>& f, double a, double b) {
  const Rule1D& r = panel_rule();
  const double h = 0.5 * (b - a), c = 0.5 * (a + b);
  double s = 0.0;
  for (std::size_t i = 0; i < r.nodes.size(); ++i) s += r.weights[i] * f(c + h * r.nodes[i]);
  return s * h;
}

double refine(const std::function<double(double)>& f, double a, double b, double whole, double rtol,
              double atol, int depth) {
  const double m = 0.5 * (a + b);
  const double left = panel(f, a, m), right = panel(f, m, b);
  const double both = left + right;
  if (depth <= 0 || std::abs(both - whole) <= std::max(atol, rtol * std::abs(both))) return both;
  return refine(f, a, m, left, rtol, 0.5 * atol, depth - 1) +
         refine(f, m, b, right, rtol, 0.5 * atol, depth - 1);
}

}  // namespace

double adaptive_integrate(const std::function<double(double)>& f, double a, double b, double rtol,
                          double atol, int max_depth) {
  if (a == b) return 0.0;
  // Eight starting panels keep narrow features from being missed by the first estimate.
  const int start = 8;
  double total = 0.0;
  for (int k = 0; k < start; ++k) {
    const double lo = a + (b - a) * k / start, hi = a + (b - a) * (k + 1) / start;
    total += refine(f, lo, hi, panel(f, lo, hi), rtol, atol / start, max_depth);
  }
  return total;
}

Vec uniform_nodes(int n, double half) {
  Vec x(n);
  for (int i = 0; i < n; ++i) x[i] = -half + 2.0 * half * i / (n - 1);
  return x;
}

Vec trapezoid_weights(int n, double half) {
  const double h = 2.0 * half / (n - 1);
  Vec w(n, h);
  w.front() = w.back() = 0.5 * h;
  return w;
}

SphereRule sphere_rule(int D, int n) {
  require(D == 2 || D == 3, ErrorKind::InvalidArgument, "sphere_rule: D must be 2 or 3");
  require(n >= 2, ErrorKind::InvalidArgument, "sphere_rule: need at least 2 nodes");
  SphereRule s;
  s.D = D;
  const double pi = std::numbers::pi;
  if (D == 2) {
    for (int k = 0; k < n; ++k) {
      const double phi = 2.0 * pi * (k + 0.5) / n;
      s.points.push_back(std::cos(phi));
      s.points.push_back(std::sin(phi));
      s.weights.push_back(2.0 * pi / n);
    }
    return s;
  }
  const Rule1D gl = gauss_legendre(n);
  const int nphi = 2 * n;
  for (int i = 0; i < n; ++i) {
    const double mu = gl.nodes[i], st = std::sqrt(std::max(0.0, 1.0 - mu * mu));
    for (int k = 0; k < nphi; ++k) {
      const double phi = 2.0 * pi * (k + 0.5) / nphi;
      s.points.push_back(st * std::cos(phi));
      s.points.push_back(st * std::sin(phi));
      s.points.push_back(mu);
      s.weights.push_back(gl.weights[i] * 2.0 * pi / nphi);
    }
  }
  return s;
}

FoldedSphere fold_antipodes(const SphereRule& rule) {
  FoldedSphere f;
  f.D = rule.D;
  const std::size_t n = rule.count();
  const int D = rule.D;
  std::vector<bool> used(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    if (used[i]) continue;
    used[i] = true;
    double anti = 0.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      if (used[j]) continue;
      double d = 0.0;
      for (int k = 0; k < D; ++k) d += std::abs(rule.points[i * D + k] + rule.points[j * D + k]);
      if (d < 1e-12) {
        used[j] = true;
        anti = rule.weights[j];
        break;
      }
    }
    for (int k = 0; k < D; ++k) f.points.push_back(rule.points[i * D + k]);
    f.weights.push_back(rule.weights[i]);
    f.antipodal_weights.push_back(anti);
  }
  return f;
}

void halton(std::size_t index, int dim, double* out) {
  static const int primes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  require(dim <= 12, ErrorKind::InvalidArgument, "halton: at most 12 dimensions");
  for (int d = 0; d < dim; ++d) {
    const int p = primes[d];
    double f = 1.0, r = 0.0;
    std::size_t i = index;
    while (i > 0) {
      f /= p;
      r += f * static_cast<double>(i % p);
      i /= p;
    }
    out[d] = r;
  }
}

Vec chebyshev_lobatto(int n) {
  require(n >= 2, ErrorKind::InvalidArgument, "chebyshev_lobatto: n must be >= 2");
  Vec x(n);
  for (int k = 0; k < n; ++k) x[k] = -std::cos(std::numbers::pi * k / (n - 1));
  if (n % 2 == 1) x[n / 2] = 0.0;
  x.front() = -1.0;
  x.back() = 1.0;
  return x;
}

Vec barycentric_weights(const Vec& nodes) {
  const std::size_t n = nodes.size();
  Vec w(n, 1.0);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k)
      if (k != j) w[j] /= (nodes[j] - nodes[k]);
  return w;
}

void lagrange_basis(const Vec& nodes, const Vec& bw, double x, double* out) {
  const std::size_t n = nodes.size();
  for (std::size_t k = 0; k < n; ++k) {
    if (x == nodes[k]) {
      for (std::size_t j = 0; j < n; ++j) out[j] = (j == k) ? 1.0 : 0.0;
      return;
    }
  }
  double denom = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    out[k] = bw[k] / (x - nodes[k]);
    denom += out[k];
  }
  for (std::size_t k = 0; k < n; ++k) out[k] /= denom;
}

}  // namespace bz
