#include "boltzscat/phase_field.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <random>

#include "boltzscat/parallel.hpp"
#include "json_io.hpp"

namespace bz {

static_assert(std::endian::native == std::endian::little, "field dumps assume a little-endian host");

namespace {

std::size_t ipow(int n, int k) {
  std::size_t r = 1;
  for (int i = 0; i < k; ++i) r *= static_cast<std::size_t>(n);
  return r;
}

// Cubic Lagrange weights on nodes i0-1..i0+2 for coordinate q in index units,
// with q and the stencil clamped to [0, n-1].
inline void cubic_stencil(double q, int n, int* idx, double* w) {
  q = std::clamp(q, 0.0, static_cast<double>(n - 1));
  int i0 = static_cast<int>(q);
  if (i0 > n - 2) i0 = n - 2;
  const double f = q - i0;
  w[0] = -f * (f - 1.0) * (f - 2.0) / 6.0;
  w[1] = (f + 1.0) * (f - 1.0) * (f - 2.0) / 2.0;
  w[2] = -(f + 1.0) * f * (f - 2.0) / 2.0;
  w[3] = (f + 1.0) * f * (f - 1.0) / 6.0;
  for (int k = 0; k < 4; ++k) idx[k] = std::clamp(i0 - 1 + k, 0, n - 1);
}

}  // namespace

double cubic_tensor_interp(const double* data, int ndim, const int* dims, const std::size_t* strides, const double* q) {
  int idx[6][4];
  double w[6][4];
  for (int d = 0; d < ndim; ++d) cubic_stencil(q[d], dims[d], idx[d], w[d]);
  int pos[6] = {};
  double total = 0.0;
  const std::size_t taps = std::size_t{1} << (2 * ndim);
  for (std::size_t t = 0; t < taps; ++t) {
    std::size_t r = t, off = 0;
    double wt = 1.0;
    for (int d = ndim - 1; d >= 0; --d) {
      pos[d] = static_cast<int>(r & 3u);
      r >>= 2;
      off += static_cast<std::size_t>(idx[d][pos[d]]) * strides[d];
      wt *= w[d][pos[d]];
    }
    total += wt * data[off];
  }
  return total;
}

PhaseGrid PhaseGrid::around(const GlobalMaxwellian& ref, int Nv, int Nx, double nsigma) {
  require(nsigma > 0.0, ErrorKind::InvalidArgument, "PhaseGrid::around: nsigma must be positive");
  const int D = ref.dim();
  const Eigen::MatrixXd S = ref.covariance0();
  double sv = 0.0, sx = 0.0;
  for (int i = 0; i < D; ++i) {
    sv = std::max(sv, std::sqrt(S(i, i)));
    sx = std::max(sx, std::sqrt(S(D + i, D + i)));
  }
  PhaseGrid g;
  g.D = D;
  g.Nv = Nv;
  g.Nx = Nx;
  g.Vmax = nsigma * sv;
  g.Xmax = nsigma * sx;
  return g;
}

std::size_t PhaseGrid::v_count() const { return ipow(Nv, D); }
std::size_t PhaseGrid::x_count() const { return ipow(Nx, D); }

void PhaseGrid::node(std::size_t idx, double* v, double* x) const {
  std::size_t xi = idx % x_count(), vi = idx / x_count();
  for (int d = D - 1; d >= 0; --d) {
    x[d] = -Xmax + dx() * static_cast<double>(xi % Nx);
    xi /= Nx;
    v[d] = -Vmax + dv() * static_cast<double>(vi % Nv);
    vi /= Nv;
  }
}

double PhaseGrid::weight(std::size_t idx) const {
  std::size_t xi = idx % x_count(), vi = idx / x_count();
  double w = 1.0;
  for (int d = 0; d < D; ++d) {
    const std::size_t a = xi % Nx, b = vi % Nv;
    xi /= Nx;
    vi /= Nv;
    w *= (a == 0 || a == static_cast<std::size_t>(Nx - 1)) ? 0.5 * dx() : dx();
    w *= (b == 0 || b == static_cast<std::size_t>(Nv - 1)) ? 0.5 * dv() : dv();
  }
  return w;
}

double PhaseGrid::tail_fraction(const GlobalMaxwellian& ref) const {
  const Eigen::MatrixXd S = ref.covariance0();
  double t = 0.0;
  for (int i = 0; i < D; ++i) {
    t += std::erfc(Vmax / std::sqrt(2.0 * S(i, i)));
    t += std::erfc(Xmax / std::sqrt(2.0 * S(D + i, D + i)));
  }
  return t;
}

void PhaseGrid::check(const GlobalMaxwellian& ref) const {
  require(D == 2 || D == 3, ErrorKind::InvalidArgument, "grid.D must be 2 or 3");
  require(D == ref.dim(), ErrorKind::InvalidArgument, "grid.D does not match the reference dimension");
  require(Nv >= 4 && Nx >= 4, ErrorKind::InvalidArgument, "grid: Nv and Nx must be at least 4");
  require(Vmax > 0.0 && Xmax > 0.0, ErrorKind::InvalidArgument, "grid: Vmax and Xmax must be positive");
  const double tail = tail_fraction(ref);
  require(tail < 1e-6, ErrorKind::Domain,
          "grid: reference mass outside the box is up to " + std::to_string(tail) + " of m (limit 1e-6)");
}

const char* frame_name(Frame f) { return f == Frame::Comoving ? "comoving" : "lab"; }

void DistributionField::position(std::size_t idx, double* v, double* x) const {
  grid.node(idx, v, x);
  const double tl = frame == Frame::Lab ? t : 0.0;
  for (int d = 0; d < grid.D; ++d) {
    v[d] += ref.v0[d];
    x[d] += ref.x0[d] + tl * ref.v0[d];
  }
}

double DistributionField::ref_value(const GlobalMaxwellian& M, std::size_t idx) const {
  double v[3], x[3];
  position(idx, v, x);
  return M.eval(v, x, frame == Frame::Lab ? t : 0.0);
}

DistributionField reference_field(const PhaseGrid& g, const Params& ref, double t, Frame frame) {
  DistributionField f;
  f.grid = g;
  f.ref = ref;
  f.t = t;
  f.frame = frame;
  f.h.assign(g.size(), 1.0);
  return f;
}

DistributionField field_from(const PhaseGrid& g, const Params& ref, double t, Frame frame,
                             const std::function<double(const double*, const double*)>& F) {
  DistributionField f = reference_field(g, ref, t, frame);
  const GlobalMaxwellian M(ref);
  parallel_for(g.size(), 1024, [&](std::size_t b, std::size_t e) {
    double v[3], x[3];
    for (std::size_t i = b; i < e; ++i) {
      f.position(i, v, x);
      f.h[i] = F(v, x) / M.eval(v, x, frame == Frame::Lab ? t : 0.0);
    }
  });
  return f;
}

Vec shift_along_velocity(const PhaseGrid& g, const Vec& h, double s) {
  require(h.size() == g.size(), ErrorKind::InvalidArgument, "shift_along_velocity: field size mismatch");
  if (s == 0.0) return h;
  const int D = g.D;
  const std::size_t nx = g.x_count();
  int dims[3];
  std::size_t strides[3];
  for (int d = D - 1; d >= 0; --d) {
    dims[d] = g.Nx;
    strides[d] = d == D - 1 ? 1 : strides[d + 1] * g.Nx;
  }
  Vec out(h.size());
  parallel_for(g.v_count(), 1, [&](std::size_t b, std::size_t e) {
    double v[3], x[3], q[3];
    for (std::size_t vi = b; vi < e; ++vi) {
      const double* row = &h[vi * nx];
      for (std::size_t xi = 0; xi < nx; ++xi) {
        g.node(vi * nx + xi, v, x);
        for (int d = 0; d < D; ++d) q[d] = (x[d] + s * v[d] + g.Xmax) / g.dx();
        out[vi * nx + xi] = cubic_tensor_interp(row, D, dims, strides, q);
      }
    }
  });
  return out;
}

DistributionField free_stream(const DistributionField& f, double delta) {
  require(f.frame == Frame::Lab, ErrorKind::InvalidArgument, "free_stream: expects a lab-frame field");
  DistributionField r = f;
  r.t = f.t + delta;
  if (delta != 0.0) r.h = shift_along_velocity(f.grid, f.h, -delta);
  return r;
}

DistributionField to_comoving(const DistributionField& lab) {
  require(lab.frame == Frame::Lab, ErrorKind::InvalidArgument, "to_comoving: expects a lab-frame field");
  DistributionField r = lab;
  r.frame = Frame::Comoving;
  r.h = shift_along_velocity(lab.grid, lab.h, lab.t);
  return r;
}

DistributionField to_lab(const DistributionField& c) {
  require(c.frame == Frame::Comoving, ErrorKind::InvalidArgument, "to_lab: expects a comoving field");
  DistributionField r = c;
  r.frame = Frame::Lab;
  r.h = shift_along_velocity(c.grid, c.h, -c.t);
  return r;
}

namespace {
void check_same(const DistributionField& a, const DistributionField& b, const char* what) {
  require(a.grid == b.grid && a.h.size() == b.h.size(), ErrorKind::InvalidArgument,
          std::string(what) + ": fields live on different grids");
}
}  // namespace

double weighted_sup_norm(const DistributionField& a, const DistributionField& b) {
  check_same(a, b, "weighted_sup_norm");
  return deterministic_max(a.h.size(), [&](std::size_t i) { return std::abs(a.h[i] - b.h[i]); });
}

double l1_distance(const DistributionField& a, const DistributionField& b) {
  check_same(a, b, "l1_distance");
  const GlobalMaxwellian M(a.ref);
  return deterministic_sum(a.h.size(), [&](std::size_t i) {
    return a.grid.weight(i) * std::abs(a.h[i] - b.h[i]) * a.ref_value(M, i);
  });
}

Vec moments(const DistributionField& f) {
  const GlobalMaxwellian M(f.ref);
  const int D = f.grid.D;
  const double t = f.frame == Frame::Lab ? f.t : 0.0;
  return deterministic_sum_vec(f.h.size(), invariant_count(D), [&](std::size_t i, double* acc) {
    double v[3], x[3];
    f.position(i, v, x);
    add_invariant_densities(D, v, x, t, f.grid.weight(i) * f.h[i] * M.eval(v, x, t), acc);
  });
}

Vec moment_scales(const DistributionField& f) {
  const GlobalMaxwellian M(f.ref);
  const int D = f.grid.D;
  const int n = invariant_count(D);
  const double t = f.frame == Frame::Lab ? f.t : 0.0;
  return deterministic_sum_vec(f.h.size(), n, [&](std::size_t i, double* acc) {
    double v[3], x[3], dens[16] = {};
    f.position(i, v, x);
    add_invariant_densities(D, v, x, t, 1.0, dens);
    const double w = f.grid.weight(i) * std::abs(f.h[i]) * M.eval(v, x, t);
    for (int k = 0; k < n; ++k) acc[k] += w * std::abs(dens[k]);
  });
}

double h_functional(const DistributionField& f) {
  const GlobalMaxwellian M(f.ref);
  const double t = f.frame == Frame::Lab ? f.t : 0.0;
  for (std::size_t i = 0; i < f.h.size(); ++i)
    require(f.h[i] >= 0.0, ErrorKind::Domain, "h_functional: negative density at node " + std::to_string(i));
  return deterministic_sum(f.h.size(), [&](std::size_t i) {
    if (f.h[i] == 0.0) return 0.0;
    double v[3], x[3];
    f.position(i, v, x);
    const double lm = M.log_eval(v, x, t);
    return f.grid.weight(i) * f.h[i] * std::exp(lm) * (std::log(f.h[i]) + lm);
  });
}

FieldInterpolator::FieldInterpolator(const PhaseGrid& g, const Vec& h) : g_(g), h_(h), stride_(2 * g.D) {
  require(h.size() == g.size(), ErrorKind::InvalidArgument, "FieldInterpolator: field size mismatch");
  const int n = 2 * g.D;
  stride_[n - 1] = 1;
  for (int d = n - 2; d >= 0; --d) stride_[d] = stride_[d + 1] * (d + 1 >= g.D ? g.Nx : g.Nv);
}

double FieldInterpolator::operator()(const double* z) const {
  const int D = g_.D;
  int dims[6];
  double q[6];
  for (int d = 0; d < D; ++d) {
    dims[d] = g_.Nv;
    dims[D + d] = g_.Nx;
    q[d] = (z[d] + g_.Vmax) / g_.dv();
    q[D + d] = (z[D + d] + g_.Xmax) / g_.dx();
  }
  return cubic_tensor_interp(h_.data(), 2 * D, dims, stride_.data(), q);
}

DistributionField perturbed_field(const PhaseGrid& g, const Params& ref, const Perturbation& p) {
  require(p.eps >= 0.0, ErrorKind::InvalidArgument, "perturbation: eps must be nonnegative");
  require(p.modes >= 1 && p.kmax > 0.0, ErrorKind::InvalidArgument, "perturbation: need modes >= 1, kmax > 0");
  const GlobalMaxwellian M(ref);
  const int n = 2 * g.D;
  std::mt19937_64 rng(p.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<Vec> k(p.modes, Vec(n));
  Vec c(p.modes), phi(p.modes);
  double csum = 0.0;
  for (int m = 0; m < p.modes; ++m) {
    double nn = 0.0;
    for (double& x : k[m]) {
      x = normal(rng);
      nn += x * x;
    }
    const double len = p.kmax * (0.3 + 0.7 * unif(rng)) / std::sqrt(nn);
    for (double& x : k[m]) x *= len;
    c[m] = (unif(rng) < 0.5 ? -1.0 : 1.0) * (0.5 + 0.5 * unif(rng));
    phi[m] = 2.0 * std::numbers::pi * unif(rng);
    csum += std::abs(c[m]);
  }
  const Eigen::MatrixXd L = M.whitening_tau(0.0).L;
  DistributionField f = reference_field(g, ref, 0.0, Frame::Comoving);
  parallel_for(g.size(), 1024, [&](std::size_t b, std::size_t e) {
    Eigen::VectorXd z(n);
    for (std::size_t i = b; i < e; ++i) {
      g.node(i, z.data(), z.data() + g.D);
      const Eigen::VectorXd zeta = L * z;
      double s = 0.0;
      for (int m = 0; m < p.modes; ++m) {
        double a = phi[m];
        for (int d = 0; d < n; ++d) a += k[m][d] * zeta[d];
        s += c[m] * std::cos(a);
      }
      f.h[i] = 1.0 + p.eps * s / csum;
    }
  });
  return f;
}

std::uint64_t fnv1a(const void* data, std::size_t bytes) {
  const auto* p = static_cast<const unsigned char*>(data);
  std::uint64_t h = 14695981039346656037ull;
  for (std::size_t i = 0; i < bytes; ++i) {
    h ^= p[i];
    h *= 1099511628211ull;
  }
  return h;
}

namespace {
std::string hex64(std::uint64_t x) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(x));
  return buf;
}
}  // namespace

void write_field(const DistributionField& f, const std::string& bin_path, const std::string& manifest_path) {
  const std::size_t bytes = f.h.size() * sizeof(double);
  {
    std::ofstream out(bin_path, std::ios::binary);
    require(static_cast<bool>(out), ErrorKind::Io, "write_field: cannot open " + bin_path);
    out.write(reinterpret_cast<const char*>(f.h.data()), static_cast<std::streamsize>(bytes));
    require(static_cast<bool>(out), ErrorKind::Io, "write_field: write failed for " + bin_path);
  }
  std::string rel = bin_path;
  if (const auto slash = rel.find_last_of('/'); slash != std::string::npos) rel = rel.substr(slash + 1);
  const GlobalMaxwellian M(f.ref);
  const json j{{"data", rel},
               {"grid", grid_to_json(f.grid)},
               {"t", number_or_inf(f.t)},
               {"tau", M.tau_of_t(f.t)},
               {"frame", frame_name(f.frame)},
               {"ref", params_to_json(f.ref)},
               {"checksum", "fnv1a64:" + hex64(fnv1a(f.h.data(), bytes))}};
  std::ofstream out(manifest_path);
  require(static_cast<bool>(out), ErrorKind::Io, "write_field: cannot open " + manifest_path);
  out << j.dump(2) << "\n";
}

DistributionField read_field(const std::string& manifest_path) {
  std::ifstream in(manifest_path);
  require(static_cast<bool>(in), ErrorKind::Io, "read_field: cannot open " + manifest_path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    fail(ErrorKind::Io, "read_field: " + manifest_path + ": " + e.what());
  }
  DistributionField f;
  f.grid = grid_from_json(j.at("grid"));
  f.ref = params_from_json(j.at("ref"));
  f.t = number_or_inf(j.at("t"));
  const std::string fr = j.at("frame").get<std::string>();
  require(fr == "comoving" || fr == "lab", ErrorKind::InvalidArgument, "read_field: unknown frame " + fr);
  f.frame = fr == "lab" ? Frame::Lab : Frame::Comoving;
  std::string bin = j.at("data").get<std::string>();
  if (!bin.empty() && bin[0] != '/') {
    const auto slash = manifest_path.find_last_of('/');
    if (slash != std::string::npos) bin = manifest_path.substr(0, slash + 1) + bin;
  }
  f.h.resize(f.grid.size());
  std::ifstream data(bin, std::ios::binary);
  require(static_cast<bool>(data), ErrorKind::Io, "read_field: cannot open " + bin);
  data.read(reinterpret_cast<char*>(f.h.data()), static_cast<std::streamsize>(f.h.size() * sizeof(double)));
  require(data.gcount() == static_cast<std::streamsize>(f.h.size() * sizeof(double)), ErrorKind::Io,
          "read_field: " + bin + " is shorter than the grid");
  const std::string expect = "fnv1a64:" + hex64(fnv1a(f.h.data(), f.h.size() * sizeof(double)));
  require(j.at("checksum").get<std::string>() == expect, ErrorKind::Io, "read_field: checksum mismatch for " + bin);
  return f;
}

}  // namespace bz
