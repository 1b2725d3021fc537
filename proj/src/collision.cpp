#include "boltzscat/collision.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "boltzscat/parallel.hpp"
#include "boltzscat/special.hpp"

namespace bz {

KernelSpec KernelSpec::constant(int D, double beta, double value) {
  KernelSpec k;
  k.D = D;
  k.beta = beta;
  k.bhat_const = value;
  k.bbar = k.compute_bbar();
  return k;
}

KernelSpec KernelSpec::table(int D, double beta, Vec cosines, Vec values) {
  KernelSpec k;
  k.D = D;
  k.beta = beta;
  k.tabulated = true;
  k.cosines = std::move(cosines);
  k.values = std::move(values);
  require(k.cosines.size() == k.values.size() && k.cosines.size() >= 2, ErrorKind::InvalidArgument,
          "bhat table needs matching cosines/weights with at least two entries");
  for (std::size_t i = 1; i < k.cosines.size(); ++i)
    require(k.cosines[i] > k.cosines[i - 1], ErrorKind::InvalidArgument, "bhat cosines must increase");
  require(k.cosines.front() <= -1.0 && k.cosines.back() >= 1.0, ErrorKind::InvalidArgument,
          "bhat cosines must cover [-1, 1]");
  k.bbar = k.compute_bbar();
  return k;
}

double KernelSpec::bhat(double mu) const {
  if (!tabulated) return bhat_const;
  mu = std::clamp(mu, cosines.front(), cosines.back());
  const auto it = std::upper_bound(cosines.begin(), cosines.end(), mu);
  std::size_t hi = static_cast<std::size_t>(it - cosines.begin());
  if (hi >= cosines.size()) hi = cosines.size() - 1;
  const std::size_t lo = hi - 1;
  const double f = (mu - cosines[lo]) / (cosines[hi] - cosines[lo]);
  return (1.0 - f) * values[lo] + f * values[hi];
}

double KernelSpec::compute_bbar() const {
  if (!tabulated) return bhat_const * sphere_area(D);
  const double pi = std::numbers::pi;
  if (D == 2) return adaptive_integrate([&](double phi) { return bhat(std::cos(phi)); }, 0.0, 2.0 * pi, 1e-12);
  return 2.0 * pi * adaptive_integrate([&](double mu) { return bhat(mu); }, -1.0, 1.0, 1e-12);
}

void KernelSpec::check() const {
  require(D == 2 || D == 3, ErrorKind::InvalidArgument, "kernel: D must be 2 or 3");
  std::ostringstream os;
  os << "kernel: beta must lie in (" << 1 - D << ", 2], got " << beta;
  require(beta > 1.0 - D && beta <= 2.0, ErrorKind::Domain, os.str());
  if (tabulated) {
    for (double v : values) require(v >= 0.0 && std::isfinite(v), ErrorKind::Domain, "kernel: bhat must be >= 0");
  } else {
    require(bhat_const >= 0.0 && std::isfinite(bhat_const), ErrorKind::Domain, "kernel: bhat must be >= 0");
  }
  require(std::isfinite(bbar) && bbar > 0.0, ErrorKind::Domain, "kernel: bbar must be finite and positive");
}

void post_collision(int D, const double* v, const double* vs, const double* omega, double* vp, double* vsp) {
  double nrm = 0.0, dot = 0.0;
  for (int i = 0; i < D; ++i) {
    nrm += omega[i] * omega[i];
    dot += (v[i] - vs[i]) * omega[i];
  }
  require(std::abs(nrm - 1.0) <= 1e-12, ErrorKind::InvalidArgument, "post_collision: omega must be a unit vector");
  for (int i = 0; i < D; ++i) {
    const double s = dot * omega[i];
    vp[i] = v[i] - s;
    vsp[i] = vs[i] + s;
  }
}

CollisionOperator::CollisionOperator(const KernelSpec& kernel, int n_per_axis, double half_width, int n_omega,
                                     int interp_order)
    : kernel_(kernel), D_(kernel.D), n_(n_per_axis), order_(interp_order), half_(half_width) {
  require(order_ == 2 || order_ == 4, ErrorKind::InvalidArgument, "collision interpolation order must be 2 or 4");
  kernel_.check();
  require(n_ >= 4, ErrorKind::InvalidArgument, "collision grid needs at least 4 nodes per axis");
  require(half_ > 0.0, ErrorKind::InvalidArgument, "collision grid half width must be positive");
  dxi_ = 2.0 * half_ / (n_ - 1);
  nodes_ = 1;
  for (int d = 0; d < D_; ++d) nodes_ *= static_cast<std::size_t>(n_);
  const Vec x1 = uniform_nodes(n_, half_);
  const Vec w1 = trapezoid_weights(n_, half_);
  xi_.resize(nodes_ * D_);
  wq_.resize(nodes_);
  wg_.resize(nodes_);
  const double gnorm = std::pow(2.0 * std::numbers::pi, -0.5 * D_);
  for (std::size_t i = 0; i < nodes_; ++i) {
    std::size_t r = i;
    double w = 1.0, r2 = 0.0;
    for (int d = D_ - 1; d >= 0; --d) {
      const std::size_t k = r % n_;
      r /= n_;
      xi_[i * D_ + d] = x1[k];
      w *= w1[k];
      r2 += x1[k] * x1[k];
    }
    wq_[i] = w;
    wg_[i] = w * gnorm * std::exp(-0.5 * r2);
  }
  const int m = 2 * n_ - 1;
  std::size_t lsize = 1;
  for (int d = 0; d < D_; ++d) lsize *= m;
  lattice_.resize(lsize);
  const double beta = kernel_.beta;
  for (std::size_t l = 0; l < lsize; ++l) {
    std::size_t r = l;
    double r2 = 0.0;
    for (int d = 0; d < D_; ++d) {
      const double off = (static_cast<double>(r % m) - (n_ - 1)) * dxi_;
      r /= m;
      r2 += off * off;
    }
    if (r2 > 0.0) {
      lattice_[l] = std::pow(r2, 0.5 * beta);
    } else if (beta < 0.0) {
      lattice_[l] = cell_average_power(beta, D_, dxi_);
    } else {
      lattice_[l] = beta == 0.0 ? 1.0 : 0.0;
    }
  }
  sphere_ = fold_antipodes(sphere_rule(D_, n_omega));
  sphere_bbar_ = 0.0;
  for (std::size_t k = 0; k < sphere_.count(); ++k)
    sphere_bbar_ += (sphere_.weights[k] + sphere_.antipodal_weights[k]) * kernel_.bhat_const;
  const std::size_t nw = sphere_.count();
  perpendicular_pairs_ = D_ == 2 && nw % 2 == 0;
  for (std::size_t k = 0; perpendicular_pairs_ && k < nw / 2; ++k) {
    const double* a = &sphere_.points[2 * k];
    const double* b = &sphere_.points[2 * (k + nw / 2)];
    const bool rot = std::abs(b[0] + a[1]) + std::abs(b[1] - a[0]) < 1e-12;
    const bool anti = std::abs(b[0] - a[1]) + std::abs(b[1] + a[0]) < 1e-12;
    perpendicular_pairs_ = (rot || anti) && sphere_.weights[k] == sphere_.weights[k + nw / 2] &&
                           sphere_.antipodal_weights[k] == sphere_.antipodal_weights[k + nw / 2];
  }
}

double CollisionOperator::kernel_factor(std::size_t i, std::size_t j) const {
  const int m = 2 * n_ - 1;
  std::size_t l = 0, ri = i, rj = j, stride = 1;
  for (int d = D_ - 1; d >= 0; --d) {
    const long di = static_cast<long>(ri % n_) - static_cast<long>(rj % n_) + (n_ - 1);
    ri /= n_;
    rj /= n_;
    l += static_cast<std::size_t>(di) * stride;
    stride *= m;
  }
  return lattice_[l];
}

double CollisionOperator::pair_bhat_sum(std::size_t i, std::size_t j) const {
  if (!kernel_.tabulated) return sphere_bbar_;
  const int D = D_;
  double z[3], nz = 0.0;
  for (int d = 0; d < D; ++d) {
    z[d] = xi_[i * D + d] - xi_[j * D + d];
    nz += z[d] * z[d];
  }
  if (nz == 0.0) return kernel_.bbar;
  nz = std::sqrt(nz);
  double s = 0.0;
  for (std::size_t k = 0; k < sphere_.count(); ++k) {
    double mu = 0.0;
    for (int d = 0; d < D; ++d) mu += sphere_.points[k * D + d] * z[d];
    mu /= nz;
    s += sphere_.weights[k] * kernel_.bhat(mu) + sphere_.antipodal_weights[k] * kernel_.bhat(-mu);
  }
  return s;
}

namespace {

// Copies h onto a grid padded by two ghost layers per side holding the
// nearest in-box value, so interpolation stencils never need clamping.
template <int DIM>
Vec pad_field(const double* h, int n, std::size_t ncols) {
  const int np = n + 4;
  std::size_t total = ncols;
  for (int d = 0; d < DIM; ++d) total *= np;
  Vec out(total);
  std::size_t cells = total / ncols;
  for (std::size_t p = 0; p < cells; ++p) {
    std::size_t r = p, src = 0, stride = 1;
    for (int d = DIM - 1; d >= 0; --d) {
      const int k = std::clamp(static_cast<int>(r % np) - 2, 0, n - 1);
      r /= np;
      src += static_cast<std::size_t>(k) * stride;
      stride *= n;
    }
    std::copy(h + src * ncols, h + (src + 1) * ncols, out.begin() + p * ncols);
  }
  return out;
}

template <int DIM, int ORDER>
struct Tap {
  std::size_t base;          // offset of the first stencil row in the padded array
  double w[DIM][ORDER];
};

template <int DIM, int ORDER>
inline void make_tap(const double* p, int n, double half, double h, const std::size_t* pstride, Tap<DIM, ORDER>& t) {
  t.base = 0;
  for (int d = 0; d < DIM; ++d) {
    double q = (p[d] + half) / h;
    q = std::clamp(q, 0.0, static_cast<double>(n - 1));
    int i0 = static_cast<int>(q);
    if (i0 > n - 2) i0 = n - 2;
    const double f = q - i0;
    if constexpr (ORDER == 4) {
      t.w[d][0] = -f * (f - 1.0) * (f - 2.0) / 6.0;
      t.w[d][1] = (f + 1.0) * (f - 1.0) * (f - 2.0) / 2.0;
      t.w[d][2] = -(f + 1.0) * f * (f - 2.0) / 2.0;
      t.w[d][3] = (f + 1.0) * f * (f - 1.0) / 6.0;
      t.base += static_cast<std::size_t>(i0 + 1) * pstride[d];
    } else {
      t.w[d][0] = 1.0 - f;
      t.w[d][1] = f;
      t.base += static_cast<std::size_t>(i0 + 2) * pstride[d];
    }
  }
}

template <int ORDER>
inline void gain_update_2d(const double* __restrict F, const double* __restrict G, std::size_t s0, std::size_t s1,
                           const Tap<2, ORDER>& a, const Tap<2, ORDER>& b, double cw, std::size_t ncols,
                           double* __restrict out) {
  double fw[ORDER * ORDER], gw[ORDER * ORDER];
  for (int i = 0; i < ORDER; ++i)
    for (int j = 0; j < ORDER; ++j) {
      fw[i * ORDER + j] = cw * a.w[0][i] * a.w[1][j];
      gw[i * ORDER + j] = b.w[0][i] * b.w[1][j];
    }
  const double* __restrict fb = F + a.base;
  const double* __restrict gb = G + b.base;
  for (std::size_t c = 0; c < ncols; ++c) {
    double u = 0.0, v = 0.0;
#pragma GCC unroll 16
    for (int i = 0; i < ORDER; ++i)
#pragma GCC unroll 4
      for (int j = 0; j < ORDER; ++j) {
        u += fw[i * ORDER + j] * fb[i * s0 + j * s1 + c];
        v += gw[i * ORDER + j] * gb[i * s0 + j * s1 + c];
      }
    out[c] += u * v;
  }
}

template <int ORDER>
inline void gain_update_3d(const double* __restrict F, const double* __restrict G, std::size_t s0, std::size_t s1,
                           std::size_t s2, const Tap<3, ORDER>& a, const Tap<3, ORDER>& b, double cw,
                           std::size_t ncols, double* __restrict out) {
  constexpr int P = ORDER * ORDER * ORDER;
  double fw[P], gw[P];
  std::size_t off[P];
  int q = 0;
  for (int i = 0; i < ORDER; ++i)
    for (int j = 0; j < ORDER; ++j)
      for (int k = 0; k < ORDER; ++k, ++q) {
        fw[q] = cw * a.w[0][i] * a.w[1][j] * a.w[2][k];
        gw[q] = b.w[0][i] * b.w[1][j] * b.w[2][k];
        off[q] = i * s0 + j * s1 + k * s2;
      }
  const double* __restrict fb = F + a.base;
  const double* __restrict gb = G + b.base;
  for (std::size_t c = 0; c < ncols; ++c) {
    double u = 0.0, v = 0.0;
    for (int r = 0; r < P; ++r) {
      u += fw[r] * fb[off[r] + c];
      v += gw[r] * gb[off[r] + c];
    }
    out[c] += u * v;
  }
}

}  // namespace

template <int DIM>
void CollisionOperator::apply_impl(const double* hF, const double* hG, std::size_t ncols, double* gain,
                                   double* loss) const {
  const int np = n_ + 4;
  std::size_t pstride[DIM];
  pstride[DIM - 1] = ncols;
  for (int d = DIM - 2; d >= 0; --d) pstride[d] = pstride[d + 1] * np;
  Vec Fp, Gp;
  if (gain) {
    Fp = pad_field<DIM>(hF, n_, ncols);
    Gp = (hG == hF) ? Fp : pad_field<DIM>(hG, n_, ncols);
  }
  const std::size_t nw = sphere_.count();
  const bool tab = kernel_.tabulated;
  const bool quarter = DIM == 2 && hF == hG && gain && nw % 2 == 0 && perpendicular_pairs_;
  const std::size_t nk = quarter ? nw / 2 : nw;
  const int order = order_;
  parallel_for(nodes_, 1, [&](std::size_t b, std::size_t e) {
    Vec acc(ncols), lacc(ncols);
    for (std::size_t i = b; i < e; ++i) {
      std::fill(acc.begin(), acc.end(), 0.0);
      std::fill(lacc.begin(), lacc.end(), 0.0);
      const double* xi = &xi_[i * DIM];
      for (std::size_t j = 0; j < nodes_; ++j) {
        const double wij = wg_[j] * kernel_factor(i, j);
        if (wij == 0.0) continue;
        const double* xs = &xi_[j * DIM];
        if (loss) {
          const double lw = wij * pair_bhat_sum(i, j);
          const double* g = hG + j * ncols;
          for (std::size_t c = 0; c < ncols; ++c) lacc[c] += lw * g[c];
        }
        if (!gain) continue;
        double z[DIM], nz = 0.0;
        for (int d = 0; d < DIM; ++d) {
          z[d] = xi[d] - xs[d];
          nz += z[d] * z[d];
        }
        nz = std::sqrt(nz);
        auto folded_weight = [&](std::size_t k) {
          const double* om = &sphere_.points[k * DIM];
          if (!tab) return (sphere_.weights[k] + sphere_.antipodal_weights[k]) * kernel_.bhat_const;
          double dot = 0.0;
          for (int d = 0; d < DIM; ++d) dot += z[d] * om[d];
          const double mu = nz > 0.0 ? dot / nz : 1.0;
          return sphere_.weights[k] * kernel_.bhat(mu) + sphere_.antipodal_weights[k] * kernel_.bhat(-mu);
        };
        for (std::size_t k = 0; k < nk; ++k) {
          const double* om = &sphere_.points[k * DIM];
          double dot = 0.0;
          for (int d = 0; d < DIM; ++d) dot += z[d] * om[d];
          // With F = G the directions k and k + nk swap the two outgoing velocities.
          const double bw = quarter ? folded_weight(k) + folded_weight(k + nk) : folded_weight(k);
          const double cw = wij * bw;
          if (cw == 0.0) continue;
          double p1[DIM], p2[DIM];
          for (int d = 0; d < DIM; ++d) {
            p1[d] = xi[d] - dot * om[d];
            p2[d] = xs[d] + dot * om[d];
          }
          if (order == 4) {
            Tap<DIM, 4> t1, t2;
            make_tap<DIM, 4>(p1, n_, half_, dxi_, pstride, t1);
            make_tap<DIM, 4>(p2, n_, half_, dxi_, pstride, t2);
            if constexpr (DIM == 2)
              gain_update_2d<4>(Fp.data(), Gp.data(), pstride[0], pstride[1], t1, t2, cw, ncols, acc.data());
            else
              gain_update_3d<4>(Fp.data(), Gp.data(), pstride[0], pstride[1], pstride[2], t1, t2, cw, ncols,
                                acc.data());
          } else {
            Tap<DIM, 2> t1, t2;
            make_tap<DIM, 2>(p1, n_, half_, dxi_, pstride, t1);
            make_tap<DIM, 2>(p2, n_, half_, dxi_, pstride, t2);
            if constexpr (DIM == 2)
              gain_update_2d<2>(Fp.data(), Gp.data(), pstride[0], pstride[1], t1, t2, cw, ncols, acc.data());
            else
              gain_update_3d<2>(Fp.data(), Gp.data(), pstride[0], pstride[1], pstride[2], t1, t2, cw, ncols,
                                acc.data());
          }
        }
      }
      if (gain) std::copy(acc.begin(), acc.end(), gain + i * ncols);
      if (loss) {
        const double* f = hF + i * ncols;
        for (std::size_t c = 0; c < ncols; ++c) loss[i * ncols + c] = f[c] * lacc[c];
      }
    }
  });
}

void CollisionOperator::apply(const double* hF, const double* hG, std::size_t ncols, double* gain,
                              double* loss) const {
  if (D_ == 2)
    apply_impl<2>(hF, hG, ncols, gain, loss);
  else
    apply_impl<3>(hF, hG, ncols, gain, loss);
}

void CollisionOperator::loss_rate(const double* hG, std::size_t ncols, double* out) const {
  parallel_for(nodes_, 16, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      double* o = out + i * ncols;
      std::fill(o, o + ncols, 0.0);
      for (std::size_t j = 0; j < nodes_; ++j) {
        const double lw = wg_[j] * kernel_factor(i, j) * pair_bhat_sum(i, j);
        const double* g = hG + j * ncols;
        for (std::size_t c = 0; c < ncols; ++c) o[c] += lw * g[c];
      }
    }
  });
}

LocalCollision::LocalCollision(const CollisionOperator& op, const HydroFields& frame) : op_(op), D_(op.dim()) {
  require(static_cast<int>(frame.u.size()) == D_, ErrorKind::InvalidArgument, "LocalCollision: dimension mismatch");
  require(frame.rho > 0.0 && frame.theta > 0.0, ErrorKind::Domain, "LocalCollision: frame needs rho > 0, theta > 0");
  hydro_ = frame;
  const double sth = std::sqrt(hydro_.theta);
  rate_scale_ = hydro_.rho * std::pow(hydro_.theta, 0.5 * op.kernel().beta);
  const std::size_t n = op.node_count();
  w_.resize(n * D_);
  mref_.resize(n);
  dv_.resize(n);
  const double vol = std::pow(hydro_.theta, 0.5 * D_);
  const double norm = hydro_.rho / std::pow(2.0 * std::numbers::pi * hydro_.theta, 0.5 * D_);
  for (std::size_t i = 0; i < n; ++i) {
    const double* xi = &op.node_coords()[i * D_];
    double r2 = 0.0;
    for (int d = 0; d < D_; ++d) {
      w_[i * D_ + d] = hydro_.u[d] + sth * xi[d];
      r2 += xi[d] * xi[d];
    }
    mref_[i] = norm * std::exp(-0.5 * r2);
    dv_[i] = vol * op.quad_weights()[i];
  }
}

LocalCollision::LocalCollision(const CollisionOperator& op, const GlobalMaxwellian& ref, const double* y, double t)
    : LocalCollision(op, ref.hydro(y, t)) {}

LocalCollision LocalCollision::adapted(const CollisionOperator& op, const std::function<double(const double*)>& F,
                                       const HydroFields& guess) {
  HydroFields frame = guess;
  const int D = op.dim();
  // Two passes: the first grid may sit off the bulk of F, the second is centred on it.
  for (int pass = 0; pass < 2; ++pass) {
    LocalCollision lc(op, frame);
    double m0 = 0.0, e = 0.0;
    Vec p(D, 0.0);
    for (std::size_t i = 0; i < lc.node_count(); ++i) {
      const double f = F(lc.velocity(i)) * lc.cell_volume(i);
      m0 += f;
      for (int d = 0; d < D; ++d) p[d] += f * lc.velocity(i)[d];
    }
    require(m0 > 0.0, ErrorKind::Domain, "LocalCollision::adapted: field has no mass on the grid");
    for (int d = 0; d < D; ++d) p[d] /= m0;
    for (std::size_t i = 0; i < lc.node_count(); ++i) {
      double r2 = 0.0;
      for (int d = 0; d < D; ++d) r2 += (lc.velocity(i)[d] - p[d]) * (lc.velocity(i)[d] - p[d]);
      e += F(lc.velocity(i)) * lc.cell_volume(i) * r2;
    }
    frame.rho = m0;
    frame.u = Eigen::Map<Eigen::VectorXd>(p.data(), D);
    frame.theta = e / (m0 * D);
  }
  return LocalCollision(op, frame);
}

Vec LocalCollision::relative(const std::function<double(const double*)>& F) const {
  Vec h(node_count());
  for (std::size_t i = 0; i < h.size(); ++i) h[i] = F(velocity(i)) / mref_[i];
  return h;
}

LocalCollision::Terms LocalCollision::collide(const Vec& hF, const Vec& hG) const {
  const std::size_t n = node_count();
  Terms t;
  t.gain.assign(n, 0.0);
  t.loss.assign(n, 0.0);
  op_.apply(hF.data(), hG.data(), 1, t.gain.data(), t.loss.data());
  for (std::size_t i = 0; i < n; ++i) {
    t.gain[i] *= mref_[i] * rate_scale_;
    t.loss[i] *= mref_[i] * rate_scale_;
  }
  return t;
}

Vec LocalCollision::loss_rate(const Vec& hG) const {
  Vec a(node_count());
  op_.loss_rate(hG.data(), 1, a.data());
  for (double& x : a) x *= rate_scale_;
  return a;
}

LocalCollision::WeakMoments LocalCollision::weak_form_moments(const Vec& hF) const {
  const Terms t = collide(hF, hF);
  WeakMoments m;
  m.residual.assign(D_ + 2, 0.0);
  m.scale.assign(D_ + 2, 0.0);
  for (std::size_t i = 0; i < node_count(); ++i) {
    const double* v = velocity(i);
    double phi[5];
    phi[0] = 1.0;
    double vv = 0.0;
    for (int d = 0; d < D_; ++d) {
      phi[1 + d] = v[d];
      vv += v[d] * v[d];
    }
    phi[D_ + 1] = 0.5 * vv;
    for (int k = 0; k < D_ + 2; ++k) {
      m.residual[k] += dv_[i] * (t.gain[i] - t.loss[i]) * phi[k];
      m.scale[k] += dv_[i] * (std::abs(t.gain[i]) + std::abs(t.loss[i])) * std::abs(phi[k]);
    }
  }
  return m;
}

double LocalCollision::entropy_production(const Vec& hF) const {
  const Terms t = collide(hF, hF);
  double s = 0.0;
  for (std::size_t i = 0; i < node_count(); ++i) {
    const double F = hF[i] * mref_[i];
    if (!(F > 0.0)) {
      std::ostringstream os;
      os << "entropy_production: F <= 0 at node " << i << " (v = ";
      for (int d = 0; d < D_; ++d) os << (d ? ", " : "") << velocity(i)[d];
      os << ")";
      fail(ErrorKind::Domain, os.str());
    }
    s += dv_[i] * (t.gain[i] - t.loss[i]) * std::log(F);
  }
  return s;
}

double LocalCollision::entropy_scale(const Vec& hF) const {
  const Terms t = collide(hF, hF);
  double s = 0.0;
  for (std::size_t i = 0; i < node_count(); ++i)
    s += dv_[i] * (std::abs(t.gain[i]) + std::abs(t.loss[i])) * std::abs(std::log(hF[i] * mref_[i]));
  return s;
}

double loss_rate_maxwellian(const GlobalMaxwellian& M, const KernelSpec& k, const double* v, const double* x,
                            double t) {
  const HydroFields h = M.hydro(x, t);
  const int D = M.dim();
  double r2 = 0.0;
  for (int d = 0; d < D; ++d) r2 += (v[d] - h.u[d]) * (v[d] - h.u[d]);
  const double w = std::sqrt(r2 / h.theta);
  return k.bbar * h.rho * std::pow(h.theta, 0.5 * k.beta) * a_beta(w, k.beta, D);
}

}  // namespace bz
