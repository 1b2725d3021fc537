#pragma once

#include <cstddef>
#include <functional>
#include <string>

#include "boltzscat/common.hpp"
#include "boltzscat/maxwellian.hpp"
#include "boltzscat/quadrature.hpp"

namespace bz {

// b(z, omega) = |z|^beta bhat(omega . n), n = z/|z|.
struct KernelSpec {
  int D = 2;
  double beta = 0.0;
  // bhat is either a constant or a piecewise-linear table over cosines in [-1, 1].
  bool tabulated = false;
  double bhat_const = 1.0;
  Vec cosines;
  Vec values;
  double bbar = 0.0;

  static KernelSpec constant(int D, double beta, double value = 1.0);
  static KernelSpec table(int D, double beta, Vec cosines, Vec values);

  double bhat(double mu) const;
  // Recomputes bbar = integral of bhat(omega . n) over S^{D-1}.
  double compute_bbar() const;
  // beta in (1 - D, 2], bhat >= 0, bbar finite and positive.
  void check() const;
};

// v' = v - ((v - v*).omega) omega, v*' = v* + ((v - v*).omega) omega.
void post_collision(int D, const double* v, const double* v_star, const double* omega, double* v_prime,
                    double* v_star_prime);

// Collision integral in normalized velocity coordinates xi, where the local
// Maxwellian weight is the standard normal density G. Fields are relative
// densities h on a uniform tensor grid over [-half, half]^D, stored as
// [node][column] so that many positions are processed per stencil.
//
//   gain(xi) = sum_{xi*, omega} W(xi*) |xi - xi*|^beta bhat(omega.n) hF(xi') hG(xi*')
//   loss(xi) = hF(xi) sum_{xi*} W(xi*) |xi - xi*|^beta bbar_h hG(xi*)
//
// with W = G times trapezoid weights and bbar_h the discrete sphere sum, so
// gain = loss exactly when hF = hG = 1. Off-grid values use tensor
// interpolation of order 2 (multilinear) or 4 (cubic), with the nearest
// in-box value outside.
class CollisionOperator {
 public:
  CollisionOperator(const KernelSpec& kernel, int n_per_axis, double half_width, int n_omega,
                    int interp_order = 4);

  int dim() const { return D_; }
  int n_per_axis() const { return n_; }
  int interp_order() const { return order_; }
  std::size_t node_count() const { return nodes_; }
  double half_width() const { return half_; }
  double spacing() const { return dxi_; }
  const KernelSpec& kernel() const { return kernel_; }
  const Vec& node_coords() const { return xi_; }  // node_count * D
  const Vec& quad_weights() const { return wq_; } // trapezoid product weights (no Gaussian)
  const Vec& gauss_weights() const { return wg_; } // wq * G
  double kernel_factor(std::size_t i, std::size_t j) const;
  const FoldedSphere& sphere() const { return sphere_; }
  double discrete_bbar() const { return sphere_bbar_; }

  // gain and loss may be null. Arrays are node_count x ncols.
  void apply(const double* hF, const double* hG, std::size_t ncols, double* gain, double* loss) const;

  // sum_j W_j |xi_i - xi_j|^beta bbar_h hG_j: the normalized loss rate.
  void loss_rate(const double* hG, std::size_t ncols, double* out) const;

 private:
  template <int DIM>
  void apply_impl(const double* hF, const double* hG, std::size_t ncols, double* gain, double* loss) const;
  double pair_bhat_sum(std::size_t i, std::size_t j) const;

  KernelSpec kernel_;
  int D_;
  int n_;
  int order_;
  double half_;
  double dxi_;
  std::size_t nodes_;
  Vec xi_;
  Vec wq_;
  Vec wg_;
  Vec lattice_;
  FoldedSphere sphere_;
  double sphere_bbar_ = 0.0;
  bool perpendicular_pairs_ = false;
};

// Collision quantities of a field F at one position, on the normalized grid
// mapped through a local Maxwellian frame (rho, u, theta).
class LocalCollision {
 public:
  LocalCollision(const CollisionOperator& op, const GlobalMaxwellian& ref, const double* y, double t);
  // Grid scaled to an explicit local Maxwellian frame.
  LocalCollision(const CollisionOperator& op, const HydroFields& frame);
  // Frame matched to the density, bulk velocity and temperature of F itself;
  // a local Maxwellian is then represented by a constant relative density.
  static LocalCollision adapted(const CollisionOperator& op, const std::function<double(const double*)>& F,
                                const HydroFields& guess);

  std::size_t node_count() const { return op_.node_count(); }
  // Physical velocity of node i.
  const double* velocity(std::size_t i) const { return &w_[i * D_]; }
  double ref_value(std::size_t i) const { return mref_[i]; }
  double cell_volume(std::size_t i) const { return dv_[i]; }
  const HydroFields& local() const { return hydro_; }
  // rho theta^{beta/2}: converts normalized rates to physical ones.
  double rate_scale() const { return rate_scale_; }

  Vec relative(const std::function<double(const double*)>& F) const;

  struct Terms {
    Vec gain;  // physical B+ at nodes
    Vec loss;  // physical B-
  };
  Terms collide(const Vec& hF, const Vec& hG) const;
  Vec loss_rate(const Vec& hG) const;  // physical A(G)
  // Integral of B(F,F) against (1, v, |v|^2/2): residuals and the gross scale
  // sum |B+| |phi| + |B-| |phi| used to normalize them.
  struct WeakMoments {
    Vec residual;
    Vec scale;
  };
  WeakMoments weak_form_moments(const Vec& hF) const;
  // Integral of B(F,F) ln F; throws naming the node when F <= 0.
  double entropy_production(const Vec& hF) const;
  // Integral of (B+ + B-) |ln F|, the scale for entropy production.
  double entropy_scale(const Vec& hF) const;

 private:
  const CollisionOperator& op_;
  int D_;
  HydroFields hydro_;
  double rate_scale_;
  Vec w_;
  Vec mref_;
  Vec dv_;
};

// Closed form A(M)(v, x, t) = rho theta^{beta/2} a_beta((v - u)/sqrt(theta)).
double loss_rate_maxwellian(const GlobalMaxwellian& M, const KernelSpec& k, const double* v, const double* x,
                            double t);

}  // namespace bz
