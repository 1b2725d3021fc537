#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "boltzscat/maxwellian.hpp"

namespace bz {

// Uniform tensor grid over (v, x) in [-Vmax, Vmax]^D x [-Xmax, Xmax]^D,
// in coordinates centred on the reference: v - v0 and x - x0 - t v0.
// Nodes are numbered with the v axes outer and the x axes inner.
struct PhaseGrid {
  int D = 2;
  int Nv = 16;
  double Vmax = 5.0;
  int Nx = 16;
  double Xmax = 5.0;

  // Box of nsigma marginal standard deviations of the reference at t = 0.
  static PhaseGrid around(const GlobalMaxwellian& ref, int Nv, int Nx, double nsigma = 5.5);

  std::size_t v_count() const;
  std::size_t x_count() const;
  std::size_t size() const { return v_count() * x_count(); }
  double dv() const { return 2.0 * Vmax / (Nv - 1); }
  double dx() const { return 2.0 * Xmax / (Nx - 1); }
  // Centred coordinates of node idx.
  void node(std::size_t idx, double* v, double* x) const;
  // Trapezoid weight of node idx (volume element included).
  double weight(std::size_t idx) const;
  // Union bound on the reference mass outside the box, as a fraction of m.
  double tail_fraction(const GlobalMaxwellian& ref) const;
  // Throws unless sizes are sane and tail_fraction < 1e-6.
  void check(const GlobalMaxwellian& ref) const;
  bool operator==(const PhaseGrid& o) const = default;
};

enum class Frame { Comoving, Lab };
const char* frame_name(Frame f);

// Relative density h = F / M_ref on a PhaseGrid. Lab frame at time t: F(v, x, t)
// over M(v, x, t). Comoving frame: (e^{tA} F)(v, x) = F(v, x + t v, t) over M(v, x, 0);
// t is then the time the state belongs to.
struct DistributionField {
  PhaseGrid grid;
  Params ref;
  double t = 0.0;
  Frame frame = Frame::Comoving;
  Vec h;

  // Absolute (v, x) of node idx.
  void position(std::size_t idx, double* v, double* x) const;
  // Reference value M at node idx (at time t in the lab frame, 0 in the comoving one).
  double ref_value(const GlobalMaxwellian& M, std::size_t idx) const;
};

DistributionField reference_field(const PhaseGrid& g, const Params& ref, double t, Frame frame);
// h = F(v, x) / M at each node; F is given in the field's own frame and coordinates.
DistributionField field_from(const PhaseGrid& g, const Params& ref, double t, Frame frame,
                             const std::function<double(const double* v, const double* x)>& F);

// out(v, x) = h(v, x + s v) over the centred grid, cubic in x, nearest-value
// extension outside the box.
Vec shift_along_velocity(const PhaseGrid& g, const Vec& h, double s);

// e^{delta A} on a lab field: F(v, x, t + delta) = F(v, x - delta v, t).
DistributionField free_stream(const DistributionField& f, double delta);
DistributionField to_comoving(const DistributionField& lab);
DistributionField to_lab(const DistributionField& comoving);

// max |h1 - h2|.
double weighted_sup_norm(const DistributionField& a, const DistributionField& b);
// Grid quadrature of |F1 - F2|.
double l1_distance(const DistributionField& a, const DistributionField& b);

// Conserved moment vector of F = h M (layout of invariant_count).
Vec moments(const DistributionField& f);
// Same quadrature with each invariant density replaced by its absolute value;
// the natural scale for relative moment residuals.
Vec moment_scales(const DistributionField& f);
// Grid quadrature of F ln F (0 ln 0 = 0); throws on negative h.
double h_functional(const DistributionField& f);

// Cubic tensor interpolation of a row-major array over ndim <= 6 axes; q in
// index units, clamped to the box (nearest-value extension).
double cubic_tensor_interp(const double* data, int ndim, const int* dims, const std::size_t* strides,
                           const double* q);

// Cubic tensor interpolation of a comoving h at centred points z = (v, x),
// nearest-value extension outside the box.
class FieldInterpolator {
 public:
  FieldInterpolator(const PhaseGrid& g, const Vec& h);
  double operator()(const double* z) const;

 private:
  PhaseGrid g_;
  const Vec& h_;
  std::vector<std::size_t> stride_;
};

// Smooth perturbation in whitened coordinates zeta = L(0) z:
// h = 1 + eps S(zeta), S = sum c_k cos(k . zeta + phi_k) / sum |c_k|, so
// sup |h - 1| <= eps. Wave vectors have length at most kmax.
struct Perturbation {
  double eps = 0.0;
  std::uint64_t seed = 1;
  int modes = 4;
  double kmax = 1.0;
};
DistributionField perturbed_field(const PhaseGrid& g, const Params& ref, const Perturbation& p);

// Little-endian f64 dump of h plus a JSON manifest {grid, t, frame, ref, checksum}.
void write_field(const DistributionField& f, const std::string& bin_path, const std::string& manifest_path);
DistributionField read_field(const std::string& manifest_path);
std::uint64_t fnv1a(const void* data, std::size_t bytes);

}  // namespace bz
