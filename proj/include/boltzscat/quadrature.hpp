#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "boltzscat/common.hpp"

namespace bz {

struct Rule1D {
  Vec nodes;
  Vec weights;
};

// Gauss-Legendre on [-1, 1].
Rule1D gauss_legendre(int n);

// Gauss-Legendre panels over [a, b], bisected until two successive levels
// agree to rtol (relative) or atol (absolute).
double adaptive_integrate(const std::function<double(double)>& f, double a, double b,
                          double rtol = 1e-10, double atol = 0.0, int max_depth = 40);

// Trapezoid weights on n uniform nodes spanning [-half, half].
Vec uniform_nodes(int n, double half);
Vec trapezoid_weights(int n, double half);

// Points on the unit sphere S^{D-1} with weights summing to |S^{D-1}|.
// D = 2: n equispaced angles (offset by half a step).
// D = 3: n Gauss-Legendre polar cosines times 2n equispaced azimuths.
struct SphereRule {
  int D = 0;
  Vec points;  // size count*D
  Vec weights;
  std::size_t count() const { return weights.size(); }
};
SphereRule sphere_rule(int D, int n);

// Merges each node with its antipode (the post-collision map only sees +-omega).
// Returns the representatives with the weight of the merged antipode (0 if none).
struct FoldedSphere {
  int D = 0;
  Vec points;
  Vec weights;
  Vec antipodal_weights;
  std::size_t count() const { return weights.size(); }
};
FoldedSphere fold_antipodes(const SphereRule& rule);

// Radical-inverse Halton point in [0,1)^dim, index >= 1.
void halton(std::size_t index, int dim, double* out);

// Chebyshev-Lobatto points on [-1, 1], increasing.
Vec chebyshev_lobatto(int n);

// Barycentric interpolation weights for arbitrary distinct nodes.
Vec barycentric_weights(const Vec& nodes);

// Values l_k(x) of all Lagrange basis polynomials at x.
void lagrange_basis(const Vec& nodes, const Vec& bw, double x, double* out);

}  // namespace bz
