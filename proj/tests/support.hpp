#pragma once

#include <doctest.h>

#include <cmath>
#include <random>

#include "boltzscat/maxwellian.hpp"

namespace bzt {

// Random valid Maxwellian with moderate anisotropy.
inline bz::Params random_params(std::mt19937_64& rng, int D, double m = 1.0) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (;;) {
    bz::Params p = bz::Params::unit(D, m);
    p.a = 1.0 + 0.6 * u(rng);
    p.c = 1.0 + 0.6 * u(rng);
    p.b = 0.5 * u(rng) * std::sqrt(p.a * p.c);
    for (int i = 0; i < D; ++i) {
      p.x0[i] = 0.5 * u(rng);
      p.v0[i] = 0.5 * u(rng);
      for (int j = i + 1; j < D; ++j) {
        p.B(i, j) = 0.4 * u(rng);
        p.B(j, i) = -p.B(i, j);
      }
    }
    if (bz::validate_params(p).ok) return p;
  }
}

inline double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace bzt
