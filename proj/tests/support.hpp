#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "specunc/spectral_measure.hpp"

namespace testsupport {

using specunc::Atom;
using specunc::Complex;
using specunc::kPi;
using specunc::SpectralMeasure;

inline double rel_err(Complex a, Complex b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

/// Positive trigonometric density 1 + sum a_k cos(k t + p_k) with sum |a_k| < 1,
/// scaled by `scale`, plus up to `max_atoms` random atoms.
inline SpectralMeasure random_measure(std::mt19937_64& rng, int grid = specunc::kDefaultGrid, int max_atoms = 3,
                                      bool with_density = true) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> a(4), p(4);
  double total = 0.0;
  for (int k = 0; k < 4; ++k) {
    a[k] = u(rng);
    p[k] = 2.0 * kPi * u(rng);
    total += a[k];
  }
  const double shrink = 0.95 / total;
  const double scale = 0.2 + 2.0 * u(rng);
  std::vector<double> density(grid, 0.0);
  if (with_density) {
    for (int j = 0; j < grid; ++j) {
      const double t = -kPi + 2.0 * kPi * j / grid;
      double v = 1.0;
      for (int k = 0; k < 4; ++k) v += shrink * a[k] * std::cos((k + 1) * t + p[k]);
      density[j] = scale * v;
    }
  }
  std::vector<Atom> atoms;
  const int count = std::uniform_int_distribution<int>(with_density ? 0 : 1, max_atoms)(rng);
  for (int i = 0; i < count; ++i) atoms.push_back({-kPi + 2.0 * kPi * u(rng), 0.1 + 3.0 * u(rng)});
  return SpectralMeasure(std::move(density), std::move(atoms));
}

/// Uniform point in the disc of radius r.
inline Complex random_point(std::mt19937_64& rng, double r) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return std::polar(r * std::sqrt(u(rng)), 2.0 * kPi * u(rng));
}

/// Independent Herglotz value of an AR(1) spectrum with c_k = c0 a^k, real a:
/// H(z) = c0 (1 + a z) / (1 - a z).
inline Complex ar1_herglotz(double c0, double a, Complex z) { return c0 * (1.0 + a * z) / (1.0 - a * z); }

/// Its density c0 (1 - a^2) / |1 - a e^{i t}|^2.
inline double ar1_density(double c0, double a, double t) {
  return c0 * (1.0 - a * a) / std::norm(1.0 - a * std::polar(1.0, t));
}

}  // namespace testsupport
