#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "specunc/region.hpp"
#include "specunc/spectral_measure.hpp"

namespace specunc {

/// Power convention for the demo sinusoids.
///   as_displayed: cos(w t + phi) contributes (1/2) cos(w k) to the
///                 autocorrelation, as the displayed processes imply.
///   as_stated:    a unit sinusoid contributes cos(w k) and the halved pair
///                 in the second demo half of that per line; both demos then
///                 have total power c_0 = 28/9.
enum class C0Convention { as_displayed, as_stated };

const char* to_string(C0Convention c);
C0Convention c0_convention_from_string(const std::string& s);

/// A spectral line pair at +-omega, each atom with the given mass.
struct LinePair {
  double omega = 0.0;
  double mass = 0.0;
};

/// Sinusoids plus the MA(1) noise w_t + w_{t-1}/3 with unit-variance w.
struct DemoFixture {
  std::string name;
  C0Convention convention = C0Convention::as_displayed;
  std::vector<LinePair> lines;
  RegionK k;
  /// Filter-bank poles; empty for the covariance-only demo.
  std::vector<Complex> poles;

  /// The true spectrum: MA(1) density |1 + e^{i theta}/3|^2 plus the atoms.
  SpectralMeasure measure(int grid = kDefaultGrid) const;
  /// c_0..c_n in closed form.
  CovarianceSequence covariance(int n) const;
  double c0() const;
  /// A realization of the process with random phases, length `length`.
  std::vector<double> simulate(std::size_t length, std::uint64_t seed) const;
};

/// Lines at 0.5 and 1.0 with K the circle |z| = 0.9.
DemoFixture sec6_fixture(C0Convention convention);
/// Lines at 0.5 and 0.6 (half amplitude) and 1.0, K the two circles
/// 0.65 e^{+-0.5i} + 0.25 T and the eleven tuned filter poles.
DemoFixture sec8_fixture(C0Convention convention);

}  // namespace specunc
