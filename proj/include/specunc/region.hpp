#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "specunc/spectral_measure.hpp"

namespace specunc {

inline constexpr int kDefaultShapeSamples = 512;

/// A circle or arc center + radius * e^{it}, t in [t_from, t_to].
/// A closed curve is periodic in t.
struct Curve {
  Complex center;
  double radius = 0.0;
  double t_from = 0.0;
  double t_to = 2.0 * kPi;
  bool closed = true;

  Complex at(double t) const;
};

/// One discretization point of K. `curve` is -1 for isolated points.
struct RegionSample {
  Complex z;
  int curve = -1;
  double t = 0.0;
};

/// Compact evaluation region inside the unit disc, built from circles,
/// arcs, filled discs and isolated points, together with its finite
/// discretization.
class RegionK {
 public:
  RegionK() = default;

  RegionK& add_circle(Complex center, double radius, int samples = kDefaultShapeSamples);
  RegionK& add_arc(Complex center, double radius, double from, double to,
                   int samples = kDefaultShapeSamples);
  /// Concentric rings r = R*i/rings (i = 1..rings) plus the center; the
  /// outer ring carries `samples` points.
  RegionK& add_disc(Complex center, double radius, int rings = 16,
                    int samples = kDefaultShapeSamples);
  RegionK& add_point(Complex z);
  /// Circle sampled at exactly the given angles t (used to align with a grid).
  RegionK& add_circle_at(Complex center, double radius, std::span<const double> angles);

  /// Parses `circle:R`, `circle:R@cx,cy`, `disc:R[:grid=M][@cx,cy]`,
  /// `arc:R:from:to[@cx,cy]`, `point:x[,y]`, joined by commas. A center
  /// may also be given in polar form `@rho<phi`.
  static RegionK parse(std::string_view text, int samples = kDefaultShapeSamples);

  const std::vector<RegionSample>& samples() const { return samples_; }
  const std::vector<Curve>& curves() const { return curves_; }
  bool empty() const { return samples_.empty(); }
  /// Largest modulus over the continuous region (not only the samples).
  double max_modulus() const { return max_modulus_; }

 private:
  void push(RegionSample s);
  void note_modulus(double r);

  std::vector<Curve> curves_;
  std::vector<RegionSample> samples_;
  double max_modulus_ = 0.0;
};

}  // namespace specunc
