#pragma once

#include <vector>

#include "specunc/schur_levinson.hpp"
#include "specunc/spectral_measure.hpp"

namespace specunc {

/// Center and radius of the disc of admissible values of a Caratheodory
/// function at the point z.
struct DiscEnvelope {
  Complex z;
  Complex center;
  double radius = 0.0;
};

/// f(z) = num(z) / den(z).
struct RationalFunction {
  Polynomial num;
  Polynomial den;

  Complex operator()(Complex z) const { return polyval(num, z) / polyval(den, z); }
};

/// Schur-Nevanlinna reduction of Pick data. The first node is peeled with
/// the Blaschke factor b_0(z) = (z - z_0)/(1 - conj(z_0) z), which is z for
/// z_0 = 0:
///   f = (w_0 + conj(w_0) b_0 s_1) / (1 - b_0 s_1),
///   s_k = (gamma_k + xi_k s_{k+1}) / (1 + conj(gamma_k) xi_k s_{k+1}),
///   xi_k(z) = (z_k - z) / (1 - conj(z_k) z),  gamma_k = s_k(z_k).
/// Every solution corresponds to a terminal Schur function s_{n+1}; the
/// constant remainder sigma (|sigma| <= 1) covers the central solution
/// (sigma = 0) and the singular boundary solutions (|sigma| = 1).
class NevanlinnaPick {
 public:
  /// Throws InfeasibleError when a parameter leaves the closed unit disc.
  /// A unimodular parameter with consistent remaining data marks singular
  /// (uniquely solvable) data.
  explicit NevanlinnaPick(const PickData& p);

  const std::vector<Complex>& nodes() const { return nodes_; }
  const std::vector<Complex>& gammas() const { return gammas_; }
  bool singular() const { return singular_; }

  /// f(z) for the constant remainder sigma; ignored for singular data.
  /// No boundary check is applied, so radii up to 1 - 1e-8 are allowed.
  Complex eval(Complex z, Complex sigma = Complex(0.0)) const;

  /// Disc {f(z) : |sigma| <= 1}; radius 0 for singular data.
  DiscEnvelope disc(Complex z) const;
  /// The constant remainder whose solution maximizes the entropy
  /// (1/2pi) int log Re f(e^{it}) dt. Unlike sigma = 0 it does not depend on
  /// the order of the nodes; it is 0 when every node is at the origin.
  Complex max_entropy_remainder() const;

  /// Coefficient form of the solution with constant remainder sigma.
  RationalFunction rational(Complex sigma = Complex(0.0)) const;

  /// Atomic measure of the solution with unimodular sigma (singular data
  /// ignore sigma): atoms at the poles of f on the circle.
  SpectralMeasure boundary_measure(Complex sigma, int grid = kDefaultGrid) const;

 private:
  /// Coefficient matrix of sigma -> f(z) for the whole reduction.
  Eigen::Matrix2cd chain(Complex z) const;

  std::vector<Complex> nodes_;
  Complex w0_;
  std::vector<Complex> gammas_;
  bool singular_ = false;
};

}  // namespace specunc
