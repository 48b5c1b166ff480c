#pragma once

#include <vector>

#include "specunc/spectral_measure.hpp"

namespace specunc {

/// Polynomial coefficients in ascending powers of z.
using Polynomial = std::vector<Complex>;

Complex polyval(const Polynomial& p, Complex z);
/// Reversed polynomial of formal degree `degree`: p*(z) = z^degree conj(p(1/conj z)).
Polynomial reversed(const Polynomial& p, int degree);
/// Roots of a polynomial with nonzero leading coefficient, from the
/// eigenvalues of its companion matrix.
std::vector<Complex> polyroots(const Polynomial& p);

/// Partial autocorrelation (Schur) coordinates of a nonnegative sequence.
///
/// The convention is the one for which phi_k = z phi_{k-1} - conj(gamma_k) phi_{k-1}^*
/// produces the monic orthogonal polynomials, so gamma_1 = c_1 / c_0 and a
/// sequence c_k = c_0 conj(a)^k has gammas (conj(a), 0, ..., 0).
struct SchurParameters {
  double c0 = 0.0;
  std::vector<Complex> gammas;
  /// True when the last parameter is unimodular (deterministic process).
  bool singular = false;
};

/// Orthogonal polynomials of the first (phi) and second (psi) kind,
/// together with their reversals, for k = 0..n.
struct OrthogonalPolynomials {
  std::vector<Polynomial> phi;
  std::vector<Polynomial> phi_star;
  std::vector<Polynomial> psi;
  std::vector<Polynomial> psi_star;
};

/// Levinson recursion. Stops at the first unimodular parameter when the
/// Toeplitz matrix is singular. Throws InfeasibleError for indefinite data
/// or c_0 = 0.
SchurParameters covariance_to_schur(const CovarianceSequence& c);

/// Inverse of covariance_to_schur.
CovarianceSequence schur_to_covariance(const SchurParameters& s);

OrthogonalPolynomials orthogonal_polynomials(const SchurParameters& s);

/// c_0 * prod(1 - |gamma_k|^2): the one-step prediction error variance.
double prediction_error(const SchurParameters& s);

/// Caratheodory function c_0 (psi_n^* + z s psi_n) / (phi_n^* - z s phi_n)
/// for a constant Schur remainder s (|s| <= 1). s = 0 gives the maximum
/// entropy solution; |s| = 1 gives the singular completions.
Complex schur_parameterized_value(double c0, const OrthogonalPolynomials& polys, Complex z,
                                  Complex remainder);

/// Maximum-entropy density c_0 prod(1 - |gamma_k|^2) / |phi_n(e^{i theta})|^2.
/// Requires positive data.
SpectralMeasure max_entropy_spectrum(const CovarianceSequence& c, int grid = kDefaultGrid);

/// Entropy integral of the density part, (2pi/N) sum log(density).
double entropy(const SpectralMeasure& mu);

/// The values of c_{n+1} making T_{n+1} singular form the circle
/// center + radius * e^{i psi}.
struct CompletionCircle {
  Complex center;
  double radius = 0.0;

  Complex at(double psi) const { return center + std::polar(radius, psi); }
};

/// Requires positive data.
CompletionCircle singular_completions(const CovarianceSequence& c);

/// c extended by the singular completion c_{n+1} = circle.center + radius * gamma,
/// |gamma| = 1.
CovarianceSequence extend_singular(const CovarianceSequence& c, Complex gamma);

/// The unique measure of a singular sequence: atoms at the roots of the
/// terminal orthogonal polynomial, masses from the moment equations solved
/// in the least-squares sense.
SpectralMeasure atomic_measure(const CovarianceSequence& singular, int grid = kDefaultGrid);
/// Same, from Schur coordinates whose last parameter is unimodular; avoids
/// re-running the recursion on an ill-conditioned singular sequence.
SpectralMeasure atomic_measure(const SchurParameters& singular, int grid = kDefaultGrid);

}  // namespace specunc
