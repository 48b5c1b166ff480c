#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace specunc {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr int kDefaultGrid = 4096;
// Callers must keep evaluation points this far inside the unit circle.
inline constexpr double kBoundaryMargin = 1e-6;

/// Wraps an angle into (-pi, pi].
double wrap_angle(double theta);

/// A point mass: `mass` is the measure of the singleton {theta}.
struct Atom {
  double theta = 0.0;
  double mass = 0.0;
};

/// Nonnegative measure on the unit circle: a density sampled on the uniform
/// grid theta_j = -pi + 2*pi*j/N plus a list of point masses.
///
/// The stored density is the model itself; integrals against it use the
/// rectangle rule on the grid, which is exact for the piecewise-constant
/// interpretation and spectrally accurate for smooth periodic integrands.
class SpectralMeasure {
 public:
  /// Validates nonnegativity, finiteness, positive atom masses and
  /// distinct atom angles; atom angles are wrapped into (-pi, pi].
  explicit SpectralMeasure(std::vector<double> density, std::vector<Atom> atoms = {});

  static SpectralMeasure lebesgue(int grid = kDefaultGrid);
  static SpectralMeasure from_function(const std::function<double(double)>& density,
                                       int grid = kDefaultGrid, std::vector<Atom> atoms = {});
  static SpectralMeasure atomic(std::vector<Atom> atoms, int grid = kDefaultGrid);

  int grid_size() const { return static_cast<int>(density_.size()); }
  const std::vector<double>& density() const { return density_; }
  const std::vector<Atom>& atoms() const { return atoms_; }
  double grid_angle(int j) const;
  /// e^{i theta_j} for every grid node.
  std::span<const Complex> grid_points() const { return *unit_points_; }

  /// mu(T) = (2*pi/N) * sum(density) + sum(atom masses).
  double total_mass() const;

  /// alpha*this + beta*other; both must share the grid size, alpha, beta >= 0.
  SpectralMeasure combined(double alpha, const SpectralMeasure& other, double beta) const;

 private:
  std::vector<double> density_;
  std::vector<Atom> atoms_;
  std::shared_ptr<const std::vector<Complex>> unit_points_;
};

/// Finite covariance sequence c_0..c_n with c_0 real and nonnegative.
class CovarianceSequence {
 public:
  explicit CovarianceSequence(std::vector<Complex> values);

  int order() const { return static_cast<int>(values_.size()) - 1; }
  std::size_t size() const { return values_.size(); }
  const Complex& operator[](std::size_t k) const { return values_[k]; }
  const std::vector<Complex>& values() const { return values_; }
  double c0() const { return values_.front().real(); }
  /// Leading subsequence c_0..c_m.
  CovarianceSequence truncated(int m) const;
  bool is_real(double tol = 0.0) const;

 private:
  std::vector<Complex> values_;
};

/// Nevanlinna-Pick data: distinct nodes inside the unit disc and
/// Caratheodory values with positive real part.
class PickData {
 public:
  PickData(std::vector<Complex> nodes, std::vector<Complex> values);

  std::size_t size() const { return nodes_.size(); }
  const std::vector<Complex>& nodes() const { return nodes_; }
  const std::vector<Complex>& values() const { return values_; }

 private:
  std::vector<Complex> nodes_;
  std::vector<Complex> values_;
};

enum class Positivity { positive, nonnegative_singular, invalid };

const char* to_string(Positivity p);

/// c_k = (1/2pi) * integral of e^{-ik theta} dmu, k = 0..n.
CovarianceSequence moments(const SpectralMeasure& mu, int n);

/// Herglotz transform (1/2pi) * integral of (e^{it}+z)/(e^{it}-z) dmu(t).
Complex herglotz_eval(const SpectralMeasure& mu, Complex z);

/// Poisson integral; equals Re herglotz_eval.
double poisson_eval(const SpectralMeasure& mu, Complex z);

/// Hermitian Toeplitz matrix T[k][l] = c_{k-l}, with c_{-m} = conj(c_m).
CMatrix toeplitz(const CovarianceSequence& c);

/// Eigenvalue test on a Hermitian matrix: nonnegative when
/// lambda_min >= -1e-10 * max(1, |H|_2), positive when lambda_min >= 1e-8 * |H|_2.
Positivity classify_hermitian(const CMatrix& h);
Positivity classify(const CovarianceSequence& c);

/// w_k = H[mu](z_k) for distinct nodes strictly inside the disc.
PickData generalized_moments(const SpectralMeasure& mu, std::span<const Complex> nodes);

/// P[k][l] = (w_k + conj(w_l)) / (1 - z_k conj(z_l)).
CMatrix pick_matrix(const PickData& p);

/// Throws InputError unless |z| <= 1 - kBoundaryMargin.
void require_inside_disc(Complex z, const char* what);

}  // namespace specunc
