#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "specunc/lp.hpp"
#include "specunc/region.hpp"
#include "specunc/spectral_measure.hpp"

namespace specunc {

/// Real periodic test function sampled on the grid theta_j = -pi + 2*pi*j/N.
/// Kernels built from a closed-form function evaluate it exactly off-grid;
/// sampled kernels interpolate linearly.
class TestKernel {
 public:
  explicit TestKernel(std::vector<double> values, std::optional<double> lipschitz = std::nullopt);

  static TestKernel from_function(std::function<double(double)> g, int grid = kDefaultGrid,
                                  std::optional<double> lipschitz = std::nullopt);
  static TestKernel constant(double value, int grid = kDefaultGrid);
  /// Poisson kernel (1 - r^2) / (1 - 2 r cos t + r^2), 0 <= r < 1.
  static TestKernel poisson(double r, int grid = kDefaultGrid);

  int grid_size() const { return static_cast<int>(values_.size()); }
  const std::vector<double>& values() const { return values_; }
  std::optional<double> lipschitz() const { return lipschitz_; }

  double operator()(double theta) const;

  /// g_k = (1/N) sum_j g(theta_j) e^{-ik theta_j} for k = 0..N/2-1.
  std::vector<Complex> fourier_coefficients() const;
  /// min |g_k| over |k| <= N/2 - 1; zero means delta_smooth is only a
  /// pseudo-metric for this kernel.
  double min_fourier_magnitude() const;
  bool is_symmetric(double tol = 1e-9) const;
  bool is_zero() const;

 private:
  std::vector<double> values_;
  std::optional<double> lipschitz_;
  std::function<double(double)> exact_;
};

/// max over the samples of K of |P[mu0](zeta) - P[mu1](zeta)|.
double delta_K(const SpectralMeasure& mu0, const SpectralMeasure& mu1, const RegionK& k);

/// sup over the grid of mu0 of |(g * (mu0 - mu1))(xi)|. Both measures must
/// share the grid size.
double delta_smooth(const SpectralMeasure& mu0, const SpectralMeasure& mu1, const TestKernel& g);

/// Mass of mu lumped onto the M-point grid: each density cell and atom goes
/// to its nearest coarse node.
std::vector<double> lump_to_grid(const SpectralMeasure& mu, int m);

struct TransportOptions {
  int grid = 256;
  /// Also solve the Kantorovich-Rubinstein dual as a separate LP.
  bool solve_dual = false;
  LpOptions lp;
};

struct TransportResult {
  double value = 0.0;          // optimal primal cost
  double lp_dual = 0.0;        // dual objective from the simplex multipliers
  /// max of int g (mu0 - mu1) over |g| <= kappa, |g|_L <= 1; set when
  /// TransportOptions::solve_dual is true.
  std::optional<double> lipschitz_dual;
  int grid = 0;

  double duality_gap() const {
    return std::max(std::abs(value - lp_dual), lipschitz_dual ? std::abs(value - *lipschitz_dual) : 0.0);
  }
};

/// Unbalanced Wasserstein-1 distance on the circle with geodesic ground
/// cost and creation/removal price kappa per unit mass.
TransportResult transport_metric_detail(const SpectralMeasure& mu0, const SpectralMeasure& mu1,
                                        double kappa, const TransportOptions& options = {});
double transport_metric(const SpectralMeasure& mu0, const SpectralMeasure& mu1, double kappa,
                        const TransportOptions& options = {});

/// Range of (1/2pi) sum_j h_j x_j over atom vectors x >= 0 on the N-grid of
/// h whose moments match c_0..c_n within eps (componentwise on real and
/// imaginary parts).
struct LinearRange {
  double lo = 0.0;
  double hi = 0.0;
};
LinearRange moment_lp_range(const CovarianceSequence& c, std::span<const double> h,
                            double eps = 0.0, const LpOptions& options = {});

struct MassRange {
  double lo = 0.0;
  double hi = 0.0;
  /// Same bounds from the dual trigonometric-envelope problems.
  double lo_dual = 0.0;
  double hi_dual = 0.0;

  double disagreement() const { return std::max(std::abs(lo - lo_dual), std::abs(hi - hi_dual)); }
};

/// Bounds on (1/2pi) int g dmu over all mu with moments c, for real c and
/// symmetric real g. The primal is solved on the kernel grid; the dual
/// envelope constraints are sampled on an `oversample`-times finer grid.
MassRange mass_range(const CovarianceSequence& c, const TestKernel& g, int oversample = 8);

}  // namespace specunc
