#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "specunc/nevanlinna_pick.hpp"
#include "specunc/region.hpp"
#include "specunc/spectral_measure.hpp"

namespace specunc {

/// First-order filter bank G_k(z) = z / (z - z_k) with z_0 = 0.
class FilterBank {
 public:
  /// Throws InputError unless poles[0] == 0, the poles are distinct and
  /// every |z_k| < 1.
  explicit FilterBank(std::vector<Complex> poles);

  const std::vector<Complex>& poles() const { return poles_; }
  std::size_t size() const { return poles_.size(); }
  /// True when every non-real pole has its conjugate in the bank.
  bool conjugate_closed(double tol = 1e-12) const;
  /// G_k(z).
  Complex transfer(std::size_t k, Complex z) const;

 private:
  std::vector<Complex> poles_;
};

/// Central Nevanlinna-Pick solution: the interpolant of maximal entropy,
/// reached by the constant terminal remainder
/// NevanlinnaPick::max_entropy_remainder().
class CentralSolution {
 public:
  /// Requires a positive definite Pick matrix; singular or indefinite data
  /// raise InfeasibleError.
  explicit CentralSolution(const PickData& p);

  Complex operator()(Complex z) const { return np_.eval(z, sigma_); }
  Complex remainder() const { return sigma_; }
  const RationalFunction& rational() const { return rational_; }
  const NevanlinnaPick& reduction() const { return np_; }

 private:
  NevanlinnaPick np_;
  Complex sigma_;
  RationalFunction rational_;
};

CentralSolution np_central(const PickData& p);

/// Density Re f(rho e^{i theta}) of the central solution on the grid,
/// with rho = 1 - 1e-8.
SpectralMeasure np_spectrum(const PickData& p, int grid = kDefaultGrid);

/// Sample estimates of w_k = H[mu](z_k) with batch-means standard errors.
struct WEstimate {
  PickData data;
  std::vector<double> stderr_re;
  std::vector<double> stderr_im;
};

/// Runs u_k(t) = z_k u_k(t-1) + y_t from rest, drops a warm-up prefix of
/// ceil(log(1e-8) / log|z_k|) samples and estimates
///   Re w_k = (1 - |z_k|^2) avg |u_k|^2,   Im w_k = Im 2 avg(u_k y).
/// Needs at least 1000 samples and a conjugate-closed bank.
WEstimate estimate_w_from_samples(std::span<const double> y, const FilterBank& bank);

struct TuneOptions {
  int restarts = 8;
  std::uint64_t seed = 1;
  /// Optional starting bank for the first restart; must have n + 1 poles.
  std::optional<FilterBank> init;
  /// Evaluations per restart are capped at this multiple of the dimension.
  int evaluations_per_dim = 400;
  double simplex_tol = 1e-9;
};

struct TuneResult {
  FilterBank bank;
  double bound = 0.0;
  /// Bound of the starting point of the first restart.
  double initial_bound = 0.0;
  /// Best bound at the end of each restart.
  std::vector<double> objective_trace;
};

/// Minimizes the a-priori bound 4 w_0 max_K |B(zeta)| / (1 - |zeta|^2)
/// over n conjugate-closed poles (z_0 = 0 fixed) with Nelder-Mead.
TuneResult tune_poles(int n, const RegionK& k, double w0, const TuneOptions& options = {});

}  // namespace specunc
