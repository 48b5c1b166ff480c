#pragma once

#include <vector>

#include <Eigen/Cholesky>

#include "specunc/nevanlinna_pick.hpp"
#include "specunc/region.hpp"
#include "specunc/spectral_measure.hpp"

namespace specunc {

/// Feasible discs of H[mu](z) over all mu with the given covariances.
/// T_n is factorized once; `at` can be called for many points.
class ToeplitzDiscs {
 public:
  explicit ToeplitzDiscs(const CovarianceSequence& c);

  DiscEnvelope at(Complex z) const;
  const CovarianceSequence& covariance() const { return c_; }
  bool singular() const { return singular_; }

 private:
  CovarianceSequence c_;
  bool singular_ = false;
  Eigen::LLT<CMatrix> llt_;
  double prediction_error_ = 0.0;
  Polynomial phi_;                       // monic orthogonal polynomial of degree n
  std::vector<SpectralMeasure> unique_;  // the only feasible measure when singular
};

/// Feasible discs of f(z) over all Caratheodory f interpolating the data.
class PickDiscs {
 public:
  explicit PickDiscs(const PickData& p);

  DiscEnvelope at(Complex z) const;
  const PickData& data() const { return p_; }
  bool singular() const { return singular_; }

 private:
  PickData p_;
  bool singular_ = false;
  Eigen::LLT<CMatrix> llt_;
  NevanlinnaPick np_;
};

DiscEnvelope feasible_disc_toeplitz(const CovarianceSequence& c, Complex z);
DiscEnvelope feasible_disc_pick(const PickData& p, Complex z);

struct PointDiameter {
  Complex z;
  double diameter = 0.0;
};

struct DiameterReport {
  double rho = 0.0;
  Complex argmax_z;
  /// Two singular members of the uncertainty set whose Poisson integrals
  /// at argmax_z are as far apart as the scan found.
  std::vector<SpectralMeasure> extremal;
  double extremal_separation = 0.0;
  std::vector<PointDiameter> per_point;
};

struct DiameterOptions {
  /// Golden-section refinement of the maximum along each curve of K.
  bool refine = true;
  /// Construct the extremal pair by scanning the singular members.
  bool extremal = true;
  int psi_samples = 720;
  int grid = kDefaultGrid;
};

DiameterReport diameter_toeplitz(const CovarianceSequence& c, const RegionK& k,
                                 const DiameterOptions& options = {});
DiameterReport diameter_pick(const PickData& p, const RegionK& k,
                             const DiameterOptions& options = {});

/// 4 c_0 r^{n+1} / (1 - r^2) with r the largest modulus in K.
double apriori_bound_toeplitz(double c0, int n, const RegionK& k);

/// prod_k (z - z_k) / (1 - conj(z_k) z).
Complex blaschke(std::span<const Complex> nodes, Complex z);

struct PickBound {
  double bound = 0.0;
  Complex argmax;
  /// w_k = w_0 (1 + z_k conj(alpha)) / (1 - z_k conj(alpha)): data attaining the bound.
  std::vector<Complex> equality_values;
};

/// max over the samples of K of 4 w_0 |B(zeta)| / (1 - |zeta|^2). The first
/// node must be 0.
PickBound apriori_bound_pick(std::span<const Complex> nodes, double w0, const RegionK& k);

}  // namespace specunc
