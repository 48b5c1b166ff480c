#include "specunc/schur_levinson.hpp"

#include <algorithm>
#include <cmath>

#include "specunc/errors.hpp"

namespace specunc {

namespace {

// |gamma| within this of 1 is treated as the singular boundary.
constexpr double kUnimodularTol = 1e-10;

Polynomial shift_minus(const Polynomial& a, Complex gamma_bar, const Polynomial& a_star,
                       double sign) {
  // z*a(z) + sign * gamma_bar * a_star(z)
  Polynomial out(a.size() + 1, Complex(0.0));
  for (std::size_t j = 0; j < a.size(); ++j) out[j + 1] += a[j];
  for (std::size_t j = 0; j < a_star.size(); ++j) out[j] += sign * gamma_bar * a_star[j];
  return out;
}

}  // namespace

Complex polyval(const Polynomial& p, Complex z) {
  Complex acc(0.0);
  for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * z + *it;
  return acc;
}

Polynomial reversed(const Polynomial& p, int degree) {
  Polynomial out(degree + 1, Complex(0.0));
  for (int j = 0; j <= degree && j < static_cast<int>(p.size()); ++j) {
    out[degree - j] = std::conj(p[j]);
  }
  return out;
}

std::vector<Complex> polyroots(const Polynomial& p) {
  int deg = static_cast<int>(p.size()) - 1;
  while (deg > 0 && p[deg] == Complex(0.0)) --deg;
  if (deg <= 0) return {};
  CMatrix companion = CMatrix::Zero(deg, deg);
  for (int i = 1; i < deg; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < deg; ++i) companion(i, deg - 1) = -p[i] / p[deg];
  Eigen::ComplexEigenSolver<CMatrix> es(companion, false);
  if (es.info() != Eigen::Success) throw NumericalError("polyroots: eigenvalue solver failed");
  std::vector<Complex> roots(es.eigenvalues().data(), es.eigenvalues().data() + deg);
  Polynomial dp(deg);
  for (int j = 1; j <= deg; ++j) dp[j - 1] = static_cast<double>(j) * p[j];
  for (auto& r : roots) {
    const Complex d = polyval(dp, r);
    if (std::abs(d) > 0.0) r -= polyval(p, r) / d;
  }
  return roots;
}

SchurParameters covariance_to_schur(const CovarianceSequence& c) {
  if (!(c.c0() > 0.0)) throw InfeasibleError("covariance_to_schur: c_0 must be positive");
  if (classify(c) == Positivity::invalid) {
    throw InfeasibleError("covariance_to_schur: Toeplitz matrix is indefinite");
  }
  SchurParameters s;
  s.c0 = c.c0();
  Polynomial a{Complex(1.0)};
  double err = c.c0();
  for (int k = 0; k < c.order(); ++k) {
    Complex acc(0.0);
    for (int j = 0; j <= k; ++j) acc += std::conj(a[j]) * c[j + 1];
    Complex gamma = acc / err;
    const double mod = std::abs(gamma);
    if (mod > 1.0 + kUnimodularTol) {
      throw InfeasibleError("covariance_to_schur: Schur parameter outside the unit disc");
    }
    if (mod >= 1.0 - kUnimodularTol) {
      s.gammas.push_back(gamma / mod);
      s.singular = true;
      return s;
    }
    s.gammas.push_back(gamma);
    a = shift_minus(a, std::conj(gamma), reversed(a, k), -1.0);
    err *= 1.0 - std::norm(gamma);
  }
  return s;
}

CovarianceSequence schur_to_covariance(const SchurParameters& s) {
  if (!(s.c0 > 0.0)) throw InputError("schur_to_covariance: c_0 must be positive");
  std::vector<Complex> c{Complex(s.c0)};
  Polynomial a{Complex(1.0)};
  double err = s.c0;
  const int n = static_cast<int>(s.gammas.size());
  for (int k = 0; k < n; ++k) {
    const Complex gamma = s.gammas[k];
    const double mod = std::abs(gamma);
    if (mod > 1.0 + kUnimodularTol || (mod >= 1.0 - kUnimodularTol && k + 1 < n)) {
      throw InputError("schur_to_covariance: only the last parameter may be unimodular");
    }
    Complex next = gamma * err;
    for (int j = 0; j < k; ++j) next -= std::conj(a[j]) * c[j + 1];
    c.push_back(next);
    a = shift_minus(a, std::conj(gamma), reversed(a, k), -1.0);
    err *= std::max(0.0, 1.0 - std::norm(gamma));
  }
  return CovarianceSequence(std::move(c));
}

OrthogonalPolynomials orthogonal_polynomials(const SchurParameters& s) {
  OrthogonalPolynomials out;
  Polynomial phi{Complex(1.0)};
  Polynomial psi{Complex(1.0)};
  out.phi.push_back(phi);
  out.phi_star.push_back(reversed(phi, 0));
  out.psi.push_back(psi);
  out.psi_star.push_back(reversed(psi, 0));
  for (std::size_t k = 0; k < s.gammas.size(); ++k) {
    const Complex gbar = std::conj(s.gammas[k]);
    const int deg = static_cast<int>(k);
    phi = shift_minus(phi, gbar, reversed(phi, deg), -1.0);
    psi = shift_minus(psi, gbar, reversed(psi, deg), +1.0);
    out.phi.push_back(phi);
    out.phi_star.push_back(reversed(phi, deg + 1));
    out.psi.push_back(psi);
    out.psi_star.push_back(reversed(psi, deg + 1));
  }
  return out;
}

double prediction_error(const SchurParameters& s) {
  double err = s.c0;
  for (const auto& g : s.gammas) err *= std::max(0.0, 1.0 - std::norm(g));
  return err;
}

Complex schur_parameterized_value(double c0, const OrthogonalPolynomials& polys, Complex z,
                                  Complex remainder) {
  const auto& phi = polys.phi.back();
  const auto& phi_star = polys.phi_star.back();
  const auto& psi = polys.psi.back();
  const auto& psi_star = polys.psi_star.back();
  const Complex zs = z * remainder;
  return c0 * (polyval(psi_star, z) + zs * polyval(psi, z)) /
         (polyval(phi_star, z) - zs * polyval(phi, z));
}

SpectralMeasure max_entropy_spectrum(const CovarianceSequence& c, int grid) {
  const auto s = covariance_to_schur(c);
  if (s.singular) throw InfeasibleError("max_entropy_spectrum: covariance sequence is singular");
  const auto polys = orthogonal_polynomials(s);
  const double err = prediction_error(s);
  const auto& phi = polys.phi.back();
  std::vector<double> density(grid);
  for (int j = 0; j < grid; ++j) {
    const Complex e = std::polar(1.0, -kPi + 2.0 * kPi * j / grid);
    density[j] = err / std::norm(polyval(phi, e));
  }
  return SpectralMeasure(std::move(density));
}

double entropy(const SpectralMeasure& mu) {
  double acc = 0.0;
  for (double d : mu.density()) acc += std::log(d);
  return acc * 2.0 * kPi / mu.grid_size();
}

CompletionCircle singular_completions(const CovarianceSequence& c) {
  const auto s = covariance_to_schur(c);
  if (s.singular) throw InfeasibleError("singular_completions: covariance sequence is singular");
  const auto polys = orthogonal_polynomials(s);
  const auto& a = polys.phi.back();
  const int n = c.order();
  Complex center(0.0);
  for (int j = 0; j < n; ++j) center -= std::conj(a[j]) * c[j + 1];
  return {center, prediction_error(s)};
}

CovarianceSequence extend_singular(const CovarianceSequence& c, Complex gamma) {
  const auto circle = singular_completions(c);
  auto values = c.values();
  values.push_back(circle.center + circle.radius * gamma / std::abs(gamma));
  return CovarianceSequence(std::move(values));
}

SpectralMeasure atomic_measure(const CovarianceSequence& singular, int grid) {
  return atomic_measure(covariance_to_schur(singular), grid);
}

SpectralMeasure atomic_measure(const SchurParameters& s, int grid) {
  if (s.gammas.empty() || std::abs(std::abs(s.gammas.back()) - 1.0) > kUnimodularTol) {
    throw InfeasibleError("atomic_measure: covariance sequence is not singular");
  }
  const auto singular = schur_to_covariance(s);
  const auto polys = orthogonal_polynomials(s);
  auto roots = polyroots(polys.phi.back());
  for (auto& r : roots) {
    if (std::abs(std::abs(r) - 1.0) > 1e-6) {
      throw NumericalError("atomic_measure: orthogonal polynomial root off the unit circle");
    }
    r /= std::abs(r);
  }
  const int atoms = static_cast<int>(roots.size());
  const int rows = static_cast<int>(singular.size());
  // (1/2pi) sum_i m_i e^{-ik theta_i} = c_k, real and imaginary parts stacked.
  Eigen::MatrixXd a(2 * rows, atoms);
  Eigen::VectorXd b(2 * rows);
  for (int k = 0; k < rows; ++k) {
    for (int i = 0; i < atoms; ++i) {
      const Complex e = std::pow(std::conj(roots[i]), k) / (2.0 * kPi);
      a(2 * k, i) = e.real();
      a(2 * k + 1, i) = e.imag();
    }
    b(2 * k) = singular[k].real();
    b(2 * k + 1) = singular[k].imag();
  }
  const Eigen::VectorXd m = a.colPivHouseholderQr().solve(b);
  const double slack = 1e-10 * std::max(1.0, 2.0 * kPi * singular.c0());
  std::vector<Atom> out;
  for (int i = 0; i < atoms; ++i) {
    if (m(i) < -slack) throw NumericalError("atomic_measure: negative atom mass");
    if (m(i) > 0.0) out.push_back({std::arg(roots[i]), m(i)});
  }
  return SpectralMeasure::atomic(std::move(out), grid);
}

}  // namespace specunc
