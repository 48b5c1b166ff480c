#include "specunc/spectral_measure.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "specunc/errors.hpp"

namespace specunc {

namespace {

std::shared_ptr<const std::vector<Complex>> make_unit_points(int n) {
  auto pts = std::make_shared<std::vector<Complex>>(n);
  for (int j = 0; j < n; ++j) {
    (*pts)[j] = std::polar(1.0, -kPi + 2.0 * kPi * j / n);
  }
  return pts;
}

constexpr double kAtomAngleTol = 1e-12;

}  // namespace

double wrap_angle(double theta) {
  double t = std::fmod(theta + kPi, 2.0 * kPi);
  if (t <= 0.0) t += 2.0 * kPi;
  return t - kPi;
}

void require_inside_disc(Complex z, const char* what) {
  if (!(std::abs(z) <= 1.0 - kBoundaryMargin)) {
    std::ostringstream os;
    os << what << ": point " << z.real() << "+" << z.imag()
       << "i must satisfy |z| <= 1 - 1e-6";
    throw InputError(os.str());
  }
}

SpectralMeasure::SpectralMeasure(std::vector<double> density, std::vector<Atom> atoms)
    : density_(std::move(density)), atoms_(std::move(atoms)) {
  if (density_.empty()) throw InputError("spectral measure: grid_size must be positive");
  for (double d : density_) {
    if (!std::isfinite(d) || d < 0.0) {
      throw InputError("spectral measure: density must be finite and nonnegative");
    }
  }
  for (auto& a : atoms_) {
    if (!std::isfinite(a.theta) || !std::isfinite(a.mass) || a.mass <= 0.0) {
      throw InputError("spectral measure: atom masses must be finite and positive");
    }
    a.theta = wrap_angle(a.theta);
  }
  std::vector<double> angles;
  angles.reserve(atoms_.size());
  for (const auto& a : atoms_) angles.push_back(a.theta);
  std::sort(angles.begin(), angles.end());
  for (std::size_t i = 1; i < angles.size(); ++i) {
    if (angles[i] - angles[i - 1] < kAtomAngleTol) {
      throw InputError("spectral measure: atom angles must be distinct");
    }
  }
  if (angles.size() > 1 && angles.front() + 2.0 * kPi - angles.back() < kAtomAngleTol) {
    throw InputError("spectral measure: atom angles must be distinct");
  }
  unit_points_ = make_unit_points(static_cast<int>(density_.size()));
}

SpectralMeasure SpectralMeasure::lebesgue(int grid) {
  return SpectralMeasure(std::vector<double>(grid, 1.0));
}

SpectralMeasure SpectralMeasure::from_function(const std::function<double(double)>& density,
                                               int grid, std::vector<Atom> atoms) {
  std::vector<double> d(grid);
  for (int j = 0; j < grid; ++j) d[j] = density(-kPi + 2.0 * kPi * j / grid);
  return SpectralMeasure(std::move(d), std::move(atoms));
}

SpectralMeasure SpectralMeasure::atomic(std::vector<Atom> atoms, int grid) {
  return SpectralMeasure(std::vector<double>(grid, 0.0), std::move(atoms));
}

double SpectralMeasure::grid_angle(int j) const {
  return -kPi + 2.0 * kPi * j / grid_size();
}

double SpectralMeasure::total_mass() const {
  double s = 0.0;
  for (double d : density_) s += d;
  s *= 2.0 * kPi / grid_size();
  for (const auto& a : atoms_) s += a.mass;
  return s;
}

SpectralMeasure SpectralMeasure::combined(double alpha, const SpectralMeasure& other,
                                          double beta) const {
  if (other.grid_size() != grid_size()) {
    throw InputError("spectral measure: cannot combine measures on different grids");
  }
  if (alpha < 0.0 || beta < 0.0) {
    throw InputError("spectral measure: combination weights must be nonnegative");
  }
  std::vector<double> d(density_.size());
  for (std::size_t j = 0; j < d.size(); ++j) d[j] = alpha * density_[j] + beta * other.density_[j];

  std::vector<Atom> atoms;
  auto add = [&](const Atom& a, double w) {
    if (w == 0.0) return;
    for (auto& existing : atoms) {
      if (std::abs(existing.theta - a.theta) < kAtomAngleTol) {
        existing.mass += w * a.mass;
        return;
      }
    }
    atoms.push_back({a.theta, w * a.mass});
  };
  for (const auto& a : atoms_) add(a, alpha);
  for (const auto& a : other.atoms_) add(a, beta);
  return SpectralMeasure(std::move(d), std::move(atoms));
}

CovarianceSequence::CovarianceSequence(std::vector<Complex> values) : values_(std::move(values)) {
  if (values_.empty()) throw InputError("covariance: sequence must contain c_0");
  for (const auto& v : values_) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      throw InputError("covariance: entries must be finite");
    }
  }
  const Complex c0 = values_.front();
  if (std::abs(c0.imag()) > 1e-12 * std::max(1.0, std::abs(c0.real()))) {
    throw InputError("covariance: c_0 must be real");
  }
  if (c0.real() < 0.0) throw InputError("covariance: c_0 must be nonnegative");
  values_.front() = Complex(c0.real(), 0.0);
}

CovarianceSequence CovarianceSequence::truncated(int m) const {
  if (m < 0 || m > order()) throw InputError("covariance: truncation order out of range");
  return CovarianceSequence(std::vector<Complex>(values_.begin(), values_.begin() + m + 1));
}

bool CovarianceSequence::is_real(double tol) const {
  const double scale = std::max(1.0, c0());
  return std::all_of(values_.begin(), values_.end(),
                     [&](const Complex& v) { return std::abs(v.imag()) <= tol * scale; });
}

PickData::PickData(std::vector<Complex> nodes, std::vector<Complex> values)
    : nodes_(std::move(nodes)), values_(std::move(values)) {
  if (nodes_.empty()) throw InputError("pick data: at least one node is required");
  if (nodes_.size() != values_.size()) {
    throw InputError("pick data: nodes and values must have equal length");
  }
  for (std::size_t k = 0; k < nodes_.size(); ++k) {
    if (!(std::abs(nodes_[k]) < 1.0)) throw InputError("pick data: nodes must satisfy |z| < 1");
    if (!std::isfinite(values_[k].real()) || !std::isfinite(values_[k].imag()) ||
        !(values_[k].real() > 0.0)) {
      throw InputError("pick data: values must have positive real part");
    }
    for (std::size_t l = 0; l < k; ++l) {
      if (std::abs(nodes_[k] - nodes_[l]) < 1e-12) {
        throw InputError("pick data: nodes must be distinct");
      }
    }
  }
}

const char* to_string(Positivity p) {
  switch (p) {
    case Positivity::positive: return "positive";
    case Positivity::nonnegative_singular: return "nonnegative_singular";
    case Positivity::invalid: return "invalid";
  }
  return "invalid";
}

CovarianceSequence moments(const SpectralMeasure& mu, int n) {
  if (n < 0) throw InputError("moments: order must be nonnegative");
  const int grid = mu.grid_size();
  const auto pts = mu.grid_points();
  const auto& dens = mu.density();
  std::vector<Complex> c(n + 1, Complex(0.0));
  for (int j = 0; j < grid; ++j) {
    if (dens[j] == 0.0) continue;
    // e^{-ik theta_j} by repeated multiplication with conj(e^{i theta_j}).
    const Complex step = std::conj(pts[j]);
    Complex e(1.0);
    for (int k = 0; k <= n; ++k) {
      c[k] += dens[j] * e;
      e *= step;
    }
  }
  for (auto& v : c) v /= static_cast<double>(grid);
  for (const auto& a : mu.atoms()) {
    const double w = a.mass / (2.0 * kPi);
    for (int k = 0; k <= n; ++k) c[k] += w * std::polar(1.0, -k * a.theta);
  }
  c[0] = Complex(c[0].real(), 0.0);
  return CovarianceSequence(std::move(c));
}

Complex herglotz_eval(const SpectralMeasure& mu, Complex z) {
  require_inside_disc(z, "herglotz_eval");
  const auto pts = mu.grid_points();
  const auto& dens = mu.density();
  Complex acc(0.0);
  for (std::size_t j = 0; j < dens.size(); ++j) {
    if (dens[j] == 0.0) continue;
    acc += dens[j] * (pts[j] + z) / (pts[j] - z);
  }
  acc /= static_cast<double>(dens.size());
  for (const auto& a : mu.atoms()) {
    const Complex e = std::polar(1.0, a.theta);
    acc += a.mass / (2.0 * kPi) * (e + z) / (e - z);
  }
  return acc;
}

double poisson_eval(const SpectralMeasure& mu, Complex z) {
  require_inside_disc(z, "poisson_eval");
  const double one_minus_r2 = 1.0 - std::norm(z);
  const auto pts = mu.grid_points();
  const auto& dens = mu.density();
  double acc = 0.0;
  for (std::size_t j = 0; j < dens.size(); ++j) {
    if (dens[j] == 0.0) continue;
    acc += dens[j] / std::norm(pts[j] - z);
  }
  acc *= one_minus_r2 / static_cast<double>(dens.size());
  for (const auto& a : mu.atoms()) {
    acc += a.mass / (2.0 * kPi) * one_minus_r2 / std::norm(std::polar(1.0, a.theta) - z);
  }
  return acc;
}

CMatrix toeplitz(const CovarianceSequence& c) {
  const int m = static_cast<int>(c.size());
  CMatrix t(m, m);
  for (int k = 0; k < m; ++k) {
    for (int l = 0; l < m; ++l) {
      t(k, l) = k >= l ? c[k - l] : std::conj(c[l - k]);
    }
  }
  return t;
}

Positivity classify_hermitian(const CMatrix& h) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalError("classify: eigenvalue solver failed");
  const auto& ev = es.eigenvalues();
  const double norm = ev.cwiseAbs().maxCoeff();
  const double lmin = ev.minCoeff();
  if (lmin < -1e-10 * std::max(1.0, norm)) return Positivity::invalid;
  if (lmin >= 1e-8 * norm && norm > 0.0) return Positivity::positive;
  return Positivity::nonnegative_singular;
}

Positivity classify(const CovarianceSequence& c) { return classify_hermitian(toeplitz(c)); }

PickData generalized_moments(const SpectralMeasure& mu, std::span<const Complex> nodes) {
  std::vector<Complex> z(nodes.begin(), nodes.end());
  std::vector<Complex> w;
  w.reserve(z.size());
  for (const auto& zk : z) w.push_back(herglotz_eval(mu, zk));
  return PickData(std::move(z), std::move(w));
}

CMatrix pick_matrix(const PickData& p) {
  const auto& z = p.nodes();
  const auto& w = p.values();
  const int m = static_cast<int>(p.size());
  CMatrix out(m, m);
  for (int k = 0; k < m; ++k) {
    for (int l = 0; l < m; ++l) {
      out(k, l) = (w[k] + std::conj(w[l])) / (1.0 - z[k] * std::conj(z[l]));
    }
  }
  return out;
}

}  // namespace specunc
