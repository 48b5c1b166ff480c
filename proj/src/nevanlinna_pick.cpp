#include "specunc/nevanlinna_pick.hpp"

#include <algorithm>
#include <cmath>

#include "specunc/errors.hpp"

namespace specunc {

namespace {

constexpr double kUnimodularTol = 1e-10;

Polynomial poly_mul(const Polynomial& a, const Polynomial& b) {
  Polynomial out(a.size() + b.size() - 1, Complex(0.0));
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  }
  return out;
}

Polynomial poly_axpy(Complex alpha, const Polynomial& a, Complex beta, const Polynomial& b) {
  Polynomial out(std::max(a.size(), b.size()), Complex(0.0));
  for (std::size_t i = 0; i < a.size(); ++i) out[i] += alpha * a[i];
  for (std::size_t i = 0; i < b.size(); ++i) out[i] += beta * b[i];
  return out;
}

Polynomial derivative(const Polynomial& p) {
  if (p.size() <= 1) return {Complex(0.0)};
  Polynomial out(p.size() - 1);
  for (std::size_t j = 1; j < p.size(); ++j) out[j - 1] = static_cast<double>(j) * p[j];
  return out;
}

Complex inner_factor(Complex zk, Complex z) { return (zk - z) / (1.0 - std::conj(zk) * z); }

}  // namespace

NevanlinnaPick::NevanlinnaPick(const PickData& p) : nodes_(p.nodes()), w0_(p.values().front()) {
  const auto& w = p.values();
  const Complex z0 = nodes_.front();
  const std::size_t n = nodes_.size() - 1;

  // Values of s_1 at z_1..z_n.
  std::vector<Complex> s(n);
  for (std::size_t j = 0; j < n; ++j) {
    const Complex zj = nodes_[j + 1];
    const Complex u = (w[j + 1] - w0_) / (w[j + 1] + std::conj(w0_));
    s[j] = u / ((zj - z0) / (1.0 - std::conj(z0) * zj));
  }

  for (std::size_t k = 0; k < n; ++k) {
    const Complex gamma = s[k];
    const double mod = std::abs(gamma);
    if (mod > 1.0 + kUnimodularTol) {
      throw InfeasibleError("nevanlinna-pick: Schur parameter outside the unit disc (Pick matrix indefinite)");
    }
    if (mod >= 1.0 - kUnimodularTol) {
      // A unimodular parameter forces s_k to be that constant.
      for (std::size_t j = k + 1; j < n; ++j) {
        if (std::abs(s[j] - gamma) > 1e-6) {
          throw InfeasibleError("nevanlinna-pick: data inconsistent with a singular solution");
        }
      }
      gammas_.push_back(gamma / mod);
      singular_ = true;
      return;
    }
    gammas_.push_back(gamma);
    const Complex zk = nodes_[k + 1];
    for (std::size_t j = k + 1; j < n; ++j) {
      s[j] = (s[j] - gamma) / (inner_factor(zk, nodes_[j + 1]) * (1.0 - std::conj(gamma) * s[j]));
    }
  }
}

Complex NevanlinnaPick::eval(Complex z, Complex sigma) const {
  int start = static_cast<int>(gammas_.size()) - 1;
  Complex s = sigma;
  if (singular_) {
    s = gammas_.back();
    --start;
  }
  for (int i = start; i >= 0; --i) {
    const Complex xs = inner_factor(nodes_[i + 1], z) * s;
    s = (gammas_[i] + xs) / (1.0 + std::conj(gammas_[i]) * xs);
  }
  const Complex z0 = nodes_.front();
  const Complex u = (z - z0) / (1.0 - std::conj(z0) * z) * s;
  return (w0_ + std::conj(w0_) * u) / (1.0 - u);
}

Eigen::Matrix2cd NevanlinnaPick::chain(Complex z) const {
  // Compose the Moebius maps sigma -> f as a 2x2 matrix [[A, B], [C, D]],
  // f = (A sigma + B) / (C sigma + D).
  Eigen::Matrix2cd t = Eigen::Matrix2cd::Identity();
  for (int i = static_cast<int>(gammas_.size()) - 1; i >= 0; --i) {
    const Complex xi = inner_factor(nodes_[i + 1], z);
    Eigen::Matrix2cd m;
    m << xi, gammas_[i], std::conj(gammas_[i]) * xi, 1.0;
    t = m * t;
    t /= t.cwiseAbs().maxCoeff();
  }
  const Complex z0 = nodes_.front();
  const Complex b = (z - z0) / (1.0 - std::conj(z0) * z);
  Eigen::Matrix2cd mf;
  mf << std::conj(w0_) * b, w0_, -b, 1.0;
  return mf * t;
}

DiscEnvelope NevanlinnaPick::disc(Complex z) const {
  if (singular_) return {z, eval(z), 0.0};
  const Eigen::Matrix2cd t = chain(z);
  const Complex a = t(0, 0), bb = t(0, 1), c = t(1, 0), d = t(1, 1);
  const double den = std::norm(d) - std::norm(c);
  if (!(den > 0.0)) throw NumericalError("nevanlinna-pick: degenerate Moebius map");
  return {z, (bb * std::conj(d) - a * std::conj(c)) / den, std::abs(a * d - bb * c) / den};
}

Complex NevanlinnaPick::max_entropy_remainder() const {
  if (singular_) return 0.0;
  // On the circle log Re f = log Re w_0 + log(1 - |sigma|^2) - log|C sigma + D|^2
  // plus harmonic terms, where every Moebius denominator is analytic and
  // zero-free in the disc and so averages to its value at 0. The entropy is
  // therefore const + log(1 - |sigma|^2) - 2 log|C(0) sigma + D(0)|, which
  // is maximal at sigma = -conj(C(0) / D(0)).
  const Eigen::Matrix2cd t = chain(0.0);
  return -std::conj(t(1, 0) / t(1, 1));
}

RationalFunction NevanlinnaPick::rational(Complex sigma) const {
  int start = static_cast<int>(gammas_.size()) - 1;
  Polynomial num{sigma};
  Polynomial den{Complex(1.0)};
  if (singular_) {
    num = {gammas_.back()};
    --start;
  }
  for (int i = start; i >= 0; --i) {
    const Complex zk = nodes_[i + 1];
    const Polynomial a{zk, Complex(-1.0)};
    const Polynomial b{Complex(1.0), -std::conj(zk)};
    const Polynomial bd = poly_mul(b, den);
    const Polynomial an = poly_mul(a, num);
    num = poly_axpy(gammas_[i], bd, 1.0, an);
    den = poly_axpy(1.0, bd, std::conj(gammas_[i]), an);
  }
  const Complex z0 = nodes_.front();
  const Polynomial bn{-z0, Complex(1.0)};
  const Polynomial bdn{Complex(1.0), -std::conj(z0)};
  const Polynomial d1 = poly_mul(bdn, den);
  const Polynomial n1 = poly_mul(bn, num);
  return {poly_axpy(w0_, d1, std::conj(w0_), n1), poly_axpy(1.0, d1, -1.0, n1)};
}

SpectralMeasure NevanlinnaPick::boundary_measure(Complex sigma, int grid) const {
  if (!singular_ && std::abs(std::abs(sigma) - 1.0) > kUnimodularTol) {
    throw InputError("nevanlinna-pick: boundary solutions need a unimodular remainder");
  }
  const auto f = rational(sigma);
  const Polynomial dden = derivative(f.den);
  std::vector<Atom> atoms;
  const double slack = 1e-10 * std::max(1.0, 2.0 * kPi * w0_.real());
  for (auto zeta : polyroots(f.den)) {
    if (std::abs(std::abs(zeta) - 1.0) > 1e-6) {
      throw NumericalError("nevanlinna-pick: boundary solution has a pole off the unit circle");
    }
    zeta /= std::abs(zeta);
    // Near an atom of mass m at zeta, f ~ -(m / pi) zeta / (z - zeta).
    const Complex residue = polyval(f.num, zeta) / polyval(dden, zeta);
    const double mass = (-kPi * residue / zeta).real();
    if (mass < -slack) throw NumericalError("nevanlinna-pick: negative atom mass");
    if (mass > 0.0) atoms.push_back({std::arg(zeta), mass});
  }
  return SpectralMeasure::atomic(std::move(atoms), grid);
}

}  // namespace specunc
