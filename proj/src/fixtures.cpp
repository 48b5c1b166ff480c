#include "specunc/fixtures.hpp"

#include <cmath>
#include <random>

#include "specunc/errors.hpp"

namespace specunc {

const char* to_string(C0Convention c) { return c == C0Convention::as_displayed ? "as-displayed" : "as-stated"; }

C0Convention c0_convention_from_string(const std::string& s) {
  if (s == "as-displayed") return C0Convention::as_displayed;
  if (s == "as-stated") return C0Convention::as_stated;
  throw InputError("unknown c0 convention '" + s + "' (expected as-displayed or as-stated)");
}

namespace {

constexpr double kMaCoefficient = 1.0 / 3.0;

// Atom mass at each of +-omega for a sinusoid whose autocorrelation is
// `power` * cos(omega k).
double mass_for_power(double power) { return kPi * power; }

}  // namespace

SpectralMeasure DemoFixture::measure(int grid) const {
  std::vector<Atom> atoms;
  for (const auto& l : lines) {
    atoms.push_back({l.omega, l.mass});
    atoms.push_back({-l.omega, l.mass});
  }
  return SpectralMeasure::from_function(
      [](double t) { return std::norm(1.0 + std::polar(kMaCoefficient, t)); }, grid, std::move(atoms));
}

CovarianceSequence DemoFixture::covariance(int n) const {
  if (n < 0) throw InputError("fixture covariance: n must be nonnegative");
  std::vector<Complex> c(n + 1, Complex(0.0));
  for (int k = 0; k <= n; ++k) {
    for (const auto& l : lines) c[k] += l.mass / kPi * std::cos(l.omega * k);
  }
  c[0] += 1.0 + kMaCoefficient * kMaCoefficient;
  if (n >= 1) c[1] += kMaCoefficient;
  return CovarianceSequence(std::move(c));
}

double DemoFixture::c0() const { return covariance(0).c0(); }

std::vector<double> DemoFixture::simulate(std::size_t length, std::uint64_t seed) const {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> phase(-kPi, kPi);
  std::normal_distribution<double> noise(0.0, 1.0);
  std::vector<double> amp, ph;
  for (const auto& l : lines) {
    // Mass m at +-omega is autocorrelation (m / pi) cos(omega k) = (A^2 / 2) cos(omega k).
    amp.push_back(std::sqrt(2.0 * l.mass / kPi));
    ph.push_back(phase(rng));
  }
  std::vector<double> y(length);
  double prev = noise(rng);
  for (std::size_t t = 0; t < length; ++t) {
    const double w = noise(rng);
    double v = w + kMaCoefficient * prev;
    prev = w;
    for (std::size_t i = 0; i < lines.size(); ++i) v += amp[i] * std::cos(lines[i].omega * t + ph[i]);
    y[t] = v;
  }
  return y;
}

DemoFixture sec6_fixture(C0Convention convention) {
  DemoFixture f;
  f.name = "sec6";
  f.convention = convention;
  // Unit sinusoids: power 1/2 each as displayed, 1 as stated.
  const double p = convention == C0Convention::as_displayed ? 0.5 : 1.0;
  f.lines = {{0.5, mass_for_power(p)}, {1.0, mass_for_power(p)}};
  f.k.add_circle(Complex(0.0), 0.9);
  return f;
}

DemoFixture sec8_fixture(C0Convention convention) {
  DemoFixture f;
  f.name = "sec8";
  f.convention = convention;
  // As displayed, the (cos + cos)/2 pair has amplitude 1/2 and power 1/8
  // per line; as stated, the unit line has power 1 and the pair half of it.
  const bool displayed = convention == C0Convention::as_displayed;
  const double pair = displayed ? 0.125 : 0.5;
  const double unit = displayed ? 0.5 : 1.0;
  f.lines = {{0.5, mass_for_power(pair)}, {0.6, mass_for_power(pair)}, {1.0, mass_for_power(unit)}};
  f.k.add_circle(std::polar(0.65, 0.5), 0.25);
  f.k.add_circle(std::polar(0.65, -0.5), 0.25);
  f.poles = {Complex(0.0)};
  for (const Complex z : {Complex(0.581, 0.480), Complex(0.681, 0.470), Complex(0.738, 0.422),
                          Complex(0.755, 0.271), Complex(0.765, 0.357)}) {
    f.poles.push_back(z);
    f.poles.push_back(std::conj(z));
  }
  return f;
}

}  // namespace specunc
