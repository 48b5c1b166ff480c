#include "doctest.h"
#include "specunc/errors.hpp"
#include "specunc/fixtures.hpp"
#include "specunc/schur_levinson.hpp"
#include "specunc/three.hpp"
#include "specunc/uncertainty.hpp"
#include "support.hpp"

using namespace specunc;
using testsupport::random_measure;
using testsupport::random_point;
using testsupport::rel_err;

namespace {

std::vector<Complex> random_nodes(std::mt19937_64& rng, int count, double r) {
  std::vector<Complex> nodes{0.0};
  for (int k = 0; k < count; ++k) nodes.push_back(random_point(rng, r));
  return nodes;
}

// Local maxima of a sampled density restricted to (lo, hi).
std::vector<double> peaks(const SpectralMeasure& mu, double lo, double hi) {
  std::vector<double> out;
  const auto& d = mu.density();
  const int n = mu.grid_size();
  for (int j = 1; j + 1 < n; ++j) {
    const double t = mu.grid_angle(j);
    if (t > lo && t < hi && d[j] > d[j - 1] && d[j] >= d[j + 1]) out.push_back(t);
  }
  return out;
}

double zero_pole_baseline(int n, const RegionK& k, double w0) {
  double best = 0.0;
  for (const auto& s : k.samples()) {
    const double r = std::abs(s.z);
    best = std::max(best, 4.0 * w0 * std::pow(r, n + 1) / (1.0 - r * r));
  }
  return best;
}

}  // namespace

TEST_CASE("filter banks") {
  const FilterBank bank({0.0, Complex(0.3, 0.4), Complex(0.3, -0.4), -0.5});
  CHECK(bank.size() == 4);
  CHECK(bank.conjugate_closed());
  CHECK(rel_err(bank.transfer(1, 0.9), 0.9 / (0.9 - Complex(0.3, 0.4))) < 1e-15);
  CHECK_FALSE(FilterBank({0.0, Complex(0.3, 0.4)}).conjugate_closed());
  CHECK_THROWS_AS(FilterBank({0.1, 0.2}), InputError);
  CHECK_THROWS_AS(FilterBank({0.0, 0.2, 0.2}), InputError);
  CHECK_THROWS_AS(FilterBank({0.0, 1.0}), InputError);
}

TEST_CASE("central solution examples") {
  std::mt19937_64 rng(51);
  const auto single = np_central(PickData({0.0}, {1.7}));
  for (int i = 0; i < 5; ++i) CHECK(rel_err(single(random_point(rng, 0.95)), 1.7) < 1e-14);

  const auto flat = np_central(PickData({0.0, 0.5}, {1.0, 1.0}));
  for (int i = 0; i < 5; ++i) CHECK(rel_err(flat(random_point(rng, 0.95)), 1.0) < 1e-14);

  const auto nodes = random_nodes(rng, 6, 0.9);
  const auto leb = np_central(generalized_moments(SpectralMeasure::lebesgue(), nodes));
  for (int i = 0; i < 5; ++i) CHECK(rel_err(leb(random_point(rng, 0.95)), 1.0) < 1e-10);

  CHECK_THROWS_AS(np_central(PickData({0.0, 0.5}, {1.0, 3.0})), InfeasibleError);
  CHECK_THROWS_AS(np_central(PickData({0.0, 0.5}, {1.0, 5.0})), InfeasibleError);
}

TEST_CASE("central spectrum examples") {
  std::mt19937_64 rng(52);
  const auto nodes = random_nodes(rng, 4, 0.8);
  const auto leb = np_spectrum(generalized_moments(SpectralMeasure::lebesgue(), nodes));
  for (double d : leb.density()) CHECK(d == doctest::Approx(1.0).epsilon(1e-9));

  // Pick data of an AR(1) spectrum: s_1 is constant, so the solution with
  // terminal remainder 0 reproduces the AR(1) spectrum for any node set.
  const double c0 = 1.3, a = -0.6;
  std::vector<Complex> w;
  for (const Complex z : nodes) w.push_back(testsupport::ar1_herglotz(c0, a, z));
  const NevanlinnaPick np(PickData(nodes, w));
  double worst = 0.0;
  for (int j = 0; j < 512; ++j) {
    const double t = -kPi + 2.0 * kPi * j / 512.0;
    worst = std::max(worst, std::abs(np.eval(std::polar(1.0 - 1e-8, t)).real() - testsupport::ar1_density(c0, a, t)));
  }
  CHECK(worst < 1e-4);
}

TEST_CASE("central solution is the maximum-entropy interpolant") {
  std::mt19937_64 rng(56);
  for (int trial = 0; trial < 10; ++trial) {
    const auto mu = random_measure(rng);
    auto nodes = random_nodes(rng, 2 + trial % 4, 0.7);
    const auto p = generalized_moments(mu, nodes);
    const auto me = np_spectrum(p);
    const int n = me.grid_size();

    // Stationarity: 1/density lies in the real span of Re K_k, Im K_k with
    // K_k(t) = (e^{it} + z_k) / (e^{it} - z_k). Checked by least squares.
    Eigen::MatrixXd basis(n, 2 * nodes.size());
    Eigen::VectorXd target(n);
    for (int j = 0; j < n; ++j) {
      const Complex e = std::polar(1.0, me.grid_angle(j));
      for (std::size_t k = 0; k < nodes.size(); ++k) {
        const Complex kern = (e + nodes[k]) / (e - nodes[k]);
        basis(j, 2 * k) = kern.real();
        basis(j, 2 * k + 1) = kern.imag();
      }
      target(j) = 1.0 / me.density()[j];
    }
    const Eigen::VectorXd coef = basis.colPivHouseholderQr().solve(target);
    CHECK((basis * coef - target).cwiseAbs().maxCoeff() <= 1e-6 * target.cwiseAbs().maxCoeff());

    // No other constant remainder does better, and node order is irrelevant.
    const double h_me = entropy(me);
    const NevanlinnaPick np(p);
    const Complex sigma = np_central(p).remainder();
    for (int i = 0; i < 8; ++i) {
      const Complex other = sigma + std::polar(0.05, 2.0 * kPi * i / 8.0);
      if (std::abs(other) >= 1.0) continue;
      std::vector<double> d(n);
      for (int j = 0; j < n; ++j) d[j] = np.eval(std::polar(1.0 - 1e-8, me.grid_angle(j)), other).real();
      CHECK(entropy(SpectralMeasure(std::move(d))) < h_me);
    }
    std::reverse(nodes.begin() + 1, nodes.end());
    const auto swapped = np_central(generalized_moments(mu, nodes));
    const Complex z = random_point(rng, 0.9);
    CHECK(rel_err(swapped(z), np_central(p)(z)) < 1e-9);
  }
}

TEST_CASE("central spectrum of the two-line demo separates the close lines") {
  for (auto conv : {C0Convention::as_displayed, C0Convention::as_stated}) {
    const auto fx = sec8_fixture(conv);
    const auto p = generalized_moments(fx.measure(), fx.poles);
    const auto mu = np_spectrum(p);
    const auto found = peaks(mu, 0.4, 0.7);
    REQUIRE(found.size() == 2);
    CHECK(std::abs(found[0] - 0.5) < 0.03);
    CHECK(std::abs(found[1] - 0.6) < 0.03);
  }
}

TEST_CASE("sample estimates of w") {
  SUBCASE("white noise") {
    std::mt19937_64 rng(53);
    std::normal_distribution<double> g;
    std::vector<double> y(1000000);
    for (auto& v : y) v = g(rng);
    const auto est = estimate_w_from_samples(y, FilterBank({0.0, 0.5}));
    for (std::size_t k = 0; k < 2; ++k) {
      CHECK(std::abs(est.data.values()[k].real() - 1.0) <= 3.0 * est.stderr_re[k]);
      CHECK(std::abs(est.data.values()[k].imag()) <= 3.0 * est.stderr_im[k] + 1e-12);
    }
  }
  SUBCASE("sinusoids plus MA(1) noise") {
    const auto fx = sec6_fixture(C0Convention::as_displayed);
    CHECK(fx.c0() == doctest::Approx(19.0 / 9.0).epsilon(1e-14));
    const auto y = fx.simulate(400000, 7);
    const FilterBank bank({0.0, Complex(0.6, 0.3), Complex(0.6, -0.3)});
    const auto est = estimate_w_from_samples(y, bank);
    const auto exact = generalized_moments(fx.measure(), bank.poles());
    for (std::size_t k = 0; k < bank.size(); ++k) {
      CHECK(std::abs(est.data.values()[k].real() - exact.values()[k].real()) <= 3.0 * est.stderr_re[k]);
      CHECK(std::abs(est.data.values()[k].imag() - exact.values()[k].imag()) <= 3.0 * est.stderr_im[k] + 1e-12);
    }
    CHECK(std::abs(est.data.values()[0].real() - 19.0 / 9.0) <= 3.0 * est.stderr_re[0]);
  }
  SUBCASE("pure cosine") {
    std::vector<double> y(100000);
    for (std::size_t t = 0; t < y.size(); ++t) y[t] = std::cos(static_cast<double>(t));
    const auto est = estimate_w_from_samples(y, FilterBank({0.0}));
    CHECK(std::abs(est.data.values()[0].real() - 0.5) <= std::max(3.0 * est.stderr_re[0], 1e-4));
  }
  SUBCASE("input checks") {
    std::vector<double> shortseq(500, 1.0);
    CHECK_THROWS_AS(estimate_w_from_samples(shortseq, FilterBank({0.0})), InputError);
    std::vector<double> y(2000, 1.0);
    CHECK_THROWS_AS(estimate_w_from_samples(y, FilterBank({0.0, 0.9999})), InputError);
    CHECK_THROWS_AS(estimate_w_from_samples(y, FilterBank({0.0, Complex(0.3, 0.2)})), InputError);
  }
}

TEST_CASE("pole tuning examples") {
  const auto point = RegionK().add_point(0.5);
  const auto one = tune_poles(1, point, 1.0);
  CHECK(one.bound < 4.0 * 0.25 / 0.75);
  CHECK(one.bound <= one.initial_bound);
  REQUIRE(one.bank.size() == 2);
  CHECK(std::abs(one.bank.poles()[1] - 0.5) < 0.05);

  const auto k = RegionK::parse("circle:0.3@0.5<0.8,circle:0.3@0.5<-0.8", 128);
  TuneOptions few;
  few.restarts = 1;
  TuneOptions many;
  many.restarts = 16;
  const auto r1 = tune_poles(4, k, 1.0, few);
  const auto r16 = tune_poles(4, k, 1.0, many);
  CHECK(r16.bound <= r1.bound);
  CHECK(r16.objective_trace.size() == 16);
  CHECK(r16.bank.conjugate_closed());
  CHECK(r16.bound == doctest::Approx(apriori_bound_pick(r16.bank.poles(), 1.0, k).bound).epsilon(1e-12));
}

TEST_CASE("tuned poles never lose to the zero-pole baseline") {
  const auto k = RegionK::parse("circle:0.25@0.65<0.5,circle:0.25@0.65<-0.5", 128);
  TuneOptions opt;
  opt.restarts = 2;
  for (int n : {1, 2, 3, 5}) {
    const auto r = tune_poles(n, k, 1.0, opt);
    CHECK(r.bound <= zero_pole_baseline(n, k, 1.0));
    CHECK(r.bank.size() == static_cast<std::size_t>(n + 1));
  }
}

TEST_CASE("central solution interpolates and stays positive real") {
  std::mt19937_64 rng(54);
  for (int trial = 0; trial < 200; ++trial) {
    // Random positive-definite data: redraw the nodes until the Pick matrix
    // is numerically definite.
    const auto mu = random_measure(rng);
    auto p = generalized_moments(mu, random_nodes(rng, trial % 13, 0.9));
    while (classify_hermitian(pick_matrix(p)) != Positivity::positive) {
      p = generalized_moments(mu, random_nodes(rng, trial % 13, 0.9));
    }
    const auto f = np_central(p);
    double residual = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) {
      residual = std::max(residual, std::abs(f(p.nodes()[k]) - p.values()[k]) / std::abs(p.values()[k]));
    }
    CHECK(residual <= 1e-8);
    if (trial % 10 == 0) {
      double worst = 0.0;
      for (int j = 0; j < 4096; ++j) worst = std::min(worst, f(std::polar(1.0 - 1e-6, 2.0 * kPi * j / 4096.0)).real());
      CHECK(worst >= -1e-8);
    }
  }
}

TEST_CASE("central spectrum reproduces its data") {
  std::mt19937_64 rng(55);
  for (int trial = 0; trial < 20; ++trial) {
    const auto mu = random_measure(rng);
    const auto p = generalized_moments(mu, random_nodes(rng, 1 + trial % 6, 0.8));
    const auto back = generalized_moments(np_spectrum(p), p.nodes());
    for (std::size_t k = 0; k < p.size(); ++k) CHECK(rel_err(back.values()[k], p.values()[k]) <= 1e-6);
  }
}

TEST_CASE("real data and a conjugate-closed bank give an even spectrum") {
  const auto mu = SpectralMeasure::from_function([](double t) { return 1.0 + 0.6 * std::cos(t) + 0.2 * std::cos(3.0 * t); },
                                                 kDefaultGrid, {{0.9, 1.0}, {-0.9, 1.0}});
  const FilterBank bank({0.0, Complex(0.5, 0.5), Complex(0.5, -0.5), -0.3, Complex(-0.2, 0.7), Complex(-0.2, -0.7)});
  const auto d = np_spectrum(generalized_moments(mu, bank.poles()));
  const int n = d.grid_size();
  double worst = 0.0;
  for (int j = 1; j < n; ++j) worst = std::max(worst, std::abs(d.density()[j] - d.density()[n - j]));
  CHECK(worst <= 1e-9);
}
