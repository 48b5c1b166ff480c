#include <Eigen/Eigenvalues>

#include "doctest.h"
#include "specunc/errors.hpp"
#include "specunc/region.hpp"
#include "specunc/schur_levinson.hpp"
#include "specunc/spectral_measure.hpp"
#include "support.hpp"

using namespace specunc;
using testsupport::random_measure;
using testsupport::random_point;
using testsupport::rel_err;

TEST_CASE("moments of simple measures") {
  SUBCASE("flat spectrum") {
    const auto c = moments(SpectralMeasure::lebesgue(), 2);
    CHECK(rel_err(c[0], 1.0) < 1e-14);
    CHECK(std::abs(c[1]) < 1e-14);
    CHECK(std::abs(c[2]) < 1e-14);
  }
  SUBCASE("Dirac at zero") {
    const auto c = moments(SpectralMeasure::atomic({{0.0, 2.0 * kPi}}), 2);
    for (int k = 0; k <= 2; ++k) CHECK(rel_err(c[k], 1.0) < 1e-14);
  }
  SUBCASE("MA(1) density") {
    // |1 + a e^{it}|^2 = 1 + a^2 + 2 a cos t, so c_0 = 1 + a^2, c_1 = a, c_2 = 0.
    const double a = 1.0 / 3.0;
    const auto mu = SpectralMeasure::from_function([&](double t) { return std::norm(1.0 + std::polar(a, t)); });
    const auto c = moments(mu, 2);
    CHECK(rel_err(c[0], 1.0 + a * a) < 1e-12);
    CHECK(rel_err(c[1], a) < 1e-12);
    CHECK(std::abs(c[2]) < 1e-12);
  }
  SUBCASE("atom normalization") {
    const double th = 0.7;
    const auto c = moments(SpectralMeasure::atomic({{th, 2.0 * kPi}}), 3);
    for (int k = 0; k <= 3; ++k) CHECK(rel_err(c[k], std::polar(1.0, -k * th)) < 1e-14);
  }
}

TEST_CASE("Herglotz and Poisson values") {
  const auto leb = SpectralMeasure::lebesgue();
  CHECK(rel_err(herglotz_eval(leb, {0.3, 0.2}), 1.0) < 1e-12);
  const double th0 = 1.1;
  const Complex e = std::polar(1.0, th0);
  const auto dirac = SpectralMeasure::atomic({{th0, 2.0 * kPi}});
  for (const Complex z : {Complex(0.2, -0.5), Complex(-0.7, 0.1), Complex(0.0, 0.0)}) {
    CHECK(rel_err(herglotz_eval(dirac, z), (e + z) / (e - z)) < 1e-13);
  }
  std::mt19937_64 rng(3);
  const auto mu = random_measure(rng);
  CHECK(rel_err(herglotz_eval(mu, 0.0), moments(mu, 0)[0]) < 1e-13);

  CHECK(poisson_eval(leb, {0.4, -0.3}) == doctest::Approx(1.0).epsilon(1e-12));
  const auto at0 = SpectralMeasure::atomic({{0.0, 2.0 * kPi}});
  CHECK(poisson_eval(at0, 0.5) == doctest::Approx(3.0).epsilon(1e-13));
  CHECK(poisson_eval(leb.combined(1.0, at0, 1.0), 0.5) == doctest::Approx(4.0).epsilon(1e-12));

  CHECK_THROWS_AS(herglotz_eval(leb, 1.0), InputError);
  CHECK_THROWS_AS(poisson_eval(leb, Complex(0.0, 0.9999999)), InputError);
}

TEST_CASE("Toeplitz matrix and classification") {
  const CovarianceSequence a({1.0, 0.9});
  const Eigen::SelfAdjointEigenSolver<CMatrix> es(toeplitz(a));
  CHECK(es.eigenvalues()(0) == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(es.eigenvalues()(1) == doctest::Approx(1.9).epsilon(1e-12));
  CHECK(classify(a) == Positivity::positive);
  CHECK(classify(CovarianceSequence({1.0, 1.0})) == Positivity::nonnegative_singular);
  CHECK(classify(CovarianceSequence({1.0, 1.1})) == Positivity::invalid);

  const CovarianceSequence c({2.0, Complex(0.3, 0.4), Complex(-0.1, 0.2)});
  const CMatrix t = toeplitz(c);
  CHECK(t(1, 0) == c[1]);
  CHECK(t(0, 1) == std::conj(c[1]));
  CHECK(t(2, 0) == c[2]);
  CHECK((t - t.adjoint()).norm() == 0.0);
}

TEST_CASE("generalized moments") {
  const std::vector<Complex> nodes{0.0, 0.5};
  auto p = generalized_moments(SpectralMeasure::lebesgue(), nodes);
  CHECK(rel_err(p.values()[0], 1.0) < 1e-12);
  CHECK(rel_err(p.values()[1], 1.0) < 1e-12);
  p = generalized_moments(SpectralMeasure::atomic({{0.0, 2.0 * kPi}}), nodes);
  CHECK(rel_err(p.values()[0], 1.0) < 1e-13);
  CHECK(rel_err(p.values()[1], 3.0) < 1e-13);

  // H at 0.5 of the maximum-entropy (AR(1)) spectrum of (1, 0.5, 0.25):
  // the full series 1 + 2 sum 0.25^k = 5/3; the three-term partial sum 1.625
  // ignores c_3, c_4, ...
  const auto me = max_entropy_spectrum(CovarianceSequence({1.0, 0.5, 0.25}));
  p = generalized_moments(me, nodes);
  CHECK(rel_err(p.values()[1], testsupport::ar1_herglotz(1.0, 0.5, 0.5)) < 1e-10);
  CHECK(rel_err(p.values()[1], 5.0 / 3.0) < 1e-10);

  const std::vector<Complex> dup{0.0, 0.3, 0.3};
  CHECK_THROWS_AS(generalized_moments(me, dup), InputError);
  const std::vector<Complex> outside{0.0, 1.0};
  CHECK_THROWS_AS(generalized_moments(me, outside), InputError);
}

TEST_CASE("Pick matrix") {
  CMatrix p = pick_matrix(PickData({0.0}, {1.0}));
  CHECK(p.rows() == 1);
  CHECK(rel_err(p(0, 0), 2.0) < 1e-15);

  p = pick_matrix(PickData({0.0, 0.5}, {1.0, 1.0}));
  CHECK(rel_err(p(0, 0), 2.0) < 1e-15);
  CHECK(rel_err(p(0, 1), 2.0) < 1e-15);
  CHECK(rel_err(p(1, 1), 8.0 / 3.0) < 1e-15);

  // Dirac data: [[2, 4], [4, 8]] has determinant 0.
  p = pick_matrix(PickData({0.0, 0.5}, {1.0, 3.0}));
  CHECK(rel_err(p(0, 1), 4.0) < 1e-15);
  CHECK(rel_err(p(1, 1), 8.0) < 1e-15);
  CHECK(std::abs((p(0, 0) * p(1, 1) - p(0, 1) * p(1, 0)).real()) < 1e-12);
  CHECK(classify_hermitian(p) == Positivity::nonnegative_singular);
}

TEST_CASE("linearity of moments") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const auto m0 = random_measure(rng);
    const auto m1 = random_measure(rng);
    const double a = 0.3 + trial * 0.1, b = 1.7;
    const auto lhs = moments(m0.combined(a, m1, b), 6);
    const auto c0 = moments(m0, 6), c1 = moments(m1, 6);
    for (int k = 0; k <= 6; ++k) CHECK(std::abs(lhs[k] - (a * c0[k] + b * c1[k])) < 1e-12 * (1.0 + std::abs(lhs[0])));
  }
}

TEST_CASE("moments of measures are never classified invalid") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    const auto mu = random_measure(rng, kDefaultGrid, 6, trial % 3 != 0);
    for (int n : {1, 4, 12, 32}) CHECK(classify(moments(mu, n)) != Positivity::invalid);
  }
}

TEST_CASE("Poisson integral equals the real part of the Herglotz transform") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    const auto mu = random_measure(rng);
    const Complex z = random_point(rng, 0.95);
    const double p = poisson_eval(mu, z);
    CHECK(std::abs(p - herglotz_eval(mu, z).real()) <= 1e-10 * std::abs(p));
  }
}

TEST_CASE("Poisson values converge for converging Diracs") {
  const double th0 = 0.4;
  const auto limit = SpectralMeasure::atomic({{th0, 2.0 * kPi}});
  std::mt19937_64 rng(14);
  std::vector<Complex> zs;
  for (int i = 0; i < 10; ++i) zs.push_back(random_point(rng, 0.9));
  for (const Complex z : zs) {
    double prev = 1e300;
    for (int k = 1; k <= 64; k *= 2) {
      const auto mu = SpectralMeasure::atomic({{th0 + 0.5 / k, 2.0 * kPi}});
      const double err = std::abs(poisson_eval(mu, z) - poisson_eval(limit, z));
      if (k >= 8) CHECK(err < prev);
      prev = err;
    }
    CHECK(prev < 0.05 * poisson_eval(limit, z));
  }
}

TEST_CASE("Pick matrices of generalized moments are nonnegative") {
  std::mt19937_64 rng(15);
  for (int trial = 0; trial < 30; ++trial) {
    const auto mu = random_measure(rng);
    std::vector<Complex> nodes{0.0};
    for (int k = 0; k < 6; ++k) nodes.push_back(random_point(rng, 0.9));
    const CMatrix p = pick_matrix(generalized_moments(mu, nodes));
    const Eigen::SelfAdjointEigenSolver<CMatrix> es(p);
    CHECK(es.eigenvalues()(0) >= -1e-10 * std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff()));
  }
}

TEST_CASE("measure validation") {
  CHECK_THROWS_AS(SpectralMeasure(std::vector<double>{1.0, -0.5}), InputError);
  CHECK_THROWS_AS(SpectralMeasure::atomic({{0.1, -1.0}}), InputError);
  CHECK_THROWS_AS(SpectralMeasure::atomic({{0.1, 1.0}, {0.1, 2.0}}), InputError);
  CHECK_THROWS_AS(PickData({0.0, 0.0}, {1.0, 1.0}), InputError);
  const auto mu = SpectralMeasure::atomic({{3.0 * kPi / 2.0, 1.0}});
  CHECK(mu.atoms()[0].theta == doctest::Approx(-kPi / 2.0));
}

TEST_CASE("region parsing") {
  const auto k = RegionK::parse("circle:0.5,circle:0.25@0.3,-0.1,point:0.2,0.1", 64);
  CHECK(k.samples().size() == 129);
  CHECK(k.max_modulus() == doctest::Approx(std::abs(Complex(0.3, -0.1)) + 0.25));
  const auto polar = RegionK::parse("circle:0.25@0.65<0.5", 16);
  CHECK(std::abs(polar.curves()[0].center - std::polar(0.65, 0.5)) < 1e-15);
  CHECK_THROWS_AS(RegionK::parse("square:1"), InputError);
  CHECK_THROWS_AS(RegionK::parse("circle:1.0"), InputError);
}
