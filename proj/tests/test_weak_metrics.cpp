#include "doctest.h"
#include "specunc/errors.hpp"
#include "specunc/lp.hpp"
#include "specunc/schur_levinson.hpp"
#include "specunc/uncertainty.hpp"
#include "specunc/weak_metrics.hpp"
#include "support.hpp"

using namespace specunc;
using testsupport::random_measure;

namespace {

SpectralMeasure random_atoms(std::mt19937_64& rng, int max_atoms, int grid) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int count = 1 + static_cast<int>(u(rng) * max_atoms);
  std::vector<Atom> atoms;
  for (int i = 0; i < count; ++i) atoms.push_back({-kPi + 2.0 * kPi * u(rng), 0.2 + 2.0 * u(rng)});
  return SpectralMeasure::atomic(std::move(atoms), grid);
}

// Closed-form minimal matching cost of two equal-mass atoms on the circle.
double circle_distance(double a, double b) {
  const double d = std::abs(wrap_angle(a - b));
  return std::min(d, 2.0 * kPi - d);
}

}  // namespace

TEST_CASE("delta_K examples") {
  std::mt19937_64 rng(31);
  const auto mu = random_measure(rng);
  const auto k = RegionK::parse("circle:0.9");
  CHECK(delta_K(mu, mu, k) == 0.0);
  const auto atom = SpectralMeasure::atomic({{0.0, 2.0 * kPi}});
  const auto leb = SpectralMeasure::lebesgue();
  CHECK(delta_K(atom, leb, RegionK().add_point(0.5)) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK_THROWS_AS(delta_K(atom, leb, RegionK()), InputError);
}

TEST_CASE("delta_smooth examples") {
  std::mt19937_64 rng(32);
  const auto mu = random_measure(rng);
  CHECK(delta_smooth(mu, mu, TestKernel::poisson(0.5)) == 0.0);

  const double a = 0.7, b = 1.9;
  const auto ma = SpectralMeasure::from_function([&](double) { return a; });
  const auto mb = SpectralMeasure::from_function([&](double) { return b; });
  CHECK(delta_smooth(ma, mb, TestKernel::constant(1.0)) == doctest::Approx(2.0 * kPi * std::abs(a - b)).epsilon(1e-12));

  // The Poisson integral at r e^{i xi} is (1/2pi) (P_r * mu)(xi), so on a
  // circle sampled at the grid angles the two distances coincide.
  const auto other = random_measure(rng);
  std::vector<double> angles;
  for (int j = 0; j < mu.grid_size(); ++j) angles.push_back(mu.grid_angle(j));
  RegionK circle;
  circle.add_circle_at(0.0, 0.9, angles);
  const double smooth = delta_smooth(mu, other, TestKernel::poisson(0.9)) / (2.0 * kPi);
  CHECK(std::abs(smooth - delta_K(mu, other, circle)) <= 1e-6 * std::max(1.0, smooth));

  CHECK_THROWS_AS(delta_smooth(mu, other, TestKernel(std::vector<double>(64, 0.0))), InputError);
}

TEST_CASE("transport examples") {
  for (int grid : {4096, 256}) {
    const auto a = SpectralMeasure::atomic({{0.3, 1.0}}, grid);
    const auto b = SpectralMeasure::atomic({{0.4, 1.0}}, grid);
    CHECK(transport_metric(a, a, 10.0) == doctest::Approx(0.0));
    // Snapping to the 256-point transport grid costs at most one cell.
    CHECK(std::abs(transport_metric(a, b, 10.0) - 0.1) <= 2.0 * kPi / 256.0);
  }
  const auto one = SpectralMeasure::atomic({{1.0, 1.0}});
  const auto two = SpectralMeasure::atomic({{1.0, 2.0}});
  CHECK(transport_metric(one, two, 1.0) == doctest::Approx(1.0).epsilon(1e-9));
  // Far apart with cheap creation: destroying and creating beats moving.
  const auto far = SpectralMeasure::atomic({{1.0 + kPi, 1.0}});
  CHECK(transport_metric(one, far, 0.5) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK_THROWS_AS(transport_metric(one, two, 0.0), InputError);
}

TEST_CASE("LP examples") {
  LinearProgram lp;
  lp.cost = Eigen::VectorXd::Ones(1);
  lp.a_ub.resize(1, 1);
  lp.a_ub.insert(0, 0) = -1.0;
  lp.b_ub = Eigen::VectorXd::Constant(1, -1.0);
  lp.a_eq.resize(0, 1);
  lp.b_eq.resize(0);
  auto sol = lp_solve(lp);
  REQUIRE(sol.status == LpStatus::optimal);
  CHECK(sol.objective == doctest::Approx(1.0));
  CHECK(sol.duality_gap() < 1e-9);

  // Unbounded: min -x with x >= 0.
  lp.cost(0) = -1.0;
  lp.a_ub.resize(0, 1);
  lp.b_ub.resize(0);
  CHECK(lp_solve(lp).status == LpStatus::unbounded);

  // Infeasible: x = -1 with x >= 0.
  lp.cost(0) = 1.0;
  lp.a_eq.resize(1, 1);
  lp.a_eq.insert(0, 0) = 1.0;
  lp.b_eq = Eigen::VectorXd::Constant(1, -1.0);
  CHECK(lp_solve(lp).status == LpStatus::infeasible);

  // Small textbook problem: max 3x + 2y, x + y <= 4, x + 3y <= 6, x <= 3.
  LinearProgram t;
  t.cost = Eigen::Vector2d(-3.0, -2.0);
  t.a_ub.resize(3, 2);
  t.a_ub.insert(0, 0) = 1.0;
  t.a_ub.insert(0, 1) = 1.0;
  t.a_ub.insert(1, 0) = 1.0;
  t.a_ub.insert(1, 1) = 3.0;
  t.a_ub.insert(2, 0) = 1.0;
  t.b_ub = Eigen::Vector3d(4.0, 6.0, 3.0);
  t.a_eq.resize(0, 2);
  t.b_eq.resize(0);
  sol = lp_solve(t);
  REQUIRE(sol.status == LpStatus::optimal);
  CHECK(sol.objective == doctest::Approx(-11.0));
  CHECK(sol.x(0) == doctest::Approx(3.0));
  CHECK(sol.x(1) == doctest::Approx(1.0));
  CHECK(sol.duality_gap() < 1e-9);
}

TEST_CASE("mass_range examples") {
  const int grid = 256;
  const auto cosine = TestKernel::from_function([](double t) { return std::cos(t); }, grid);
  auto r = mass_range(CovarianceSequence({1.3, 0.4, -0.1}), TestKernel::constant(1.0, grid));
  CHECK(r.lo == doctest::Approx(1.3).epsilon(1e-7));
  CHECK(r.hi == doctest::Approx(1.3).epsilon(1e-7));

  r = mass_range(CovarianceSequence({1.0}), cosine);
  CHECK(r.lo == doctest::Approx(-1.0).epsilon(1e-7));
  CHECK(r.hi == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(r.disagreement() <= 1e-5 * (1.0 + std::abs(r.hi)));

  r = mass_range(CovarianceSequence({1.0, 0.5}), cosine);
  CHECK(r.lo == doctest::Approx(0.5).epsilon(1e-7));
  CHECK(r.hi == doctest::Approx(0.5).epsilon(1e-7));

  CHECK_THROWS_AS(mass_range(CovarianceSequence({1.0, 1.5}), cosine), InfeasibleError);
}

TEST_CASE("mass_range primal and dual agree on random data") {
  std::mt19937_64 rng(33);
  std::uniform_real_distribution<double> u(-0.8, 0.8);
  const auto g = TestKernel::poisson(0.6);
  for (int trial = 0; trial < 8; ++trial) {
    SchurParameters s{1.0, {}, false};
    for (int k = 0; k < 1 + trial % 3; ++k) s.gammas.push_back(u(rng));
    const auto r = mass_range(schur_to_covariance(s), g);
    CHECK(r.lo <= r.hi + 1e-9);
    CHECK(r.disagreement() <= 1e-5 * (1.0 + std::abs(r.hi)));
  }
}

TEST_CASE("mass_range intervals shrink as more covariances are used") {
  // Even measure, so that its covariances are real.
  const auto mu = SpectralMeasure::from_function([](double t) { return 1.0 + 0.5 * std::cos(t) + 0.3 * std::cos(2.0 * t); },
                                                 256, {{0.7, 0.8}, {-0.7, 0.8}});
  const auto g = TestKernel::from_function([](double t) { return std::exp(std::cos(t)); }, 256);
  const auto c = moments(mu, 6);
  double width = 1e300;
  for (int n = 0; n <= 6; n += 2) {
    const auto r = mass_range(c.truncated(n), g);
    CHECK(r.hi - r.lo <= width + 1e-7);
    width = r.hi - r.lo;
  }
  CHECK(width < 1e-2);
}

TEST_CASE("metric axioms on random triples") {
  std::mt19937_64 rng(35);
  const auto k = RegionK::parse("circle:0.8,point:0.3,-0.2", 128);
  const auto g = TestKernel::poisson(0.7);
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = random_measure(rng), b = random_measure(rng), c = random_measure(rng);
    const double ab = delta_K(a, b, k), ba = delta_K(b, a, k), ac = delta_K(a, c, k), cb = delta_K(c, b, k);
    CHECK(ab >= 0.0);
    CHECK(ab == ba);
    CHECK(ab <= ac + cb + 1e-9);
    const double sab = delta_smooth(a, b, g), sba = delta_smooth(b, a, g);
    CHECK(sab == sba);
    CHECK(sab <= delta_smooth(a, c, g) + delta_smooth(c, b, g) + 1e-9);
  }
  for (int trial = 0; trial < 6; ++trial) {
    const auto a = random_atoms(rng, 3, 256), b = random_atoms(rng, 3, 256), c = random_atoms(rng, 3, 256);
    const double kappa = 0.5 + trial;
    const double ab = transport_metric(a, b, kappa);
    CHECK(ab >= 0.0);
    CHECK(ab == transport_metric(b, a, kappa));
    CHECK(ab <= transport_metric(a, c, kappa) + transport_metric(c, b, kappa) + 1e-9);
  }
}

TEST_CASE("distances between converging Diracs decrease monotonically") {
  const double th0 = 0.2;
  const auto limit = SpectralMeasure::atomic({{th0, 2.0 * kPi}});
  const auto k = RegionK::parse("circle:0.9", 256);
  const auto g = TestKernel::poisson(0.8);
  double prev_k = 1e300, prev_s = 1e300, prev_t = 1e300;
  for (double sep : {0.4, 0.2, 0.1, 0.05, 0.025}) {
    const auto mu = SpectralMeasure::atomic({{th0 + sep, 2.0 * kPi}});
    const double dk = delta_K(mu, limit, k), ds = delta_smooth(mu, limit, g), dt = transport_metric(mu, limit, 10.0);
    CHECK(dk < prev_k);
    CHECK(ds < prev_s);
    CHECK(dt < prev_t);
    prev_k = dk;
    prev_s = ds;
    prev_t = dt;
  }
  CHECK(prev_t <= 2.0 * kPi * (0.025 + 2.0 * kPi / 256.0));
}

TEST_CASE("total variation is not weakly continuous") {
  const CovarianceSequence c({1.0, 0.4, 0.1});
  const auto mu0 = atomic_measure(extend_singular(c, std::polar(1.0, 0.3)));
  const auto mu1 = atomic_measure(extend_singular(c, std::polar(1.0, 0.3 + kPi)));
  // Atoms at different angles: the total variation is the sum of both masses.
  double tv = 0.0;
  for (const auto& a : mu0.atoms()) tv += a.mass;
  for (const auto& a : mu1.atoms()) tv += a.mass;
  for (const auto& a : mu0.atoms())
    for (const auto& b : mu1.atoms()) REQUIRE(std::abs(wrap_angle(a.theta - b.theta)) > 1e-6);
  CHECK(tv == doctest::Approx(2.0 * 2.0 * kPi * c.c0()).epsilon(1e-2));
  const auto k = RegionK::parse("circle:0.5");
  const double dk = delta_K(mu0, mu1, k);
  CHECK(dk <= apriori_bound_toeplitz(c.c0(), c.order(), k));
  CHECK(dk <= diameter_toeplitz(c, k).rho + 1e-9);
}

TEST_CASE("transport approaches the Wasserstein distance as kappa grows") {
  std::mt19937_64 rng(36);
  std::uniform_real_distribution<double> u(-kPi, kPi);
  const int grid = 256;
  for (int trial = 0; trial < 10; ++trial) {
    // Angles on the transport grid so the closed form is exact.
    const auto node = [&](double t) { return -kPi + 2.0 * kPi * std::round((t + kPi) * grid / (2.0 * kPi)) / grid; };
    const double a = node(u(rng)), b = node(u(rng));
    const auto mu0 = SpectralMeasure::atomic({{a, 1.5}}, grid);
    const auto mu1 = SpectralMeasure::atomic({{b, 1.5}}, grid);
    const double w = 1.5 * circle_distance(a, b);
    CHECK(std::abs(transport_metric(mu0, mu1, 1e3) - w) <= 1e-6);
    TransportOptions opt;
    opt.solve_dual = true;
    const auto detail = transport_metric_detail(mu0, mu1, 1e3, opt);
    CHECK(detail.duality_gap() <= 1e-7);
  }
}

TEST_CASE("transport duality gap on random measures") {
  std::mt19937_64 rng(37);
  TransportOptions opt;
  opt.solve_dual = true;
  opt.grid = 128;
  for (int trial = 0; trial < 4; ++trial) {
    const auto a = random_measure(rng, 1024, 2), b = random_measure(rng, 1024, 2);
    const auto r = transport_metric_detail(a, b, 0.5 + trial, opt);
    CHECK(r.duality_gap() <= 1e-7 * std::max(1.0, r.value));
  }
}
