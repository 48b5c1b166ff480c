#include "specunc/weak_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "specunc/errors.hpp"

namespace specunc {

namespace {

using Triplet = Eigen::Triplet<double>;

SparseMatrix sparse_from(int rows, int cols, const std::vector<Triplet>& t) {
  SparseMatrix m(rows, cols);
  m.setFromTriplets(t.begin(), t.end());
  m.makeCompressed();
  return m;
}

int nearest_node(double theta, int m) {
  const double pos = (wrap_angle(theta) + kPi) * m / (2.0 * kPi);
  const long idx = std::lround(pos);
  return static_cast<int>(((idx % m) + m) % m);
}

}  // namespace

TestKernel::TestKernel(std::vector<double> values, std::optional<double> lipschitz)
    : values_(std::move(values)), lipschitz_(lipschitz) {
  if (values_.empty()) throw InputError("kernel: at least one sample is required");
  for (double v : values_) {
    if (!std::isfinite(v)) throw InputError("kernel: values must be finite");
  }
  if (lipschitz_ && !(*lipschitz_ >= 0.0)) throw InputError("kernel: lipschitz bound must be >= 0");
}

TestKernel TestKernel::from_function(std::function<double(double)> g, int grid,
                                     std::optional<double> lipschitz) {
  if (grid < 1) throw InputError("kernel: grid must be positive");
  std::vector<double> v(grid);
  for (int j = 0; j < grid; ++j) v[j] = g(-kPi + 2.0 * kPi * j / grid);
  TestKernel k(std::move(v), lipschitz);
  k.exact_ = std::move(g);
  return k;
}

TestKernel TestKernel::constant(double value, int grid) {
  return from_function([value](double) { return value; }, grid, 0.0);
}

TestKernel TestKernel::poisson(double r, int grid) {
  if (!(r >= 0.0 && r < 1.0)) throw InputError("kernel: Poisson radius must lie in [0, 1)");
  return from_function(
      [r](double t) { return (1.0 - r * r) / (1.0 - 2.0 * r * std::cos(t) + r * r); }, grid,
      2.0 * r * (1.0 + r) / ((1.0 - r) * (1.0 - r) * (1.0 - r)));
}

double TestKernel::operator()(double theta) const {
  if (exact_) return exact_(theta);
  const int n = grid_size();
  const double pos = (wrap_angle(theta) + kPi) * n / (2.0 * kPi);
  const double fl = std::floor(pos);
  const double frac = pos - fl;
  const int i0 = static_cast<int>(fl) % n;
  const int i1 = (i0 + 1) % n;
  return (1.0 - frac) * values_[i0] + frac * values_[i1];
}

std::vector<Complex> TestKernel::fourier_coefficients() const {
  const int n = grid_size();
  const int count = std::max(1, n / 2);
  std::vector<Complex> out(count, Complex(0.0));
  for (int j = 0; j < n; ++j) {
    const Complex step = std::polar(1.0, -(-kPi + 2.0 * kPi * j / n));
    Complex e(1.0);
    for (int k = 0; k < count; ++k) {
      out[k] += values_[j] * e;
      e *= step;
    }
  }
  for (auto& v : out) v /= static_cast<double>(n);
  return out;
}

double TestKernel::min_fourier_magnitude() const {
  // For real g, |g_{-k}| = |g_k|, so nonnegative k suffice.
  double best = std::numeric_limits<double>::infinity();
  for (const auto& gk : fourier_coefficients()) best = std::min(best, std::abs(gk));
  return best;
}

bool TestKernel::is_symmetric(double tol) const {
  const int n = grid_size();
  double scale = 0.0;
  for (double v : values_) scale = std::max(scale, std::abs(v));
  // theta_j and -theta_j are nodes j and N - j (node 0 is -pi = pi).
  for (int j = 1; j < n; ++j) {
    if (std::abs(values_[j] - values_[n - j]) > tol * std::max(1.0, scale)) return false;
  }
  return true;
}

bool TestKernel::is_zero() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return v == 0.0; });
}

double delta_K(const SpectralMeasure& mu0, const SpectralMeasure& mu1, const RegionK& k) {
  if (k.empty()) throw InputError("delta_K: region K has no samples");
  double best = 0.0;
  for (const auto& s : k.samples()) {
    best = std::max(best, std::abs(poisson_eval(mu0, s.z) - poisson_eval(mu1, s.z)));
  }
  return best;
}

double delta_smooth(const SpectralMeasure& mu0, const SpectralMeasure& mu1, const TestKernel& g) {
  if (mu0.grid_size() != mu1.grid_size()) {
    throw InputError("delta_smooth: measures must share the grid size");
  }
  if (g.is_zero()) throw InputError("delta_smooth: kernel vanishes identically");
  const int n = mu0.grid_size();
  std::vector<double> table(n);
  for (int m = 0; m < n; ++m) table[m] = g(2.0 * kPi * m / n);
  std::vector<double> diff(n);
  for (int j = 0; j < n; ++j) diff[j] = mu0.density()[j] - mu1.density()[j];
  std::vector<int> support;
  for (int j = 0; j < n; ++j) {
    if (diff[j] != 0.0) support.push_back(j);
  }

  const double cell = 2.0 * kPi / n;
  double best = 0.0;
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    for (int j : support) acc += table[(i - j + n) % n] * diff[j];
    acc *= cell;
    const double xi = mu0.grid_angle(i);
    // Each measure's atoms are summed separately so that swapping the
    // arguments only flips signs and the result is exactly symmetric.
    double atoms0 = 0.0, atoms1 = 0.0;
    for (const auto& a : mu0.atoms()) atoms0 += g(xi - a.theta) * a.mass;
    for (const auto& a : mu1.atoms()) atoms1 += g(xi - a.theta) * a.mass;
    acc += atoms0 - atoms1;
    best = std::max(best, std::abs(acc));
  }
  return best;
}

std::vector<double> lump_to_grid(const SpectralMeasure& mu, int m) {
  if (m < 2) throw InputError("lump_to_grid: coarse grid needs at least 2 nodes");
  std::vector<double> out(m, 0.0);
  const int n = mu.grid_size();
  const double cell = 2.0 * kPi / n;
  for (int j = 0; j < n; ++j) {
    if (mu.density()[j] != 0.0) out[nearest_node(mu.grid_angle(j), m)] += cell * mu.density()[j];
  }
  for (const auto& a : mu.atoms()) out[nearest_node(a.theta, m)] += a.mass;
  return out;
}

TransportResult transport_metric_detail(const SpectralMeasure& mu0, const SpectralMeasure& mu1,
                                        double kappa, const TransportOptions& options) {
  if (!(kappa > 0.0) || !std::isfinite(kappa)) throw InputError("transport: kappa must be positive");
  const int m = options.grid;
  auto a = lump_to_grid(mu0, m);
  auto b = lump_to_grid(mu1, m);
  // The simplex path depends on argument order; a canonical order makes the
  // distance exactly symmetric.
  if (b < a) std::swap(a, b);
  const double h = 2.0 * kPi / m;
  auto ground = [&](int i, int j) {
    const int d = std::abs(i - j);
    return h * std::min(d, m - d);
  };

  TransportResult out;
  out.grid = m;

  // Plan entries are restricted to supp(a) x supp(b): mass created at a node
  // outside supp(a) and shipped to j costs more than removing it at j.
  std::vector<int> s0, s1;
  for (int i = 0; i < m; ++i) {
    if (a[i] > 0.0) s0.push_back(i);
    if (b[i] > 0.0) s1.push_back(i);
  }
  const int plan = static_cast<int>(s0.size() * s1.size());
  const int vars = plan + 4 * m;

  LinearProgram lp;
  lp.cost.resize(vars);
  std::vector<Triplet> trip;
  trip.reserve(2 * plan + 4 * m);
  int col = 0;
  for (int i : s0) {
    for (int j : s1) {
      lp.cost(col) = ground(i, j);
      trip.emplace_back(i, col, 1.0);
      trip.emplace_back(m + j, col, 1.0);
      ++col;
    }
  }
  // Creation (p) and removal (q) for each marginal.
  for (int side = 0; side < 2; ++side) {
    for (int i = 0; i < m; ++i) {
      trip.emplace_back(side * m + i, col, -1.0);
      lp.cost(col++) = kappa;
      trip.emplace_back(side * m + i, col, 1.0);
      lp.cost(col++) = kappa;
    }
  }
  lp.a_eq = sparse_from(2 * m, vars, trip);
  lp.b_eq.resize(2 * m);
  for (int i = 0; i < m; ++i) {
    lp.b_eq(i) = a[i];
    lp.b_eq(m + i) = b[i];
  }
  const auto primal = lp_solve(lp, options.lp);
  if (primal.status != LpStatus::optimal) {
    throw NumericalError(std::string("transport: primal LP ended with status ") +
                         to_string(primal.status));
  }
  out.value = primal.objective;
  out.lp_dual = primal.dual_objective;
  if (!options.solve_dual) return out;

  // Kantorovich-Rubinstein form: neighbor Lipschitz rows suffice for the
  // geodesic metric of the discrete circle.
  LinearProgram dual;
  dual.cost.resize(m);
  for (int i = 0; i < m; ++i) dual.cost(i) = -(a[i] - b[i]);
  dual.free.assign(m, true);
  trip.clear();
  dual.b_ub.resize(4 * m);
  for (int i = 0; i < m; ++i) {
    const int nx = (i + 1) % m;
    trip.emplace_back(4 * i, i, 1.0);
    trip.emplace_back(4 * i, nx, -1.0);
    dual.b_ub(4 * i) = h;
    trip.emplace_back(4 * i + 1, i, -1.0);
    trip.emplace_back(4 * i + 1, nx, 1.0);
    dual.b_ub(4 * i + 1) = h;
    trip.emplace_back(4 * i + 2, i, 1.0);
    dual.b_ub(4 * i + 2) = kappa;
    trip.emplace_back(4 * i + 3, i, -1.0);
    dual.b_ub(4 * i + 3) = kappa;
  }
  dual.a_ub = sparse_from(4 * m, m, trip);
  const auto ds = lp_solve(dual, options.lp);
  if (ds.status != LpStatus::optimal) {
    throw NumericalError(std::string("transport: dual LP ended with status ") + to_string(ds.status));
  }
  out.lipschitz_dual = -ds.objective;
  return out;
}

double transport_metric(const SpectralMeasure& mu0, const SpectralMeasure& mu1, double kappa,
                        const TransportOptions& options) {
  return transport_metric_detail(mu0, mu1, kappa, options).value;
}

LinearRange moment_lp_range(const CovarianceSequence& c, std::span<const double> h, double eps,
                            const LpOptions& options) {
  if (h.empty()) throw InputError("moment_lp_range: empty weight vector");
  if (eps < 0.0) throw InputError("moment_lp_range: eps must be nonnegative");
  const int grid = static_cast<int>(h.size());
  const int n = c.order();
  // Rows: c_0, then Re c_k and Im c_k for k >= 1.
  const int rows = 2 * n + 1;
  std::vector<Triplet> trip;
  trip.reserve(static_cast<std::size_t>(rows) * grid);
  Eigen::VectorXd target(rows);
  target(0) = c.c0();
  for (int k = 1; k <= n; ++k) {
    target(2 * k - 1) = c[k].real();
    target(2 * k) = c[k].imag();
  }
  const double w = 1.0 / (2.0 * kPi);
  for (int j = 0; j < grid; ++j) {
    const double t = -kPi + 2.0 * kPi * j / grid;
    trip.emplace_back(0, j, w);
    for (int k = 1; k <= n; ++k) {
      const double ck = std::cos(k * t) * w;
      const double sk = -std::sin(k * t) * w;
      if (ck != 0.0) trip.emplace_back(2 * k - 1, j, ck);
      if (sk != 0.0) trip.emplace_back(2 * k, j, sk);
    }
  }
  const SparseMatrix a = sparse_from(rows, grid, trip);

  LinearProgram lp;
  if (eps == 0.0) {
    lp.a_eq = a;
    lp.b_eq = target;
  } else {
    SparseMatrix stacked(2 * rows, grid);
    std::vector<Triplet> both;
    both.reserve(2 * trip.size());
    for (const auto& t : trip) {
      both.emplace_back(t.row(), t.col(), t.value());
      both.emplace_back(rows + t.row(), t.col(), -t.value());
    }
    lp.a_ub = sparse_from(2 * rows, grid, both);
    lp.b_ub.resize(2 * rows);
    lp.b_ub.head(rows) = target.array() + eps;
    lp.b_ub.tail(rows) = -(target.array() - eps);
  }

  LinearRange out;
  for (int sense = 0; sense < 2; ++sense) {
    lp.cost.resize(grid);
    for (int j = 0; j < grid; ++j) lp.cost(j) = (sense == 0 ? w : -w) * h[j];
    const auto sol = lp_solve(lp, options);
    if (sol.status == LpStatus::infeasible) {
      throw InfeasibleError("moment_lp_range: no measure on the grid matches the moments");
    }
    if (sol.status != LpStatus::optimal) {
      throw NumericalError(std::string("moment_lp_range: LP ended with status ") +
                           to_string(sol.status));
    }
    if (sense == 0) {
      out.lo = sol.objective;
    } else {
      out.hi = -sol.objective;
    }
  }
  return out;
}

namespace {

// Semi-infinite dual of the mass-range LP, solved by constraint exchange:
//   hi = min lambda.c  s.t.  sum_k lambda_k cos(k t) >= g(t)
//   lo = max lambda.c  s.t.  sum_k lambda_k cos(k t) <= g(t)
// on the fine grid t_s. Returns the optimal value.
double envelope_bound(const CovarianceSequence& c, const std::vector<double>& fine_g, bool upper) {
  const int n = c.order();
  const int fine = static_cast<int>(fine_g.size());
  const double gscale = 1.0 + std::accumulate(fine_g.begin(), fine_g.end(), 0.0,
                                              [](double m, double v) { return std::max(m, std::abs(v)); });
  const double box = 1e6 * gscale;
  const double tol = 1e-10 * gscale;
  const double sign = upper ? 1.0 : -1.0;

  std::vector<double> angle(fine);
  for (int s = 0; s < fine; ++s) angle[s] = -kPi + 2.0 * kPi * s / fine;

  std::vector<int> active;
  const int seeds = std::max(16, 8 * (n + 1));
  for (int i = 0; i < seeds; ++i) active.push_back(static_cast<int>(static_cast<long>(i) * fine / seeds));

  Eigen::VectorXd lambda = Eigen::VectorXd::Zero(n + 1);
  for (int round = 0; round < 500; ++round) {
    const int rows = static_cast<int>(active.size()) + 2 * (n + 1);
    std::vector<Triplet> trip;
    Eigen::VectorXd rhs(rows);
    for (int r = 0; r < static_cast<int>(active.size()); ++r) {
      const double t = angle[active[r]];
      // upper: -sum lambda_k cos(kt) <= -g ; lower: sum lambda_k cos(kt) <= g
      for (int k = 0; k <= n; ++k) trip.emplace_back(r, k, -sign * std::cos(k * t));
      rhs(r) = -sign * fine_g[active[r]];
    }
    for (int k = 0; k <= n; ++k) {
      const int r = static_cast<int>(active.size()) + 2 * k;
      trip.emplace_back(r, k, 1.0);
      rhs(r) = box;
      trip.emplace_back(r + 1, k, -1.0);
      rhs(r + 1) = box;
    }
    LinearProgram lp;
    lp.cost.resize(n + 1);
    for (int k = 0; k <= n; ++k) lp.cost(k) = sign * c[k].real();
    lp.free.assign(n + 1, true);
    lp.a_ub = sparse_from(rows, n + 1, trip);
    lp.b_ub = rhs;
    const auto sol = lp_solve(lp);
    if (sol.status != LpStatus::optimal) {
      throw NumericalError(std::string("mass_range: envelope LP ended with status ") +
                           to_string(sol.status));
    }
    lambda = sol.x;

    // Violations of the envelope on the whole fine grid.
    std::vector<double> viol(fine);
    for (int s = 0; s < fine; ++s) {
      double poly = 0.0;
      for (int k = 0; k <= n; ++k) poly += lambda(k) * std::cos(k * angle[s]);
      viol[s] = sign * (fine_g[s] - poly);
    }
    std::vector<std::pair<double, int>> peaks;
    for (int s = 0; s < fine; ++s) {
      const double v = viol[s];
      if (v <= tol) continue;
      if (v >= viol[(s + fine - 1) % fine] && v >= viol[(s + 1) % fine]) peaks.emplace_back(v, s);
    }
    if ((lambda.cwiseAbs().array() >= 0.999 * box).any() && peaks.empty()) {
      throw NumericalError("mass_range: envelope multipliers hit the safeguard bound");
    }
    if (peaks.empty()) return sol.objective * sign;
    std::sort(peaks.rbegin(), peaks.rend());
    std::size_t added = 0;
    for (const auto& [v, s] : peaks) {
      if (added == static_cast<std::size_t>(2 * (n + 1))) break;
      if (std::find(active.begin(), active.end(), s) == active.end()) {
        active.push_back(s);
        ++added;
      }
    }
    // Remaining violations sit on active rows and are within LP tolerance.
    if (added == 0) return sol.objective * sign;
  }
  throw NumericalError("mass_range: constraint exchange did not converge");
}

}  // namespace

MassRange mass_range(const CovarianceSequence& c, const TestKernel& g, int oversample) {
  if (!(c.c0() > 0.0)) throw InfeasibleError("mass_range: c_0 must be positive");
  if (!c.is_real(1e-12)) throw InputError("mass_range: covariance sequence must be real");
  if (!g.is_symmetric()) throw InputError("mass_range: kernel must be symmetric");
  if (classify(c) == Positivity::invalid) {
    throw InfeasibleError("mass_range: Toeplitz matrix is indefinite");
  }
  if (oversample < 1) throw InputError("mass_range: oversample must be >= 1");

  MassRange out;
  const auto primal = moment_lp_range(c, g.values());
  out.lo = primal.lo;
  out.hi = primal.hi;

  const int fine = g.grid_size() * oversample;
  std::vector<double> fine_g(fine);
  for (int s = 0; s < fine; ++s) fine_g[s] = g(-kPi + 2.0 * kPi * s / fine);
  out.hi_dual = envelope_bound(c, fine_g, true);
  out.lo_dual = envelope_bound(c, fine_g, false);
  return out;
}

}  // namespace specunc
