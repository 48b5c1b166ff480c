#include "specunc/three.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>

#include "specunc/errors.hpp"
#include "specunc/uncertainty.hpp"

namespace specunc {

namespace {

constexpr double kDensityRadius = 1.0 - 1e-8;
constexpr double kMaxArctanh = 7.0;
constexpr int kBatches = 50;

}  // namespace

FilterBank::FilterBank(std::vector<Complex> poles) : poles_(std::move(poles)) {
  if (poles_.empty() || poles_.front() != Complex(0.0)) {
    throw InputError("filter bank: the first pole must be z_0 = 0");
  }
  for (std::size_t i = 0; i < poles_.size(); ++i) {
    if (!(std::abs(poles_[i]) < 1.0)) throw InputError("filter bank: poles must satisfy |z_k| < 1");
    for (std::size_t j = 0; j < i; ++j) {
      if (poles_[i] == poles_[j]) throw InputError("filter bank: poles must be distinct");
    }
  }
}

bool FilterBank::conjugate_closed(double tol) const {
  for (const auto& z : poles_) {
    if (std::abs(z.imag()) <= tol) continue;
    const bool found = std::any_of(poles_.begin(), poles_.end(),
                                   [&](Complex w) { return std::abs(w - std::conj(z)) <= tol; });
    if (!found) return false;
  }
  return true;
}

Complex FilterBank::transfer(std::size_t k, Complex z) const { return z / (z - poles_.at(k)); }

CentralSolution::CentralSolution(const PickData& p) : np_(p) {
  const Positivity pos = classify_hermitian(pick_matrix(p));
  if (pos == Positivity::invalid) throw InfeasibleError("central solution: Pick matrix is indefinite");
  if (pos == Positivity::nonnegative_singular || np_.singular()) {
    throw InfeasibleError("central solution: Pick matrix is singular (the solution is unique and atomic)");
  }
  sigma_ = np_.max_entropy_remainder();
  rational_ = np_.rational(sigma_);
}

CentralSolution np_central(const PickData& p) { return CentralSolution(p); }

SpectralMeasure np_spectrum(const PickData& p, int grid) {
  if (grid <= 0) throw InputError("np_spectrum: grid must be positive");
  const CentralSolution f(p);
  std::vector<double> density(grid);
  double peak = 0.0;
  for (int j = 0; j < grid; ++j) {
    const double theta = -kPi + 2.0 * kPi * j / grid;
    density[j] = f(std::polar(kDensityRadius, theta)).real();
    peak = std::max(peak, std::abs(density[j]));
  }
  for (double& d : density) {
    if (d < 0.0) {
      if (d < -1e-8 * std::max(1.0, peak)) throw NumericalError("np_spectrum: negative central density");
      d = 0.0;
    }
  }
  return SpectralMeasure(std::move(density));
}

WEstimate estimate_w_from_samples(std::span<const double> y, const FilterBank& bank) {
  const std::size_t len = y.size();
  if (len < 1000) throw InputError("estimate_w: need at least 1000 samples");
  if (!bank.conjugate_closed(1e-12)) throw InputError("estimate_w: filter bank must be closed under conjugation");

  std::vector<Complex> values;
  WEstimate out{PickData({Complex(0.0)}, {Complex(1.0)}), {}, {}};
  for (const Complex zk : bank.poles()) {
    const double r = std::abs(zk);
    std::size_t warm = 0;
    if (r > 0.0) {
      if (std::pow(r, static_cast<double>(len / 4)) > 1e-4) {
        throw InputError("estimate_w: pole too close to the unit circle for the sample length");
      }
      warm = static_cast<std::size_t>(std::ceil(std::log(1e-8) / std::log(r)));
      warm = std::min(warm, len / 4);
    }
    const std::size_t used = len - warm;
    const std::size_t batch = used / kBatches;
    std::vector<double> bre(kBatches, 0.0), bim(kBatches, 0.0);
    double sum_re = 0.0, sum_im = 0.0;
    Complex u(0.0);
    const double scale = 1.0 - r * r;
    for (std::size_t t = 0; t < len; ++t) {
      u = zk * u + y[t];
      if (t < warm) continue;
      const double re = scale * std::norm(u);
      const double im = 2.0 * (u * y[t]).imag();
      sum_re += re;
      sum_im += im;
      const std::size_t b = (t - warm) / batch;
      if (b < static_cast<std::size_t>(kBatches)) {
        bre[b] += re;
        bim[b] += im;
      }
    }
    values.emplace_back(sum_re / used, sum_im / used);
    auto stderr_of = [&](std::vector<double>& v) {
      for (double& x : v) x /= static_cast<double>(batch);
      const double mean = std::accumulate(v.begin(), v.end(), 0.0) / kBatches;
      double ss = 0.0;
      for (double x : v) ss += (x - mean) * (x - mean);
      return std::sqrt(ss / (kBatches - 1) / kBatches);
    };
    out.stderr_re.push_back(stderr_of(bre));
    out.stderr_im.push_back(stderr_of(bim));
  }
  for (const auto& w : values) {
    if (!(w.real() > 0.0)) throw InfeasibleError("estimate_w: estimated Re w_k is not positive");
  }
  out.data = PickData(bank.poles(), std::move(values));
  return out;
}

namespace {

// Poles z_1..z_n from the search vector: pairs (s, phi) give
// tanh(s) e^{+-i phi}; for odd n the last coordinate is a real pole tanh(s).
std::vector<Complex> decode(const std::vector<double>& x, int n) {
  std::vector<Complex> poles{Complex(0.0)};
  const int pairs = n / 2;
  for (int i = 0; i < pairs; ++i) {
    const double r = std::tanh(std::clamp(x[2 * i], -kMaxArctanh, kMaxArctanh));
    const Complex z = std::polar(r, x[2 * i + 1]);
    poles.push_back(z);
    poles.push_back(std::conj(z));
  }
  if (n % 2 == 1) poles.emplace_back(std::tanh(std::clamp(x[n - 1], -kMaxArctanh, kMaxArctanh)), 0.0);
  return poles;
}

std::vector<double> encode(const FilterBank& bank, int n) {
  if (static_cast<int>(bank.size()) != n + 1) throw InputError("tune_poles: initial bank must have n + 1 poles");
  std::vector<double> x(n, 0.0);
  int pair = 0;
  int reals = 0;
  for (std::size_t k = 1; k < bank.size(); ++k) {
    const Complex z = bank.poles()[k];
    if (z.imag() > 0.0) {
      if (pair >= n / 2) throw InputError("tune_poles: initial bank has too many complex poles");
      x[2 * pair] = std::atanh(std::min(std::abs(z), std::tanh(kMaxArctanh)));
      x[2 * pair + 1] = std::arg(z);
      ++pair;
    } else if (z.imag() == 0.0) {
      if (n % 2 == 0 || reals > 0) throw InputError("tune_poles: initial bank needs n mod 2 real poles besides 0");
      x[n - 1] = std::atanh(z.real());
      ++reals;
    }
  }
  if (pair != n / 2 || reals != n % 2 || !bank.conjugate_closed()) {
    throw InputError("tune_poles: initial bank must be conjugate-closed with n mod 2 real poles besides 0");
  }
  return x;
}

class NelderMead {
 public:
  NelderMead(std::function<double(const std::vector<double>&)> f, int max_evals, double tol)
      : f_(std::move(f)), max_evals_(max_evals), tol_(tol) {}

  int evaluations() const { return evals_; }

  // Minimizes from x0 with an axis-aligned initial simplex of edge `step`.
  double run(std::vector<double>& x0, double step) {
    const int dim = static_cast<int>(x0.size());
    // Dimension-adapted coefficients (Gao and Han) keep the simplex from
    // degenerating in higher dimensions.
    const double expand = 1.0 + 2.0 / dim;
    const double contract = 0.75 - 0.5 / dim;
    const double shrink = 1.0 - 1.0 / dim;
    std::vector<std::vector<double>> pts(dim + 1, x0);
    std::vector<double> vals(dim + 1);
    for (int i = 0; i < dim; ++i) pts[i + 1][i] += step;
    for (int i = 0; i <= dim; ++i) vals[i] = eval(pts[i]);

    std::vector<int> order(dim + 1);
    while (evals_ < max_evals_) {
      std::iota(order.begin(), order.end(), 0);
      std::sort(order.begin(), order.end(), [&](int a, int b) { return vals[a] < vals[b]; });
      const int best = order.front(), worst = order.back(), second = order[dim - 1];

      double diameter = 0.0;
      for (int i = 0; i <= dim; ++i) {
        double d = 0.0;
        for (int j = 0; j < dim; ++j) d = std::max(d, std::abs(pts[i][j] - pts[best][j]));
        diameter = std::max(diameter, d);
      }
      if (diameter < tol_) break;

      std::vector<double> centroid(dim, 0.0);
      for (int i = 0; i <= dim; ++i) {
        if (i == worst) continue;
        for (int j = 0; j < dim; ++j) centroid[j] += pts[i][j] / dim;
      }
      auto along = [&](double t) {
        std::vector<double> p(dim);
        for (int j = 0; j < dim; ++j) p[j] = centroid[j] + t * (pts[worst][j] - centroid[j]);
        return p;
      };

      auto xr = along(-1.0);
      const double fr = eval(xr);
      if (fr < vals[best]) {
        auto xe = along(-expand);
        const double fe = eval(xe);
        if (fe < fr) {
          pts[worst] = std::move(xe);
          vals[worst] = fe;
        } else {
          pts[worst] = std::move(xr);
          vals[worst] = fr;
        }
        continue;
      }
      if (fr < vals[second]) {
        pts[worst] = std::move(xr);
        vals[worst] = fr;
        continue;
      }
      const bool outside = fr < vals[worst];
      auto xc = along(outside ? -contract : contract);
      const double fc = eval(xc);
      if (fc < (outside ? fr : vals[worst])) {
        pts[worst] = std::move(xc);
        vals[worst] = fc;
        continue;
      }
      for (int i = 0; i <= dim; ++i) {
        if (i == best) continue;
        for (int j = 0; j < dim; ++j) pts[i][j] = pts[best][j] + shrink * (pts[i][j] - pts[best][j]);
        vals[i] = eval(pts[i]);
      }
    }
    const int best = static_cast<int>(std::min_element(vals.begin(), vals.end()) - vals.begin());
    x0 = pts[best];
    return vals[best];
  }

 private:
  double eval(const std::vector<double>& x) {
    ++evals_;
    return f_(x);
  }

  std::function<double(const std::vector<double>&)> f_;
  int max_evals_;
  double tol_;
  int evals_ = 0;
};

}  // namespace

TuneResult tune_poles(int n, const RegionK& k, double w0, const TuneOptions& options) {
  if (n < 1) throw InputError("tune_poles: n must be at least 1");
  if (k.empty()) throw InputError("tune_poles: region K has no samples");
  if (!(w0 > 0.0)) throw InputError("tune_poles: w_0 must be positive");
  if (options.restarts < 1) throw InputError("tune_poles: restarts must be at least 1");

  auto objective = [&](const std::vector<double>& x) {
    const auto poles = decode(x, n);
    return apriori_bound_pick(poles, w0, k).bound;
  };

  // Random starts put each pole at a random sample of K (reflected to the
  // upper half plane), shrunk radially by a random factor: the Blaschke
  // product is small on K only when poles sit near it.
  std::mt19937_64 rng(options.seed);
  std::uniform_int_distribution<std::size_t> pick(0, k.samples().size() - 1);
  std::uniform_real_distribution<double> shrink(0.6, 1.0);
  auto random_point = [&] {
    const Complex z = k.samples()[pick(rng)].z;
    return shrink(rng) * Complex(z.real(), std::abs(z.imag()));
  };

  std::vector<double> best_x;
  double best = 0.0;
  TuneResult result{FilterBank({Complex(0.0)}), 0.0, 0.0, {}};
  for (int r = 0; r < options.restarts; ++r) {
    std::vector<double> x(n);
    if (r == 0 && options.init) {
      x = encode(*options.init, n);
    } else {
      for (int i = 0; i < n / 2; ++i) {
        const Complex z = random_point();
        x[2 * i] = std::atanh(std::abs(z));
        x[2 * i + 1] = std::arg(z);
      }
      if (n % 2 == 1) x[n - 1] = std::atanh(random_point().real());
    }
    double value = objective(x);
    if (r == 0) result.initial_bound = value;

    // Restarting the simplex at its own optimum guards against the
    // premature collapse Nelder-Mead is prone to.
    NelderMead nm(objective, options.evaluations_per_dim * n, options.simplex_tol);
    double step = 0.25;
    while (nm.evaluations() < options.evaluations_per_dim * n) {
      const double v = nm.run(x, step);
      const bool improved = v < value * (1.0 - 1e-12);
      value = std::min(value, v);
      if (!improved) break;
      step = 0.05;
    }
    result.objective_trace.push_back(value);
    if (best_x.empty() || value < best) {
      best = value;
      best_x = x;
    }
  }

  auto poles = decode(best_x, n);
  // Coincident poles carry no new interpolation condition; nudge them apart
  // so the bank stays valid. The bound changes by O(1e-12).
  for (std::size_t i = 1; i < poles.size(); ++i) {
    for (std::size_t j = 1; j < i; ++j) {
      if (std::abs(poles[i] - poles[j]) < 1e-12) poles[i] *= 1.0 - 1e-12 * static_cast<double>(i);
    }
  }
  result.bound = apriori_bound_pick(poles, w0, k).bound;
  result.bank = FilterBank(std::move(poles));
  return result;
}

}  // namespace specunc
