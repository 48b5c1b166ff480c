#include "specunc/uncertainty.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "specunc/errors.hpp"
#include "specunc/schur_levinson.hpp"

namespace specunc {

namespace {

// Completing the square in the Schur complement of the bordered Pick
// matrix [[A, v], [v^*, (w + conj w) kappa]] gives
// |w - center|^2 <= |center|^2 - <d,d>/<b,b>, <x,y> = y^* A^{-1} x.
// The border column is v = b w - d in the Toeplitz case, where
// center = (kappa + <d,b>)/<b,b>, and v = b conj(w) - d in the Pick case,
// where center = (kappa + <b,d>)/<b,b>.
DiscEnvelope border_disc(const Eigen::LLT<CMatrix>& llt, const CVector& b, const CVector& d,
                         double kappa, bool conjugate_border, Complex z) {
  const CVector ab = llt.solve(b);
  const CVector ad = llt.solve(d);
  const double bb = b.dot(ab).real();
  const Complex bd = conjugate_border ? d.dot(ab) : b.dot(ad);
  const double dd = d.dot(ad).real();
  if (!(bb > 0.0)) throw NumericalError("feasible disc: degenerate border vector");
  const Complex center = (kappa + bd) / bb;
  double r2 = std::norm(center) - dd / bb;
  if (r2 < 0.0) {
    if (r2 < -1e-12 * (1.0 + std::norm(center))) {
      throw NumericalError("feasible disc: negative squared radius (inconsistent data)");
    }
    r2 = 0.0;
  }
  return {z, center, std::sqrt(r2)};
}

double golden_max(const std::function<double(double)>& f, double lo, double hi, double tol,
                  double& arg) {
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo, b = hi;
  double x1 = b - g * (b - a), x2 = a + g * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > tol) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + g * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - g * (b - a);
      f1 = f(x1);
    }
  }
  arg = f1 > f2 ? x1 : x2;
  return std::max(f1, f2);
}

// Shared driver: evaluates 2R over the samples of K, refines along curves,
// then scans the singular members for the extremal pair.
DiameterReport diameter_common(const std::function<DiscEnvelope(Complex)>& disc_at,
                               const std::function<SpectralMeasure(double)>& member,
                               bool degenerate, const RegionK& k, const DiameterOptions& opt) {
  if (k.empty()) throw InputError("diameter: region K has no samples");
  DiameterReport rep;
  const auto& samples = k.samples();
  rep.per_point.reserve(samples.size() + 1);
  std::size_t best = 0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    rep.per_point.push_back({samples[i].z, 2.0 * disc_at(samples[i].z).radius});
    if (rep.per_point[i].diameter > rep.per_point[best].diameter) best = i;
  }
  rep.rho = rep.per_point[best].diameter;
  rep.argmax_z = samples[best].z;

  if (opt.refine) {
    const auto& curves = k.curves();
    std::vector<int> best_on(curves.size(), -1);
    std::vector<int> count(curves.size(), 0);
    for (std::size_t i = 0; i < samples.size(); ++i) {
      const int c = samples[i].curve;
      if (c < 0) continue;
      ++count[c];
      if (best_on[c] < 0 || rep.per_point[i].diameter > rep.per_point[best_on[c]].diameter) {
        best_on[c] = static_cast<int>(i);
      }
    }
    Complex refined_z;
    double refined = rep.rho;
    for (std::size_t c = 0; c < curves.size(); ++c) {
      if (best_on[c] < 0 || count[c] < 2) continue;
      const auto& cv = curves[c];
      const double span = cv.t_to - cv.t_from;
      const double step = cv.closed ? span / count[c] : span / (count[c] - 1);
      double lo = samples[best_on[c]].t - step;
      double hi = samples[best_on[c]].t + step;
      if (!cv.closed) {
        lo = std::max(lo, cv.t_from);
        hi = std::min(hi, cv.t_to);
      }
      double t = 0.0;
      const double v = golden_max([&](double s) { return 2.0 * disc_at(cv.at(s)).radius; }, lo, hi,
                                  1e-6, t);
      if (v > refined) {
        refined = v;
        refined_z = cv.at(t);
      }
    }
    if (refined > rep.rho) {
      rep.rho = refined;
      rep.argmax_z = refined_z;
      rep.per_point.push_back({refined_z, refined});
    }
  }

  if (!opt.extremal || degenerate || rep.rho == 0.0) return rep;

  const Complex z = rep.argmax_z;
  auto value = [&](double psi) { return poisson_eval(member(psi), z); };
  const int m = std::max(8, opt.psi_samples);
  std::vector<double> vals(m);
  int imax = 0, imin = 0;
  for (int i = 0; i < m; ++i) {
    vals[i] = value(2.0 * kPi * i / m);
    if (vals[i] > vals[imax]) imax = i;
    if (vals[i] < vals[imin]) imin = i;
  }
  const double h = 2.0 * kPi / m;
  double psi_max = imax * h, psi_min = imin * h;
  double arg = 0.0;
  double vmax = golden_max(value, psi_max - h, psi_max + h, 1e-9, arg);
  if (vmax > vals[imax]) {
    psi_max = arg;
  } else {
    vmax = vals[imax];
  }
  double vmin = -golden_max([&](double s) { return -value(s); }, psi_min - h, psi_min + h, 1e-9, arg);
  if (vmin < vals[imin]) {
    psi_min = arg;
  } else {
    vmin = vals[imin];
  }
  rep.extremal = {member(psi_max), member(psi_min)};
  rep.extremal_separation = vmax - vmin;
  return rep;
}

}  // namespace

ToeplitzDiscs::ToeplitzDiscs(const CovarianceSequence& c) : c_(c) {
  if (!(c.c0() > 0.0)) throw InfeasibleError("feasible disc: c_0 must be positive");
  const Positivity pos = classify(c);
  if (pos == Positivity::invalid) throw InfeasibleError("feasible disc: Toeplitz matrix is indefinite");
  const auto s = covariance_to_schur(c);
  // A tiny eigenvalue alone does not make the data singular: with every
  // |gamma_k| < 1 the set is still a family of discs, only ill-conditioned.
  if (pos == Positivity::nonnegative_singular && s.singular) {
    singular_ = true;
    unique_.push_back(atomic_measure(s));
    return;
  }
  llt_.compute(toeplitz(c));
  if (llt_.info() != Eigen::Success) throw NumericalError("feasible disc: Cholesky factorization failed");
  prediction_error_ = prediction_error(s);
  phi_ = orthogonal_polynomials(s).phi.back();
}

DiscEnvelope ToeplitzDiscs::at(Complex z) const {
  require_inside_disc(z, "feasible_disc_toeplitz");
  if (singular_) return {z, herglotz_eval(unique_.front(), z), 0.0};
  // The border vectors z^{-(k+1)} (...) are multiplied through by z^{n+1},
  // which removes the singularity at z = 0.
  const int n = c_.order();
  CVector b(n + 1), d(n + 1);
  Complex partial(0.0);
  Complex zk(1.0);
  std::vector<Complex> zpow(n + 1);
  for (int k = 0; k <= n; ++k) {
    zpow[k] = zk;
    zk *= z;
  }
  for (int k = 0; k <= n; ++k) {
    partial += (k == 0 ? 1.0 : 2.0) * c_[k] * zpow[k];
    b(k) = zpow[n - k];
    d(k) = zpow[n - k] * partial;
  }
  const double r2 = std::norm(z);
  const double scale = std::pow(r2, n + 1);
  // Same algebra as the Pick case with A = 2 T_n.
  DiscEnvelope disc = border_disc(llt_, b, d, 2.0 * scale / (1.0 - r2), false, z);
  // The squared radius above is a difference of O(c_0^2) terms and loses all
  // digits once R < sqrt(eps) c_0. The equal closed form
  // R = 2 |z|^{n+1} sigma^2 / (|phi_n^*(z)|^2 - |z|^2 |phi_n(z)|^2)
  // has no cancellation.
  const Complex phi = polyval(phi_, z);
  const Complex phi_star = polyval(reversed(phi_, n), z);
  const double den = std::norm(phi_star) - r2 * std::norm(phi);
  if (!(den > 0.0)) throw NumericalError("feasible disc: degenerate orthogonal polynomial");
  disc.radius = 2.0 * std::pow(std::abs(z), n + 1) * prediction_error_ / den;
  return disc;
}

PickDiscs::PickDiscs(const PickData& p) : p_(p), np_(p) {
  const CMatrix pm = pick_matrix(p);
  const Positivity pos = classify_hermitian(pm);
  if (pos == Positivity::invalid) throw InfeasibleError("feasible disc: Pick matrix is indefinite");
  if (pos == Positivity::nonnegative_singular) {
    singular_ = true;
    return;
  }
  llt_.compute(pm);
  if (llt_.info() != Eigen::Success) throw NumericalError("feasible disc: Cholesky factorization failed");
}

DiscEnvelope PickDiscs::at(Complex z) const {
  require_inside_disc(z, "feasible_disc_pick");
  const auto& nodes = p_.nodes();
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    if (std::abs(z - nodes[k]) < 1e-14) return {z, p_.values()[k], 0.0};
  }
  if (singular_) return {z, np_.eval(z), 0.0};
  const int m = static_cast<int>(nodes.size());
  CVector b(m), d(m);
  for (int k = 0; k < m; ++k) {
    const Complex den = 1.0 - nodes[k] * std::conj(z);
    b(k) = 1.0 / den;
    d(k) = -p_.values()[k] / den;
  }
  return border_disc(llt_, b, d, 1.0 / (1.0 - std::norm(z)), true, z);
}

DiscEnvelope feasible_disc_toeplitz(const CovarianceSequence& c, Complex z) {
  return ToeplitzDiscs(c).at(z);
}

DiscEnvelope feasible_disc_pick(const PickData& p, Complex z) { return PickDiscs(p).at(z); }

DiameterReport diameter_toeplitz(const CovarianceSequence& c, const RegionK& k,
                                 const DiameterOptions& options) {
  const ToeplitzDiscs discs(c);
  SchurParameters s;
  if (!discs.singular()) s = covariance_to_schur(c);
  auto member = [&](double psi) {
    SchurParameters ext = s;
    ext.gammas.push_back(std::polar(1.0, psi));
    ext.singular = true;
    return atomic_measure(ext, options.grid);
  };
  return diameter_common([&](Complex z) { return discs.at(z); }, member, discs.singular(), k, options);
}

DiameterReport diameter_pick(const PickData& p, const RegionK& k, const DiameterOptions& options) {
  const PickDiscs discs(p);
  const NevanlinnaPick np(p);
  auto member = [&](double psi) { return np.boundary_measure(std::polar(1.0, psi), options.grid); };
  return diameter_common([&](Complex z) { return discs.at(z); }, member, discs.singular(), k, options);
}

double apriori_bound_toeplitz(double c0, int n, const RegionK& k) {
  if (!(c0 > 0.0)) throw InputError("apriori bound: c_0 must be positive");
  if (n < 0) throw InputError("apriori bound: n must be nonnegative");
  if (k.empty()) throw InputError("apriori bound: region K has no samples");
  const double r = k.max_modulus();
  return 4.0 * c0 * std::pow(r, n + 1) / (1.0 - r * r);
}

Complex blaschke(std::span<const Complex> nodes, Complex z) {
  Complex b(1.0);
  for (const auto& zk : nodes) b *= (z - zk) / (1.0 - std::conj(zk) * z);
  return b;
}

PickBound apriori_bound_pick(std::span<const Complex> nodes, double w0, const RegionK& k) {
  if (nodes.empty() || nodes.front() != Complex(0.0)) {
    throw InputError("apriori bound: the first node must be z_0 = 0");
  }
  for (const auto& zk : nodes) {
    if (!(std::abs(zk) < 1.0)) throw InputError("apriori bound: nodes must satisfy |z| < 1");
  }
  if (!(w0 > 0.0)) throw InputError("apriori bound: w_0 must be positive");
  if (k.empty()) throw InputError("apriori bound: region K has no samples");
  PickBound out;
  out.bound = -1.0;
  for (const auto& s : k.samples()) {
    const double v = 4.0 * w0 * std::abs(blaschke(nodes, s.z)) / (1.0 - std::norm(s.z));
    if (v > out.bound) {
      out.bound = v;
      out.argmax = s.z;
    }
  }
  const Complex ab = std::conj(out.argmax);
  for (const auto& zk : nodes) out.equality_values.push_back(w0 * (1.0 + zk * ab) / (1.0 - zk * ab));
  return out;
}

}  // namespace specunc
