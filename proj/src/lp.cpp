#include "specunc/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/LU>
#include <vector>

#include "specunc/errors.hpp"

namespace specunc {

const char* to_string(LpStatus s) {
  switch (s) {
    case LpStatus::optimal: return "optimal";
    case LpStatus::infeasible: return "infeasible";
    case LpStatus::unbounded: return "unbounded";
    case LpStatus::iteration_limit: return "iteration_limit";
  }
  return "unknown";
}

namespace {

// Column-compressed standard-form matrix; artificial columns are implicit
// unit vectors appended after the structural ones.
struct Columns {
  std::vector<int> start{0};
  std::vector<int> row;
  std::vector<double> value;

  int count() const { return static_cast<int>(start.size()) - 1; }
  void push(int r, double v) {
    row.push_back(r);
    value.push_back(v);
  }
  void close() { start.push_back(static_cast<int>(row.size())); }
};

enum class RunStatus { optimal, unbounded, iteration_limit };

class Simplex {
 public:
  Simplex(Columns cols, Eigen::VectorXd b, const LpOptions& opt)
      : cols_(std::move(cols)), b_(std::move(b)), opt_(opt) {
    m_ = static_cast<int>(b_.size());
    n_struct_ = cols_.count();
    basis_.assign(m_, -1);
    position_.assign(n_struct_ + m_, -1);
  }

  int rows() const { return m_; }
  int structural() const { return n_struct_; }
  bool is_artificial(int j) const { return j >= n_struct_; }

  void initial_basis() {
    // Reuse +1 unit columns (slacks) where possible, artificials elsewhere.
    for (int j = 0; j < n_struct_; ++j) {
      const int s = cols_.start[j];
      if (cols_.start[j + 1] - s != 1 || cols_.value[s] != 1.0) continue;
      const int r = cols_.row[s];
      if (basis_[r] < 0) basis_[r] = j;
    }
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] < 0) basis_[i] = n_struct_ + i;
    }
    for (int i = 0; i < m_; ++i) position_[basis_[i]] = i;
    refactor();
  }

  bool any_artificial_basic() const {
    return std::any_of(basis_.begin(), basis_.end(), [&](int j) { return is_artificial(j); });
  }

  RunStatus run(const Eigen::VectorXd& cost, bool phase_two, int& iterations) {
    int since_refactor = 0;
    int degenerate_run = 0;
    Eigen::VectorXd y(m_), alpha(m_);
    const double cost_scale = 1.0 + (cost.size() ? cost.cwiseAbs().maxCoeff() : 0.0);
    const double opt_tol = opt_.optimality_tol * cost_scale;
    while (true) {
      if (iterations >= opt_.max_iterations) return RunStatus::iteration_limit;
      duals(cost, y);
      const bool bland = degenerate_run > 50;
      int q = -1;
      double best = -opt_tol;
      for (int j = 0; j < n_struct_; ++j) {
        if (position_[j] >= 0) continue;
        double d = cost(j);
        for (int k = cols_.start[j]; k < cols_.start[j + 1]; ++k) d -= y(cols_.row[k]) * cols_.value[k];
        if (d < best) {
          best = d;
          q = j;
          if (bland) break;
        }
      }
      if (q < 0) {
        if (since_refactor > 0) {
          refactor();
          since_refactor = 0;
          continue;
        }
        return RunStatus::optimal;
      }

      alpha.setZero();
      for (int k = cols_.start[q]; k < cols_.start[q + 1]; ++k) {
        alpha.noalias() += binv_.col(cols_.row[k]) * cols_.value[k];
      }
      int r = -1;
      double step = std::numeric_limits<double>::infinity();
      double pivot_mag = 0.0;
      const double piv_tol = 1e-9;
      for (int i = 0; i < m_; ++i) {
        const double a = alpha(i);
        double t;
        if (phase_two && is_artificial(basis_[i])) {
          if (std::abs(a) <= piv_tol) continue;
          t = 0.0;
        } else {
          if (a <= piv_tol) continue;
          t = std::max(0.0, xb_(i)) / a;
        }
        if (t < step - 1e-12 || (t <= step + 1e-12 && std::abs(a) > pivot_mag)) {
          step = std::min(step, t);
          r = i;
          pivot_mag = std::abs(a);
        }
      }
      if (r < 0) return RunStatus::unbounded;

      xb_ -= step * alpha;
      xb_(r) = step;
      for (int i = 0; i < m_; ++i) {
        if (xb_(i) < 0.0 && xb_(i) > -opt_.feasibility_tol) xb_(i) = 0.0;
      }
      const Eigen::RowVectorXd pivot_row = binv_.row(r) / alpha(r);
      binv_.noalias() -= alpha * pivot_row;
      binv_.row(r) = pivot_row;
      position_[basis_[r]] = -1;
      basis_[r] = q;
      position_[q] = r;

      degenerate_run = step <= 1e-12 ? degenerate_run + 1 : 0;
      ++iterations;
      // Refactoring costs O(m^3) against O(m^2) per update, so large bases
      // refactor proportionally less often.
      if (++since_refactor >= std::max(opt_.refactor_interval, m_ / 2)) {
        refactor();
        since_refactor = 0;
      }
    }
  }

  void duals(const Eigen::VectorXd& cost, Eigen::VectorXd& y) const {
    Eigen::VectorXd cb(m_);
    for (int i = 0; i < m_; ++i) cb(i) = basis_[i] < n_struct_ ? cost(basis_[i]) : cost_art(i);
    y.noalias() = binv_.transpose() * cb;
  }

  double artificial_sum() const {
    double s = 0.0;
    for (int i = 0; i < m_; ++i) {
      if (is_artificial(basis_[i])) s += std::max(0.0, xb_(i));
    }
    return s;
  }

  Eigen::VectorXd primal() const {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(n_struct_);
    for (int i = 0; i < m_; ++i) {
      if (!is_artificial(basis_[i])) x(basis_[i]) = std::max(0.0, xb_(i));
    }
    return x;
  }

  void set_artificial_cost(double c) { artificial_cost_ = c; }

 private:
  double cost_art(int) const { return artificial_cost_; }

  // Basis columns with a single nonzero (slacks, artificials) are eliminated
  // directly; only the block of the remaining columns on the uncovered rows
  // is factorized.
  void refactor() {
    std::vector<int> unit_row(m_, -1);
    std::vector<double> unit_val(m_, 0.0);
    std::vector<int> covered(m_, -1);
    std::vector<int> dense_pos;
    for (int i = 0; i < m_; ++i) {
      const int j = basis_[i];
      int r = -1;
      double v = 0.0;
      if (is_artificial(j)) {
        r = j - n_struct_;
        v = 1.0;
      } else if (cols_.start[j + 1] - cols_.start[j] == 1) {
        r = cols_.row[cols_.start[j]];
        v = cols_.value[cols_.start[j]];
      }
      if (r >= 0 && covered[r] < 0 && v != 0.0) {
        unit_row[i] = r;
        unit_val[i] = v;
        covered[r] = i;
      } else {
        dense_pos.push_back(i);
      }
    }
    std::vector<int> free_rows;
    std::vector<int> row_slot(m_, -1);
    for (int r = 0; r < m_; ++r) {
      if (covered[r] < 0) {
        row_slot[r] = static_cast<int>(free_rows.size());
        free_rows.push_back(r);
      }
    }
    const int p = static_cast<int>(dense_pos.size());
    if (static_cast<int>(free_rows.size()) != p) throw NumericalError("lp_solve: singular basis");

    Eigen::MatrixXd z;
    if (p > 0) {
      Eigen::MatrixXd block = Eigen::MatrixXd::Zero(p, p);
      for (int a = 0; a < p; ++a) {
        const int j = basis_[dense_pos[a]];
        for (int k = cols_.start[j]; k < cols_.start[j + 1]; ++k) {
          const int slot = row_slot[cols_.row[k]];
          if (slot >= 0) block(slot, a) = cols_.value[k];
        }
      }
      Eigen::PartialPivLU<Eigen::MatrixXd> lu(block);
      z = lu.inverse();
      if (!z.allFinite()) throw NumericalError("lp_solve: singular basis");
    }

    binv_.setZero(m_, m_);
    for (int a = 0; a < p; ++a) {
      for (int b = 0; b < p; ++b) binv_(dense_pos[a], free_rows[b]) = z(a, b);
    }
    for (int i = 0; i < m_; ++i) {
      if (unit_row[i] >= 0) binv_(i, unit_row[i]) = 1.0 / unit_val[i];
    }
    // Covered rows also see the dense columns: x_i = (y_r - sum_a B(r, J_a) x_a) / v.
    for (int a = 0; a < p; ++a) {
      const int j = basis_[dense_pos[a]];
      for (int k = cols_.start[j]; k < cols_.start[j + 1]; ++k) {
        const int pos = covered[cols_.row[k]];
        if (pos < 0) continue;
        const double f = cols_.value[k] / unit_val[pos];
        for (int b = 0; b < p; ++b) binv_(pos, free_rows[b]) -= f * z(a, b);
      }
    }
    xb_ = binv_ * b_;
    if (!xb_.allFinite()) throw NumericalError("lp_solve: singular basis");
  }

  Columns cols_;
  Eigen::VectorXd b_;
  LpOptions opt_;
  int m_ = 0;
  int n_struct_ = 0;
  std::vector<int> basis_;
  std::vector<int> position_;
  Eigen::MatrixXd binv_;
  Eigen::VectorXd xb_;
  double artificial_cost_ = 0.0;
};

}  // namespace

LpSolution lp_solve(const LinearProgram& lp, const LpOptions& options) {
  const int n = static_cast<int>(lp.cost.size());
  const int m_eq = static_cast<int>(lp.b_eq.size());
  const int m_ub = static_cast<int>(lp.b_ub.size());
  if ((m_eq > 0 && (lp.a_eq.rows() != m_eq || lp.a_eq.cols() != n)) ||
      (m_ub > 0 && (lp.a_ub.rows() != m_ub || lp.a_ub.cols() != n)) ||
      (!lp.free.empty() && static_cast<int>(lp.free.size()) != n)) {
    throw InputError("lp_solve: inconsistent problem dimensions");
  }
  const int m = m_eq + m_ub;

  Eigen::VectorXd b(m);
  if (m_eq) b.head(m_eq) = lp.b_eq;
  if (m_ub) b.tail(m_ub) = lp.b_ub;
  Eigen::VectorXd sign = Eigen::VectorXd::Ones(m);
  for (int i = 0; i < m; ++i) {
    if (b(i) < 0.0) {
      sign(i) = -1.0;
      b(i) = -b(i);
    }
  }

  // Standard-form columns: each variable (split when free), then slacks.
  Columns cols;
  std::vector<double> std_cost;
  std::vector<int> origin;  // structural column -> original variable, -1 for slack
  std::vector<double> orient;
  auto emit_variable = [&](int j, double s) {
    if (m_eq) {
      for (SparseMatrix::InnerIterator it(lp.a_eq, j); it; ++it) {
        cols.push(static_cast<int>(it.row()), s * it.value() * sign(it.row()));
      }
    }
    if (m_ub) {
      for (SparseMatrix::InnerIterator it(lp.a_ub, j); it; ++it) {
        const int r = m_eq + static_cast<int>(it.row());
        cols.push(r, s * it.value() * sign(r));
      }
    }
    cols.close();
    std_cost.push_back(s * lp.cost(j));
    origin.push_back(j);
    orient.push_back(s);
  };
  for (int j = 0; j < n; ++j) {
    emit_variable(j, 1.0);
    if (!lp.free.empty() && lp.free[j]) emit_variable(j, -1.0);
  }
  for (int i = 0; i < m_ub; ++i) {
    const int r = m_eq + i;
    cols.push(r, sign(r));
    cols.close();
    std_cost.push_back(0.0);
    origin.push_back(-1);
    orient.push_back(0.0);
  }

  LpSolution sol;
  sol.x = Eigen::VectorXd::Zero(n);
  sol.dual_eq = Eigen::VectorXd::Zero(m_eq);
  sol.dual_ub = Eigen::VectorXd::Zero(m_ub);

  Simplex simplex(std::move(cols), b, options);
  simplex.initial_basis();
  const int n_struct = simplex.structural();
  int iterations = 0;

  if (simplex.any_artificial_basic()) {
    simplex.set_artificial_cost(1.0);
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(n_struct);
    const auto st = simplex.run(zero, false, iterations);
    if (st == RunStatus::iteration_limit) {
      sol.status = LpStatus::iteration_limit;
      sol.iterations = iterations;
      return sol;
    }
    const double scale = 1.0 + (m ? b.cwiseAbs().maxCoeff() : 0.0);
    if (simplex.artificial_sum() > options.feasibility_tol * scale) {
      sol.status = LpStatus::infeasible;
      sol.iterations = iterations;
      return sol;
    }
    simplex.set_artificial_cost(0.0);
  }

  const Eigen::VectorXd cost = Eigen::Map<const Eigen::VectorXd>(std_cost.data(), n_struct);
  const auto st = simplex.run(cost, true, iterations);
  sol.iterations = iterations;
  if (st == RunStatus::unbounded) {
    sol.status = LpStatus::unbounded;
    return sol;
  }
  if (st == RunStatus::iteration_limit) {
    sol.status = LpStatus::iteration_limit;
    return sol;
  }

  const Eigen::VectorXd xs = simplex.primal();
  for (int k = 0; k < n_struct; ++k) {
    if (origin[k] >= 0) sol.x(origin[k]) += orient[k] * xs(k);
  }
  Eigen::VectorXd y(m);
  simplex.duals(cost, y);
  for (int i = 0; i < m; ++i) y(i) *= sign(i);
  if (m_eq) sol.dual_eq = y.head(m_eq);
  if (m_ub) sol.dual_ub = y.tail(m_ub);

  sol.objective = lp.cost.dot(sol.x);
  sol.dual_objective = 0.0;
  if (m_eq) sol.dual_objective += lp.b_eq.dot(sol.dual_eq);
  if (m_ub) sol.dual_objective += lp.b_ub.dot(sol.dual_ub);
  sol.status = LpStatus::optimal;
  return sol;
}

}  // namespace specunc
