#pragma once

#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

namespace specunc {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor>;

/// minimize cost^T x  subject to  a_eq x = b_eq,  a_ub x <= b_ub,
/// x_j >= 0 unless free[j].
struct LinearProgram {
  Eigen::VectorXd cost;
  SparseMatrix a_eq;
  Eigen::VectorXd b_eq;
  SparseMatrix a_ub;
  Eigen::VectorXd b_ub;
  std::vector<bool> free;  // empty means every variable is nonnegative
};

enum class LpStatus { optimal, infeasible, unbounded, iteration_limit };

const char* to_string(LpStatus s);

struct LpSolution {
  LpStatus status = LpStatus::iteration_limit;
  double objective = 0.0;
  Eigen::VectorXd x;
  /// Multipliers of the equality rows (free) and inequality rows (<= 0);
  /// b_eq^T dual_eq + b_ub^T dual_ub is the dual objective.
  Eigen::VectorXd dual_eq;
  Eigen::VectorXd dual_ub;
  double dual_objective = 0.0;
  int iterations = 0;

  double duality_gap() const { return std::abs(objective - dual_objective); }
};

struct LpOptions {
  int max_iterations = 200000;
  double feasibility_tol = 1e-9;
  double optimality_tol = 1e-10;
  int refactor_interval = 64;
};

/// Dense two-phase revised simplex on the standard-form reformulation
/// (free variables split, inequality rows given slacks). Columns are kept
/// sparse; the basis inverse is dense and refactored periodically.
LpSolution lp_solve(const LinearProgram& lp, const LpOptions& options = {});

}  // namespace specunc
