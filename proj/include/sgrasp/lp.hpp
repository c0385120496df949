#pragma once

// Small dense linear programming: two-phase simplex with Bland's rule.
//
// Intended for the tiny problems that appear in contact analysis (tens of
// variables and rows). Problems are stated as
//
//   minimize    c' x
//   subject to  A_eq x  = b_eq
//               A_le x <= b_le
//               x_i >= 0 for every i flagged nonnegative, others free.

#include <vector>

#include <Eigen/Dense>

namespace sgrasp::lp {

enum class Status { kOptimal, kInfeasible, kUnbounded };

struct Problem {
  explicit Problem(int num_vars);

  int numVars() const { return static_cast<int>(cost.size()); }
  void addEquality(const Eigen::RowVectorXd& row, double rhs);
  void addInequality(const Eigen::RowVectorXd& row, double rhs);
  void addEqualities(const Eigen::MatrixXd& rows, const Eigen::VectorXd& rhs);
  void addInequalities(const Eigen::MatrixXd& rows, const Eigen::VectorXd& rhs);

  Eigen::VectorXd cost;
  std::vector<bool> nonnegative;
  Eigen::MatrixXd a_eq;
  Eigen::VectorXd b_eq;
  Eigen::MatrixXd a_le;
  Eigen::VectorXd b_le;
};

struct Result {
  Status status = Status::kInfeasible;
  Eigen::VectorXd x;
  double objective = 0;
};

struct Options {
  // Phase-one residual accepted as feasible, relative to max(1, |b|_inf).
  double feasibility_tol = 1e-9;
  double pivot_tol = 1e-11;
  int max_iterations = 100000;
};

Result solve(const Problem& problem, const Options& options = {});

inline bool isFeasible(const Problem& problem, const Options& options = {}) {
  Problem p = problem;
  p.cost.setZero();
  return solve(p, options).status != Status::kInfeasible;
}

}  // namespace sgrasp::lp
