#include "sgrasp/lp.hpp"

#include <cmath>
#include <limits>

namespace sgrasp::lp {

Problem::Problem(int num_vars)
    : cost(Eigen::VectorXd::Zero(num_vars)),
      nonnegative(static_cast<size_t>(num_vars), false),
      a_eq(0, num_vars),
      b_eq(0),
      a_le(0, num_vars),
      b_le(0) {}

namespace {

void appendRow(Eigen::MatrixXd& m, Eigen::VectorXd& v,
               const Eigen::RowVectorXd& row, double rhs) {
  const Eigen::Index r = m.rows();
  m.conservativeResize(r + 1, Eigen::NoChange);
  v.conservativeResize(r + 1);
  m.row(r) = row;
  v(r) = rhs;
}

class Tableau {
 public:
  Tableau(int rows, int cols) : t_(Eigen::MatrixXd::Zero(rows + 1, cols + 1)) {}

  int rows() const { return static_cast<int>(t_.rows()) - 1; }
  int cols() const { return static_cast<int>(t_.cols()) - 1; }
  double& at(int r, int c) { return t_(r, c); }
  double at(int r, int c) const { return t_(r, c); }
  double& rhs(int r) { return t_(r, cols()); }
  double rhs(int r) const { return t_(r, cols()); }
  double& cost(int c) { return t_(rows(), c); }
  double objective() const { return -t_(rows(), cols()); }
  auto objectiveRow() { return t_.row(rows()); }
  auto row(int r) { return t_.row(r); }

  void pivot(int r, int c) {
    t_.row(r) /= t_(r, c);
    for (int i = 0; i <= rows(); ++i) {
      if (i == r) continue;
      const double f = t_(i, c);
      if (f != 0.0) t_.row(i) -= f * t_.row(r);
    }
  }

 private:
  Eigen::MatrixXd t_;
};

// Minimizes the objective row over columns [0, allowed_cols). Returns false
// when unbounded.
bool runSimplex(Tableau& tab, std::vector<int>& basis, int allowed_cols,
                const Options& opt, bool& hit_limit) {
  const double dual_tol = 1e-10;
  for (int iter = 0; iter < opt.max_iterations; ++iter) {
    int enter = -1;
    for (int c = 0; c < allowed_cols; ++c) {
      if (tab.cost(c) < -dual_tol) {
        enter = c;
        break;
      }
    }
    if (enter < 0) return true;
    int leave = -1;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (int r = 0; r < tab.rows(); ++r) {
      const double a = tab.at(r, enter);
      if (a <= opt.pivot_tol) continue;
      const double ratio = std::max(tab.rhs(r), 0.0) / a;
      if (ratio < best_ratio - 1e-14 ||
          (std::abs(ratio - best_ratio) <= 1e-14 && leave >= 0 &&
           basis[r] < basis[leave])) {
        best_ratio = ratio;
        leave = r;
      }
    }
    if (leave < 0) return false;
    tab.pivot(leave, enter);
    basis[leave] = enter;
  }
  hit_limit = true;
  return true;
}

}  // namespace

void Problem::addEquality(const Eigen::RowVectorXd& row, double rhs) {
  appendRow(a_eq, b_eq, row, rhs);
}

void Problem::addInequality(const Eigen::RowVectorXd& row, double rhs) {
  appendRow(a_le, b_le, row, rhs);
}

void Problem::addEqualities(const Eigen::MatrixXd& rows,
                            const Eigen::VectorXd& rhs) {
  for (Eigen::Index r = 0; r < rows.rows(); ++r) addEquality(rows.row(r), rhs(r));
}

void Problem::addInequalities(const Eigen::MatrixXd& rows,
                              const Eigen::VectorXd& rhs) {
  for (Eigen::Index r = 0; r < rows.rows(); ++r)
    addInequality(rows.row(r), rhs(r));
}

Result solve(const Problem& problem, const Options& opt) {
  const int n = problem.numVars();
  Result result;

  // Column layout: one column per nonnegative variable, two per free one.
  std::vector<int> pos_col(n), neg_col(n, -1);
  int ncols = 0;
  for (int i = 0; i < n; ++i) {
    pos_col[i] = ncols++;
    if (!problem.nonnegative[i]) neg_col[i] = ncols++;
  }
  const int n_eq = static_cast<int>(problem.a_eq.rows());
  const int n_le = static_cast<int>(problem.a_le.rows());
  const int slack0 = ncols;
  ncols += n_le;
  const int m = n_eq + n_le;
  const int art0 = ncols;
  const int total = ncols + m;

  Tableau tab(m, total);
  double scale = 1.0;
  auto fillRow = [&](int r, const Eigen::RowVectorXd& a, double b, int slack) {
    double norm = a.cwiseAbs().maxCoeff();
    if (norm <= 0) norm = 1.0;
    for (int i = 0; i < n; ++i) {
      tab.at(r, pos_col[i]) = a(i) / norm;
      if (neg_col[i] >= 0) tab.at(r, neg_col[i]) = -a(i) / norm;
    }
    if (slack >= 0) tab.at(r, slack) = 1.0;
    tab.rhs(r) = b / norm;
    if (tab.rhs(r) < 0) tab.row(r) *= -1.0;
    scale = std::max(scale, std::abs(tab.rhs(r)));
    tab.at(r, art0 + r) = 1.0;
  };
  for (int r = 0; r < n_eq; ++r)
    fillRow(r, problem.a_eq.row(r), problem.b_eq(r), -1);
  for (int r = 0; r < n_le; ++r)
    fillRow(n_eq + r, problem.a_le.row(r), problem.b_le(r), slack0 + r);

  std::vector<int> basis(static_cast<size_t>(m));
  for (int r = 0; r < m; ++r) basis[r] = art0 + r;

  // Phase one: minimize the sum of artificials.
  for (int r = 0; r < m; ++r) {
    for (int c = 0; c < art0; ++c) tab.cost(c) -= tab.at(r, c);
    tab.objectiveRow()(total) -= tab.rhs(r);
  }
  bool hit_limit = false;
  runSimplex(tab, basis, art0, opt, hit_limit);
  if (tab.objective() > opt.feasibility_tol * scale || hit_limit) {
    result.status = Status::kInfeasible;
    return result;
  }

  // Drive artificials out of the basis where possible.
  for (int r = 0; r < m; ++r) {
    if (basis[r] < art0) continue;
    int best = -1;
    double best_abs = 1e-9;
    for (int c = 0; c < art0; ++c) {
      if (std::abs(tab.at(r, c)) > best_abs) {
        best_abs = std::abs(tab.at(r, c));
        best = c;
      }
    }
    if (best >= 0) {
      tab.pivot(r, best);
      basis[r] = best;
    }
  }

  // Phase two.
  tab.objectiveRow().setZero();
  for (int i = 0; i < n; ++i) {
    tab.cost(pos_col[i]) = problem.cost(i);
    if (neg_col[i] >= 0) tab.cost(neg_col[i]) = -problem.cost(i);
  }
  for (int r = 0; r < m; ++r) {
    const double cb = tab.cost(basis[r]);
    if (cb != 0.0) tab.objectiveRow() -= cb * tab.row(r);
  }
  const bool bounded = runSimplex(tab, basis, art0, opt, hit_limit);

  Eigen::VectorXd y = Eigen::VectorXd::Zero(total);
  for (int r = 0; r < m; ++r) y(basis[r]) = tab.rhs(r);
  result.x.resize(n);
  for (int i = 0; i < n; ++i) {
    result.x(i) = y(pos_col[i]) - (neg_col[i] >= 0 ? y(neg_col[i]) : 0.0);
  }
  result.objective = problem.cost.dot(result.x);
  result.status = bounded ? Status::kOptimal : Status::kUnbounded;
  return result;
}

}  // namespace sgrasp::lp
