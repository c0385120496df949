#include "sgrasp/hfvc.hpp"

#include <cmath>

#include "sgrasp/error.hpp"
#include "sgrasp/lp.hpp"

namespace sgrasp {

namespace {

constexpr double kRankTol = 1e-9;

int rankOf(const Eigen::MatrixXd& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& s = svd.singularValues();
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) r += s(i) > kRankTol ? 1 : 0;
  return r;
}

Eigen::MatrixXd nullSpace(const Eigen::MatrixXd& m, int cols) {
  if (m.rows() == 0) return Eigen::MatrixXd::Identity(cols, cols);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullV);
  const int r = rankOf(m);
  return svd.matrixV().rightCols(cols - r);
}

// Largest-magnitude entry positive.
void fixSign(Eigen::Matrix3d& m, int r) {
  Eigen::Index k;
  m.row(r).cwiseAbs().maxCoeff(&k);
  if (m(r, k) < 0) m.row(r) *= -1.0;
}

}  // namespace

Eigen::MatrixXd HfvcAction::velocityConstraint() const {
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n_av, 6);
  c.rightCols(3) = velocityRows();
  c.col(5) *= char_length;
  return c;
}

HfvcAction velocityDecomposition(const Eigen::MatrixXd& N, const GoalSpec& goal,
                                 double char_length) {
  if (goal.G.cols() != 6 || goal.G.rows() != goal.b.size() || goal.G.rows() == 0)
    throw Error(ErrorCode::kParse, "goal must have G with 6 columns and matching b");
  if (N.rows() > 0 && N.cols() != 6)
    throw Error(ErrorCode::kParse, "mode constraints must have 6 columns");
  if (!(char_length > 0))
    throw Error(ErrorCode::kParse, "characteristic length must be positive");
  // Work on scaled twists (v, L omega); raw = unscale * scaled.
  Vector6d unscale = Vector6d::Ones();
  unscale(2) = unscale(5) = 1.0 / char_length;
  const Eigen::MatrixXd Ns = N.rows() > 0 ? Eigen::MatrixXd(N * unscale.asDiagonal())
                                          : Eigen::MatrixXd(0, 6);
  const Eigen::MatrixXd Gs = goal.G * unscale.asDiagonal();

  const Eigen::Index nn = Ns.rows();
  Eigen::MatrixXd A(nn + Gs.rows(), 6);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(A.rows());
  if (nn > 0) A.topRows(nn) = Ns;
  A.bottomRows(Gs.rows()) = Gs;
  rhs.tail(goal.b.size()) = goal.b;

  HfvcAction action;
  action.char_length = char_length;
  const Vector6d vs = A.completeOrthogonalDecomposition().solve(rhs);
  const double residual = (A * vs - rhs).norm();
  if (residual > 1e-9 * std::max(1.0, rhs.norm()))
    throw Error(ErrorCode::kGoalInfeasible,
                "goal velocity is inconsistent with the mode constraints");
  action.v_star = unscale.asDiagonal() * vs;

  const Eigen::MatrixXd U = nullSpace(Ns, 6);
  const Eigen::MatrixXd AU = Gs * U;
  const Eigen::MatrixXd Mh = U.bottomRows(3);
  Eigen::MatrixXd stacked(Mh.rows() + AU.rows(), U.cols());
  stacked << Mh, AU;
  if (rankOf(stacked) != rankOf(Mh))
    throw Error(ErrorCode::kGoalNotVelocityControllable,
                "goal is not enforceable through hand velocity");

  const Eigen::MatrixXd C0 =
      AU * Mh.completeOrthogonalDecomposition().pseudoInverse();
  const int n_av = rankOf(C0);
  if (n_av == 0)
    throw Error(ErrorCode::kGoalNotVelocityControllable,
                "goal requires no velocity-controlled direction");
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(C0, Eigen::ComputeFullV);
  const Eigen::Matrix3d V = svd.matrixV();
  action.n_av = n_av;
  action.n_af = 3 - n_av;
  const Eigen::Vector3d vh = vs.tail<3>();
  for (int k = 0; k < action.n_af; ++k) {
    action.R_a.row(k) = V.col(n_av + k).transpose();
    fixSign(action.R_a, k);
  }
  for (int k = 0; k < n_av; ++k) {
    const int r = action.n_af + k;
    action.R_a.row(r) = V.col(k).transpose();
    const double proj = action.R_a.row(r).dot(vh);
    if (std::abs(proj) > 1e-12) {
      if (proj < 0) action.R_a.row(r) *= -1.0;
    } else {
      fixSign(action.R_a, r);
    }
  }
  action.omega_av = action.velocityRows() * vh;
  action.eta_af = Eigen::VectorXd::Zero(action.n_af);
  return action;
}

Pcc velocityCone(const HfvcAction& action) {
  return Pcc::fromGenerators(-action.velocityRows());
}

bool crashSafe(const Pcc& c_af, const HfvcAction& action) {
  if (c_af.isZero()) return true;
  return intersect(c_af, velocityCone(action)).isZero();
}

bool vFeasible(const ModeConstraints& mc, const HfvcAction& action) {
  lp::Problem p(6);
  p.addEqualities(mc.N, Eigen::VectorXd::Zero(mc.N.rows()));
  p.addInequalities(mc.M, Eigen::VectorXd::Zero(mc.M.rows()));
  p.addEqualities(action.velocityConstraint(), action.omega_av);
  return lp::isFeasible(p);
}

}  // namespace sgrasp
