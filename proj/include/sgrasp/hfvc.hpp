#pragma once

// Hybrid force-velocity control: split the hand's twist/wrench space into
// orthogonal force-controlled and velocity-controlled directions so that a
// velocity command realizes the goal in a given contact mode.

#include <Eigen/Dense>

#include "sgrasp/cone.hpp"
#include "sgrasp/geometry.hpp"
#include "sgrasp/modes.hpp"

namespace sgrasp {

// Goal velocity: G V = b.
struct GoalSpec {
  Eigen::MatrixXd G;
  Eigen::VectorXd b;
};

struct HfvcAction {
  int n_af = 0;
  int n_av = 0;
  // Orthonormal; force-controlled rows first, then velocity-controlled rows.
  Eigen::Matrix3d R_a = Eigen::Matrix3d::Identity();
  Eigen::VectorXd omega_av;
  Eigen::VectorXd eta_af;
  Vector6d v_star = Vector6d::Zero();
  // R_a acts on scaled hand twists (v_x, v_y, L omega), the dual of the
  // scaled wrenches, so omega_av is in m/s.
  double char_length = 1;

  Eigen::MatrixXd forceRows() const { return R_a.topRows(n_af); }
  Eigen::MatrixXd velocityRows() const { return R_a.bottomRows(n_av); }
  // C_v = [0 R_av diag(1, 1, L)], acting on raw V.
  Eigen::MatrixXd velocityConstraint() const;
};

// Throws kGoalInfeasible when [N; G] V = [0; b] has no solution and
// kGoalNotVelocityControllable when the goal cannot be enforced through hand
// velocity alone (or needs no velocity control at all).
HfvcAction velocityDecomposition(const Eigen::MatrixXd& N, const GoalSpec& goal,
                                 double char_length = 1);

// Cone generated by the negated velocity-controlled directions.
Pcc velocityCone(const HfvcAction& action);

// True when no statically balanced wrench lies in the velocity cone.
bool crashSafe(const Pcc& c_af, const HfvcAction& action);

// Some V satisfies the mode constraints and the velocity command.
bool vFeasible(const ModeConstraints& mc, const HfvcAction& action);

}  // namespace sgrasp
