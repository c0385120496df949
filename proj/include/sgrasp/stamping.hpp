#pragma once

// Wrench stamping: pick the force command of a hybrid force-velocity action
// so that, among all modes the velocity command allows, only the desired mode
// can hold the commanded wrench.

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sgrasp/cone.hpp"
#include "sgrasp/hfvc.hpp"
#include "sgrasp/modes.hpp"

namespace sgrasp {

// Modes whose cone margin is at or below this are treated as degenerate.
inline constexpr double kMarginEps = 1e-9;

struct MarginDetail {
  double value = 0;
  // Cone whose depth is the bottleneck: 0 environment, 1 hand, -1 none.
  int cone = -1;
  SigmaDetail sigma;
  Pcc intersection;
};

// min(sigma(C_e, C_m), sigma(C_h, C_m)) with C_m = C_e ∩ C_h; zero when a cone
// or the intersection is trivial.
MarginDetail geometricMarginDetail(const Pcc& env, const Pcc& hand);
inline double geometricMargin(const Pcc& env, const Pcc& hand) {
  return geometricMarginDetail(env, hand).value;
}

// Per-mode F-feasibility data shared by stamping and mode selection.
struct ModeAnalysis {
  ContactMode mode;
  ModeConstraints constraints;
  ModeCones cones;
  Pcc c_m;
  double phi_g = 0;
  bool intersects = false;  // C_m is not the zero cone

  bool fFeasible() const { return intersects && phi_g > kMarginEps; }
};

struct ModeTable {
  std::vector<ModeAnalysis> modes;
  Pcc c_af;

  const ModeAnalysis* find(const ContactMode& mode) const;
};

ModeTable analyzeModes(const Scene& scene);

struct ForceChoice {
  Eigen::VectorXd direction;  // unit, in projected coordinates
  double phi_c = 0;
};

// An arc [start, start + width] on the unit circle, angles in radians.
struct Arc {
  double start = 0;
  double width = 0;
};

// Arcs covered by a 2-D cone (a line gives two zero-width arcs).
std::vector<Arc> coneArcs(const Pcc& cone);

// Angle from unit direction d (projected coordinates) to a projected cone;
// pi when the cone is zero.
double angularDistance(const Eigen::VectorXd& d, const Pcc& cone);

// Chooses a force direction inside goal and away from others. Throws
// kIndistinguishable when no such direction exists.
ForceChoice pickForceControl(const Pcc& goal, const std::vector<Pcc>& others);

struct ModeDisposition {
  ContactMode mode;
  // goal | f-infeasible | v-infeasible | competitor
  std::string tag;
};

struct StampingResult {
  ContactMode mode;
  HfvcAction action;
  double phi_g = 0;
  double phi_c = 0;
  double psi = 0;
  double k_f = 0;
  Eigen::VectorXd force_direction;  // projected unit direction, eta = -K_F d
  Pcc goal_projection;
  std::vector<ContactMode> competitors;
  std::vector<Pcc> competitor_projections;
  std::vector<ModeDisposition> ledger;

  double disturbance() const { return k_f * psi; }
};

StampingResult wrenchStamp(const Scene& scene, const ContactMode& mode,
                           const GoalSpec& goal);
StampingResult wrenchStamp(const Scene& scene, const ModeTable& table,
                           const ContactMode& mode, const GoalSpec& goal);

}  // namespace sgrasp
