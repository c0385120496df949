#pragma once

// Brute-force quasi-static checks: which modes can hold a given action, and
// how the margins behave when scene parameters are perturbed.

#include <cstdint>
#include <string>
#include <vector>

#include "sgrasp/hfvc.hpp"
#include "sgrasp/modes.hpp"

namespace sgrasp {

// Static balance of mode m under the action: some tau_e, tau_h >= 0 and free
// eta_av give J_e' tau_e = J_h' tau_h = -R_a' [eta_af; eta_av].
bool forceConsistent(const Scene& scene, const ContactMode& mode,
                     const HfvcAction& action);

// Enumerated modes that are both V-feasible and force-consistent.
std::vector<ContactMode> consistentModes(const Scene& scene,
                                         const HfvcAction& action);

// Reference to one scalar attribute of a scene.
struct ParamRef {
  enum class Kind { kX, kY, kNormalAngle, kMu, kArcLength };
  Kind kind = Kind::kX;
  int contact = 0;
  // Polyline for kArcLength, in hand-frame coordinates.
  std::vector<Eigen::Vector2d> path;

  double get(const Scene& scene) const;
  // Unit direction of the path segment under the contact (kArcLength only).
  Eigen::Vector2d pathTangent(const Scene& scene) const;
  void set(Scene& scene, double value) const;
  std::string name() const;
};

struct SweepAxis {
  ParamRef ref;
  double lo = 0;
  double hi = 0;
};

struct SweepSample {
  std::vector<double> values;
  double phi_g = 0;
  double phi_c = 0;
  double psi = 0;
  bool positive() const { return psi > 0; }
};

// Uniform random samples over the axes (seeded, ordered by sample index).
// Each sample rebuilds the scene and re-evaluates Phi_g of the mode and Phi_c
// of the fixed action against the competitors at that sample.
std::vector<SweepSample> sweepParameters(const Scene& scene, const ContactMode& mode,
                                         const HfvcAction& action,
                                         const std::vector<SweepAxis>& axes,
                                         int samples, std::uint64_t seed);

// Margins of a fixed action in a given scene (Phi_c is zero if the action
// crashes, the mode is V-infeasible or the force leaves its projection).
SweepSample evaluateAction(const Scene& scene, const ContactMode& mode,
                           const HfvcAction& action);

}  // namespace sgrasp
