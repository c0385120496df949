#pragma once

// Contact modes: one letter per contact from {s, f, l, r}.
//
//   s  separation, no wrench
//   f  fixed (sticking), both friction edges
//   l  object slides along +t relative to the other body, right edge only
//   r  object slides along -t, left edge only

#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "sgrasp/cone.hpp"
#include "sgrasp/geometry.hpp"

namespace sgrasp {

using ContactMode = std::string;

inline constexpr int kMaxEnumeratedContacts = 8;
inline constexpr double kStrictSlack = 1e-6;

// Throws Error(kParse) if the string has the wrong length or letters.
void validateMode(const Scene& scene, const ContactMode& mode);
ContactMode uniformMode(const Scene& scene, char letter);

struct ModeConstraints {
  Eigen::MatrixXd N;  // N V = 0
  Eigen::MatrixXd M;  // M V <= 0
};

ModeConstraints modeConstraints(const Scene& scene, const ContactMode& mode);

// Kinematic realizability: some V satisfies N V = 0 with every M row strictly
// negative (margin >= slack after normalizing |V|_1 <= 1).
bool kinematicallyFeasible(const ModeConstraints& mc, double slack = kStrictSlack);

// All kinematically feasible modes in lexicographic order. The all-fixed mode
// is always included. Throws Error(kTooManyContacts) above 8 contacts.
std::vector<ContactMode> enumerateModes(const Scene& scene,
                                        double slack = kStrictSlack);

struct ModeCones {
  Pcc env;
  Pcc hand;
};

// Cones of the active friction edges. Generator labels are edge ids,
// 2 * contact + (0 for the left edge, 1 for the right edge).
ModeCones modeCones(const Scene& scene, const ContactMode& mode);

inline int edgeId(int contact, EdgeSide side) {
  return 2 * contact + (side == EdgeSide::kLeft ? 0 : 1);
}

// C_AF: intersection of the all-fixed environment and hand cones.
Pcc allFixedCone(const Scene& scene);

}  // namespace sgrasp
