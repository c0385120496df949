#pragma once

// Reference scenes used by the examples, tests and data files.

#include <vector>

#include "sgrasp/geometry.hpp"

namespace sgrasp {

// A square object held down on a table by a flat palm. Contacts: table-left,
// table-right, hand-left, hand-right. The hand frame sits at the palm centre
// on the object's top face.
Scene cubePalmScene(double side = 0.1, double mu_hand = 1.2, double mu_env = 0.25);

// A block on a table pressed by a point finger on its top face. Contacts:
// table-right corner, table-left corner, finger. The hand frame sits at the
// fingertip; `offset` is the finger's distance from the block's left edge.
Scene fingerBlockScene(double width = 0.1, double height = 0.1,
                       double offset = 0.05, double mu_finger = 0.8,
                       double mu_env = 0.3);

// Boundary path for the finger of fingerBlockScene: up the right face, then
// right to left along the top face (hand-frame coordinates).
std::vector<Eigen::Vector2d> fingerBlockPath(double width = 0.1, double height = 0.1,
                                             double offset = 0.05);

}  // namespace sgrasp
