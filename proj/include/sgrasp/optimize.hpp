#pragma once

// Gradient ascent of the geometric margin over contact geometry.
//
// The margin is written as an explicit function of the few contact screws
// that currently bound it: a facet (one or two screws) of the bottleneck cone
// and an edge of the intersection (a screw, or the meet of two planes spanned
// by screw pairs). Differentiating that expression gives an exact gradient as
// long as the bottleneck screws do not change.

#include <map>
#include <string>
#include <vector>

#include "sgrasp/modes.hpp"
#include "sgrasp/verify.hpp"

namespace sgrasp {

enum class MarginCase {
  kFacet1dEdgeGenerator,
  kFacet1dEdgeIntersection,
  kFacet2dEdgeGenerator,
  kFacet2dEdgeIntersection,
};

const char* ToString(MarginCase c);

struct MarginScrews {
  double phi_g = 0;
  MarginCase kind = MarginCase::kFacet2dEdgeGenerator;
  // Edge ids (2 * contact + side). facet: one or two ids; edge: one id for a
  // generator edge, four ids (C1, C2, C3, C4) for an intersection edge where
  // E = s * normalize((C1 x C2) x (C3 x C4)).
  std::vector<int> facet;
  std::vector<int> edge;
  int facet_sign = 1;  // facet normal = facet_sign * normalize(Ci x Cj)
  int edge_sign = 1;
  int cone = 0;        // 0 environment, 1 hand

  std::vector<int> activeScrews() const;
};

// Throws kDegenerateMargin when Phi_g is zero.
MarginScrews marginValueAndScrews(const Scene& scene, const ContactMode& mode);

// dPhi_g / dC for every active screw, already projected onto the screw's
// tangent plane. Keyed by edge id.
std::map<int, Eigen::Vector3d> screwGradients(const Scene& scene,
                                              const MarginScrews& ms);

struct ParamEntry {
  ParamRef ref;
  double lo = 0;
  double hi = 0;
};

struct ParamSpec {
  std::vector<ParamEntry> entries;
  double step = 1e-3;
  int iterations = 200;
};

// dPhi_g / dp for each entry. Throws kDegenerateMargin when Phi_g is zero.
Eigen::VectorXd marginGradient(const Scene& scene, const ContactMode& mode,
                               const ParamSpec& params);

struct OptStep {
  int iteration = 0;
  std::vector<double> params;
  double phi_g = 0;
  MarginCase kind = MarginCase::kFacet2dEdgeGenerator;
  std::vector<int> screws;
  double gradient_norm = 0;
};

struct OptTrace {
  std::vector<OptStep> steps;
  Scene final_scene;
  std::vector<double> final_params;
  std::string stop_reason;  // converged | iterations | degenerate
};

// Fixed-step ascent with box clamping. Throws kDegenerateStart when the
// initial margin is zero.
OptTrace optimizeGeometry(const Scene& scene, const ContactMode& mode,
                          const ParamSpec& params);

}  // namespace sgrasp
