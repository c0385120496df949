#include "sgrasp/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "sgrasp/error.hpp"
#include "sgrasp/stamping.hpp"

namespace sgrasp {

namespace {

constexpr double kMatchTol = 1e-7;

EdgeSide sideOf(int id) { return id % 2 == 0 ? EdgeSide::kLeft : EdgeSide::kRight; }

// Signed, unnormalized screw of an edge id: the Jacobian row before scaling.
Eigen::Vector3d rawScrew(const Scene& scene, int id) {
  const Contact& c = scene.contacts.at(id / 2);
  return jacobianSign(c.owner) *
         edgeScrew<double>(c.point, c.normal, c.mu, scene.char_length, sideOf(id));
}

Eigen::Vector3d unitScrew(const Scene& scene, int id) {
  return rawScrew(scene, id).normalized();
}

// Pairs of generator labels spanning planes of `cone` that contain e.
std::vector<std::pair<int, int>> planesThrough(const Pcc& cone,
                                               const Eigen::Vector3d& e) {
  std::vector<std::pair<int, int>> out;
  const auto& labels = cone.labels();
  if (cone.rank() == 2 && cone.isPointed()) {
    out.emplace_back(labels[0], labels[1]);
  } else if (cone.rank() == 3 && cone.isPointed()) {
    for (const auto& f : cone.facetList())
      if (std::abs(f.normal.dot(e)) < kMatchTol)
        out.emplace_back(labels[f.support[0]], labels[f.support[1]]);
  }
  return out;
}

Eigen::Matrix3d tangentProjector(const Eigen::Vector3d& u) {
  return Eigen::Matrix3d::Identity() - u * u.transpose();
}

// d raw / d q for the unsigned screw of edge `id` under parameter `ref`.
Eigen::Vector3d rawDerivative(const Scene& scene, int id, const ParamRef& ref) {
  const Contact& c = scene.contacts.at(id / 2);
  const double L = scene.char_length;
  const double sgn = sideOf(id) == EdgeSide::kLeft ? 1.0 : -1.0;
  const Eigen::Vector2d n = c.normal, t = tangentOf<double>(n);
  const Eigen::Vector2d e = n + sgn * c.mu * t;
  auto screwOf = [&](const Eigen::Vector2d& de) {
    return Eigen::Vector3d(de.x(), de.y(), cross2<double>(c.point, de) / L);
  };
  switch (ref.kind) {
    case ParamRef::Kind::kX: return {0, 0, e.y() / L};
    case ParamRef::Kind::kY: return {0, 0, -e.x() / L};
    case ParamRef::Kind::kNormalAngle: return screwOf(t - sgn * c.mu * n);
    case ParamRef::Kind::kMu: return screwOf(sgn * t);
    case ParamRef::Kind::kArcLength: {
      const Eigen::Vector2d d = ref.pathTangent(scene);
      return {0, 0, cross2<double>(d, e) / L};
    }
  }
  return Eigen::Vector3d::Zero();
}

}  // namespace

const char* ToString(MarginCase c) {
  switch (c) {
    case MarginCase::kFacet1dEdgeGenerator: return "1d-facet/edge-generator";
    case MarginCase::kFacet1dEdgeIntersection: return "1d-facet/edge-intersection";
    case MarginCase::kFacet2dEdgeGenerator: return "2d-facet/edge-generator";
    case MarginCase::kFacet2dEdgeIntersection: return "2d-facet/edge-intersection";
  }
  return "unknown";
}

std::vector<int> MarginScrews::activeScrews() const {
  std::vector<int> ids = facet;
  ids.insert(ids.end(), edge.begin(), edge.end());
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids;
}

MarginScrews marginValueAndScrews(const Scene& scene, const ContactMode& mode) {
  const ModeCones cones = modeCones(scene, mode);
  const MarginDetail md = geometricMarginDetail(cones.env, cones.hand);
  if (md.value <= kMarginEps || md.sigma.flagged || md.sigma.facet < 0)
    throw Error(ErrorCode::kDegenerateMargin,
                "mode " + mode + " has no positive geometric margin");
  MarginScrews out;
  out.phi_g = md.value;
  out.cone = md.cone;
  const Pcc& outer = md.cone == 0 ? cones.env : cones.hand;
  const Facet& f = outer.facetList()[md.sigma.facet];
  const Eigen::Vector3d e = md.intersection.embedded()[md.sigma.edge];

  bool facet_1d = f.one_dimensional;
  if (facet_1d) {
    out.facet = {outer.labels()[f.support[0]]};
  } else {
    const int a = outer.labels()[f.support[0]], b = outer.labels()[f.support[1]];
    out.facet = {a, b};
    const Eigen::Vector3d u = unitScrew(scene, a).cross(unitScrew(scene, b));
    out.facet_sign = u.dot(f.normal) >= 0 ? 1 : -1;
  }

  bool edge_generator = false;
  for (const Pcc* c : {&cones.env, &cones.hand}) {
    for (int i = 0; i < c->numGenerators() && !edge_generator; ++i) {
      if ((c->embedded()[i] - e).norm() < kMatchTol) {
        out.edge = {c->labels()[i]};
        edge_generator = true;
      }
    }
    if (edge_generator) break;
  }
  if (!edge_generator) {
    bool found = false;
    for (const auto& [c1, c2] : planesThrough(cones.env, e)) {
      for (const auto& [c3, c4] : planesThrough(cones.hand, e)) {
        const Eigen::Vector3d w =
            unitScrew(scene, c1).cross(unitScrew(scene, c2))
                .cross(unitScrew(scene, c3).cross(unitScrew(scene, c4)));
        if (w.norm() < 1e-12) continue;
        out.edge = {c1, c2, c3, c4};
        out.edge_sign = w.dot(e) >= 0 ? 1 : -1;
        found = true;
        break;
      }
      if (found) break;
    }
    if (!found)
      throw Error(ErrorCode::kDegenerateMargin,
                  "cannot express the bottleneck edge through contact screws");
  }
  if (facet_1d)
    out.kind = edge_generator ? MarginCase::kFacet1dEdgeGenerator
                              : MarginCase::kFacet1dEdgeIntersection;
  else
    out.kind = edge_generator ? MarginCase::kFacet2dEdgeGenerator
                              : MarginCase::kFacet2dEdgeIntersection;
  return out;
}

std::map<int, Eigen::Vector3d> screwGradients(const Scene& scene,
                                              const MarginScrews& ms) {
  std::map<int, Eigen::Vector3d> grad;
  auto C = [&](int id) { return unitScrew(scene, id); };
  auto add = [&](int id, const Eigen::Vector3d& g) {
    auto it = grad.find(id);
    if (it == grad.end()) grad.emplace(id, g);
    else it->second += g;
  };

  // Edge as a function of its screws.
  Eigen::Vector3d e;
  Eigen::Vector3d w, a, b;
  if (ms.edge.size() == 1) {
    e = C(ms.edge[0]);
  } else {
    a = C(ms.edge[0]).cross(C(ms.edge[1]));
    b = C(ms.edge[2]).cross(C(ms.edge[3]));
    w = a.cross(b);
    e = ms.edge_sign * w.normalized();
  }

  Eigen::Vector3d g_e;
  if (ms.facet.size() == 1) {
    const Eigen::Vector3d ci = C(ms.facet[0]);
    const double x = std::clamp(ci.dot(e), -1.0, 1.0);
    const double s = std::sqrt(std::max(1e-300, 1 - x * x));
    add(ms.facet[0], -e / s);
    g_e = -ci / s;
  } else {
    const Eigen::Vector3d ci = C(ms.facet[0]), cj = C(ms.facet[1]);
    const Eigen::Vector3d u = ci.cross(cj);
    const Eigen::Vector3d uhat = u.normalized();
    const Eigen::Vector3d n = ms.facet_sign * uhat;
    const double x = std::clamp(n.dot(e), -1.0, 1.0);
    const double c = std::sqrt(std::max(1e-300, 1 - x * x));
    g_e = n / c;
    const Eigen::Vector3d g_n = e / c;
    const Eigen::Vector3d g_u = ms.facet_sign * tangentProjector(uhat) * g_n / u.norm();
    add(ms.facet[0], cj.cross(g_u));
    add(ms.facet[1], g_u.cross(ci));
  }

  if (ms.edge.size() == 1) {
    add(ms.edge[0], g_e);
  } else {
    const Eigen::Vector3d what = w.normalized();
    const Eigen::Vector3d g_w = ms.edge_sign * tangentProjector(what) * g_e / w.norm();
    const Eigen::Vector3d g_a = b.cross(g_w);
    const Eigen::Vector3d g_b = g_w.cross(a);
    add(ms.edge[0], C(ms.edge[1]).cross(g_a));
    add(ms.edge[1], g_a.cross(C(ms.edge[0])));
    add(ms.edge[2], C(ms.edge[3]).cross(g_b));
    add(ms.edge[3], g_b.cross(C(ms.edge[2])));
  }

  // Only rotations of a unit screw are meaningful: drop the scaling part.
  for (auto& [id, g] : grad) {
    const Eigen::Vector3d c = C(id);
    g -= g.dot(c) * c;
  }
  return grad;
}

Eigen::VectorXd marginGradient(const Scene& scene, const ContactMode& mode,
                               const ParamSpec& params) {
  const MarginScrews ms = marginValueAndScrews(scene, mode);
  const auto grad = screwGradients(scene, ms);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(params.entries.size()));
  for (size_t k = 0; k < params.entries.size(); ++k) {
    const ParamRef& ref = params.entries[k].ref;
    for (const auto& [id, g] : grad) {
      if (id / 2 != ref.contact) continue;
      const Eigen::Vector3d raw = rawScrew(scene, id);
      const Eigen::Vector3d c = raw.normalized();
      const double sign = jacobianSign(scene.contacts[id / 2].owner);
      const Eigen::Vector3d dc =
          tangentProjector(c) * (sign * rawDerivative(scene, id, ref)) / raw.norm();
      out(static_cast<Eigen::Index>(k)) += g.dot(dc);
    }
  }
  return out;
}

OptTrace optimizeGeometry(const Scene& scene, const ContactMode& mode,
                          const ParamSpec& params) {
  if (!(params.step > 0)) throw Error(ErrorCode::kParse, "step length must be positive");
  OptTrace trace;
  trace.final_scene = scene;
  std::vector<double> p;
  for (const auto& e : params.entries) {
    if (!(e.lo <= e.hi) || !std::isfinite(e.lo) || !std::isfinite(e.hi))
      throw Error(ErrorCode::kParse, "parameter bounds must be finite with lo <= hi");
    p.push_back(e.ref.get(scene));
  }
  MarginScrews ms;
  try {
    ms = marginValueAndScrews(scene, mode);
  } catch (const Error& err) {
    if (err.code() != ErrorCode::kDegenerateMargin) throw;
    throw Error(ErrorCode::kDegenerateStart,
                "initial geometry has zero margin for mode " + mode);
  }
  Scene current = scene;
  for (int it = 0;; ++it) {
    OptStep step;
    step.iteration = it;
    step.params = p;
    step.phi_g = ms.phi_g;
    step.kind = ms.kind;
    step.screws = ms.activeScrews();
    const Eigen::VectorXd g = marginGradient(current, mode, params);
    step.gradient_norm = g.size() ? g.norm() : 0.0;
    trace.steps.push_back(step);
    if (it == params.iterations) {
      trace.stop_reason = "iterations";
      break;
    }
    if (g.size() == 0 || g.cwiseAbs().maxCoeff() < 1e-8) {
      trace.stop_reason = "converged";
      break;
    }
    for (size_t k = 0; k < p.size(); ++k) {
      const auto& e = params.entries[k];
      p[k] = std::clamp(p[k] + params.step * g(static_cast<Eigen::Index>(k)), e.lo, e.hi);
      e.ref.set(current, p[k]);
    }
    try {
      ms = marginValueAndScrews(current, mode);
    } catch (const Error& err) {
      if (err.code() != ErrorCode::kDegenerateMargin) throw;
      OptStep last;
      last.iteration = it + 1;
      last.params = p;
      trace.steps.push_back(last);
      trace.stop_reason = "degenerate";
      break;
    }
  }
  trace.final_scene = current;
  trace.final_params = p;
  return trace;
}

}  // namespace sgrasp
