#include "sgrasp/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "sgrasp/error.hpp"
#include "sgrasp/lp.hpp"
#include "sgrasp/parallel.hpp"
#include "sgrasp/stamping.hpp"

namespace sgrasp {

namespace {

struct PathPoint {
  Eigen::Vector2d point;
  Eigen::Vector2d direction;
};

PathPoint pointAt(const std::vector<Eigen::Vector2d>& path, double s) {
  if (path.size() < 2) throw Error(ErrorCode::kParse, "arc-length path needs two points");
  double acc = 0;
  for (size_t i = 0; i + 1 < path.size(); ++i) {
    const Eigen::Vector2d seg = path[i + 1] - path[i];
    const double len = seg.norm();
    const bool last = i + 2 == path.size();
    if (s <= acc + len || last) {
      const double u = std::clamp(s - acc, 0.0, len);
      return {path[i] + seg / len * u, seg / len};
    }
    acc += len;
  }
  return {path.back(), (path.back() - path[path.size() - 2]).normalized()};
}

double arcLengthOf(const std::vector<Eigen::Vector2d>& path, const Eigen::Vector2d& p) {
  double acc = 0, best_s = 0, best_d = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i + 1 < path.size(); ++i) {
    const Eigen::Vector2d seg = path[i + 1] - path[i];
    const double len = seg.norm();
    const double u = std::clamp((p - path[i]).dot(seg) / (len * len), 0.0, 1.0);
    const double d = (path[i] + u * seg - p).norm();
    if (d < best_d - 1e-15) {
      best_d = d;
      best_s = acc + u * len;
    }
    acc += len;
  }
  return best_s;
}

}  // namespace

double ParamRef::get(const Scene& scene) const {
  const Contact& c = scene.contacts.at(contact);
  switch (kind) {
    case Kind::kX: return c.point.x();
    case Kind::kY: return c.point.y();
    case Kind::kNormalAngle: return std::atan2(c.normal.y(), c.normal.x());
    case Kind::kMu: return c.mu;
    case Kind::kArcLength: return arcLengthOf(path, c.point);
  }
  return 0;
}

Eigen::Vector2d ParamRef::pathTangent(const Scene& scene) const {
  return pointAt(path, get(scene)).direction;
}

void ParamRef::set(Scene& scene, double value) const {
  Contact& c = scene.contacts.at(contact);
  switch (kind) {
    case Kind::kX: c.point.x() = value; break;
    case Kind::kY: c.point.y() = value; break;
    case Kind::kNormalAngle: c.normal = {std::cos(value), std::sin(value)}; break;
    case Kind::kMu: c.mu = value; break;
    case Kind::kArcLength: {
      const PathPoint pp = pointAt(path, value);
      c.point = pp.point;
      // The object lies to the left of the direction of travel.
      c.normal = {-pp.direction.y(), pp.direction.x()};
      break;
    }
  }
}

std::string ParamRef::name() const {
  static const char* kNames[] = {"x", "y", "normal_angle", "mu", "arc_length"};
  return std::string(kNames[static_cast<int>(kind)]) + "[" + std::to_string(contact) + "]";
}

bool forceConsistent(const Scene& scene, const ContactMode& mode,
                     const HfvcAction& action) {
  validateMode(scene, mode);
  // Use the raw active edges rather than the reduced cone generators so the
  // oracle does not depend on the cone module.
  std::vector<Eigen::Vector3d> env_rows, hand_rows;
  for (int i = 0; i < scene.numContacts(); ++i) {
    const Contact& c = scene.contacts[i];
    auto [left, right] = frictionEdges(c, scene.char_length, i);
    const double sign = jacobianSign(c.owner);
    auto& rows = c.owner == Owner::kHand ? hand_rows : env_rows;
    if (mode[i] == 'f' || mode[i] == 'r') rows.push_back(sign * left.direction);
    if (mode[i] == 'f' || mode[i] == 'l') rows.push_back(sign * right.direction);
  }
  const int ne = static_cast<int>(env_rows.size());
  const int nh = static_cast<int>(hand_rows.size());
  const int nv = action.n_av;
  lp::Problem p(ne + nh + nv);
  for (int i = 0; i < ne + nh; ++i) p.nonnegative[i] = true;
  const Eigen::MatrixXd Rav = action.velocityRows();
  const Eigen::Vector3d target =
      action.n_af > 0 ? Eigen::Vector3d(-action.forceRows().transpose() * action.eta_af)
                      : Eigen::Vector3d::Zero();
  for (int k = 0; k < 3; ++k) {
    Eigen::RowVectorXd balance = Eigen::RowVectorXd::Zero(p.numVars());
    Eigen::RowVectorXd command = Eigen::RowVectorXd::Zero(p.numVars());
    for (int i = 0; i < ne; ++i) {
      balance(i) = env_rows[i](k);
      command(i) = env_rows[i](k);
    }
    for (int i = 0; i < nh; ++i) balance(ne + i) = -hand_rows[i](k);
    for (int i = 0; i < nv; ++i) command(ne + nh + i) = Rav(i, k);
    p.addEquality(balance, 0.0);
    p.addEquality(command, target(k));
  }
  return lp::isFeasible(p);
}

std::vector<ContactMode> consistentModes(const Scene& scene,
                                         const HfvcAction& action) {
  const std::vector<ContactMode> modes = enumerateModes(scene);
  std::vector<char> keep(modes.size(), 0);
  parallelFor(static_cast<int>(modes.size()), [&](int k) {
    keep[k] = vFeasible(modeConstraints(scene, modes[k]), action) &&
              forceConsistent(scene, modes[k], action);
  });
  std::vector<ContactMode> out;
  for (size_t k = 0; k < modes.size(); ++k)
    if (keep[k]) out.push_back(modes[k]);
  return out;
}

SweepSample evaluateAction(const Scene& scene, const ContactMode& mode,
                           const HfvcAction& action) {
  SweepSample out;
  const ModeTable table = analyzeModes(scene);
  const ModeAnalysis* target = table.find(mode);
  if (!target) return out;
  out.phi_g = target->phi_g;
  if (action.n_af == 0 || !target->fFeasible()) return out;
  if (!crashSafe(table.c_af, action) || !vFeasible(target->constraints, action))
    return out;
  const Eigen::MatrixXd P = action.forceRows();
  const Eigen::VectorXd d = -action.eta_af.normalized();
  if (!project(target->c_m, P).contains(d)) return out;
  out.phi_c = std::numbers::pi;
  for (const auto& a : table.modes) {
    if (a.mode == mode || !a.intersects) continue;
    if (!vFeasible(a.constraints, action)) continue;
    out.phi_c = std::min(out.phi_c, angularDistance(d, project(a.c_m, P)));
  }
  out.psi = std::min(out.phi_g, out.phi_c);
  return out;
}

std::vector<SweepSample> sweepParameters(const Scene& scene, const ContactMode& mode,
                                         const HfvcAction& action,
                                         const std::vector<SweepAxis>& axes,
                                         int samples, std::uint64_t seed) {
  std::vector<SweepSample> out(static_cast<size_t>(std::max(0, samples)));
  std::mt19937_64 rng(seed);
  for (auto& s : out) {
    for (const auto& axis : axes) {
      std::uniform_real_distribution<double> u(axis.lo, axis.hi);
      s.values.push_back(u(rng));
    }
  }
  parallelFor(samples, [&](int k) {
    Scene sc = scene;
    for (size_t a = 0; a < axes.size(); ++a) axes[a].ref.set(sc, out[k].values[a]);
    std::vector<double> values = out[k].values;
    out[k] = evaluateAction(sc, mode, action);
    out[k].values = values;
  });
  return out;
}

}  // namespace sgrasp
