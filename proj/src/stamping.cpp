#include "sgrasp/stamping.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sgrasp/error.hpp"
#include "sgrasp/parallel.hpp"

namespace sgrasp {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2 * std::numbers::pi;
constexpr double kArcTol = 1e-12;
// Competitor arcs are widened by this much so boundary contact counts as
// overlap.
constexpr double kCoverTol = 1e-9;

double wrapAngle(double a) {
  a = std::fmod(a, kTwoPi);
  return a < 0 ? a + kTwoPi : a;
}

double angleOf(const Eigen::Vector3d& v) { return wrapAngle(std::atan2(v.y(), v.x())); }

double distanceToArc(double theta, const Arc& arc) {
  const double d = wrapAngle(theta - arc.start);
  if (d <= arc.width) return 0;
  return std::min(d - arc.width, kTwoPi - d);
}

ForceChoice pickOnCircle(const Pcc& goal, const std::vector<Pcc>& others) {
  const std::vector<Arc> goal_arcs = coneArcs(goal);
  std::vector<Arc> other_arcs;
  for (const auto& o : others) {
    const auto arcs = coneArcs(o);
    other_arcs.insert(other_arcs.end(), arcs.begin(), arcs.end());
  }
  auto finish = [&](double theta) {
    ForceChoice c;
    c.direction = Eigen::Vector2d(std::cos(theta), std::sin(theta));
    c.phi_c = kPi;
    for (const auto& a : other_arcs) c.phi_c = std::min(c.phi_c, distanceToArc(theta, a));
    return c;
  };

  // Goal arcs are either one arc or two opposite rays; take the best gap over all.
  double best_len = -1, best_theta = 0;
  for (Arc g : goal_arcs) {
    if (g.width >= kTwoPi - kArcTol && !other_arcs.empty()) {
      // Start the full circle at the end of a competitor so no gap wraps.
      g.start = wrapAngle(other_arcs.front().start + other_arcs.front().width);
    }
    // Covered intervals in coordinates s in [0, width] measured from g.start.
    std::vector<std::pair<double, double>> covered;
    for (const auto& o : other_arcs) {
      const double width = std::min(kTwoPi, o.width + 2 * kCoverTol);
      const double c = wrapAngle(o.start - kCoverTol - g.start);
      for (double shift : {c - kTwoPi, c}) {
        const double lo = std::max(0.0, shift), hi = std::min(g.width, shift + width);
        if (hi >= lo) covered.emplace_back(lo, hi);
      }
    }
    std::sort(covered.begin(), covered.end());
    if (g.width <= kArcTol) {
      if (covered.empty() && best_len < 0) {
        best_len = 0;
        best_theta = g.start;
      }
      continue;
    }
    double cursor = 0;
    auto consider = [&](double lo, double hi) {
      if (hi - lo > kArcTol && hi - lo > best_len) {
        best_len = hi - lo;
        best_theta = g.start + 0.5 * (lo + hi);
      }
    };
    for (const auto& [lo, hi] : covered) {
      consider(cursor, lo);
      cursor = std::max(cursor, hi);
    }
    consider(cursor, g.width);
  }
  if (best_len < 0)
    throw Error(ErrorCode::kIndistinguishable,
                "goal projection is covered by other feasible modes");
  return finish(wrapAngle(best_theta));
}

ForceChoice pickOnLine(const Pcc& goal, const std::vector<Pcc>& others) {
  for (double s : {1.0, -1.0}) {
    const Eigen::VectorXd d = Eigen::VectorXd::Constant(1, s);
    if (!goal.contains(d)) continue;
    bool shared = false;
    for (const auto& o : others) shared = shared || o.contains(d);
    if (shared) continue;
    return {d, kPi};
  }
  throw Error(ErrorCode::kIndistinguishable,
              "goal projection is covered by other feasible modes");
}

}  // namespace

MarginDetail geometricMarginDetail(const Pcc& env, const Pcc& hand) {
  MarginDetail out;
  if (env.isZero() || hand.isZero()) return out;
  out.intersection = intersect(env, hand);
  if (out.intersection.isZero()) return out;
  const SigmaDetail se = sigmaDetail(env, out.intersection);
  const SigmaDetail sh = sigmaDetail(hand, out.intersection);
  if (sh.value < se.value) {
    out.value = sh.value;
    out.cone = 1;
    out.sigma = sh;
  } else {
    out.value = se.value;
    out.cone = 0;
    out.sigma = se;
  }
  return out;
}

const ModeAnalysis* ModeTable::find(const ContactMode& mode) const {
  auto it = std::lower_bound(
      modes.begin(), modes.end(), mode,
      [](const ModeAnalysis& a, const ContactMode& m) { return a.mode < m; });
  return it != modes.end() && it->mode == mode ? &*it : nullptr;
}

ModeTable analyzeModes(const Scene& scene) {
  scene.validate();
  ModeTable table;
  const std::vector<ContactMode> modes = enumerateModes(scene);
  table.modes.resize(modes.size());
  parallelFor(static_cast<int>(modes.size()), [&](int k) {
    ModeAnalysis& a = table.modes[k];
    a.mode = modes[k];
    a.constraints = modeConstraints(scene, a.mode);
    a.cones = modeCones(scene, a.mode);
    const MarginDetail md = geometricMarginDetail(a.cones.env, a.cones.hand);
    a.c_m = md.intersection;
    a.intersects = !a.c_m.isZero();
    a.phi_g = md.value;
  });
  table.c_af = allFixedCone(scene);
  return table;
}

std::vector<Arc> coneArcs(const Pcc& cone) {
  if (cone.isZero()) return {};
  if (cone.isFull()) return {Arc{0, kTwoPi}};
  const auto& g = cone.embedded();
  if (cone.rank() == 1) {
    std::vector<Arc> arcs;
    for (const auto& v : g) arcs.push_back({angleOf(v), 0});
    return arcs;
  }
  if (!cone.isPointed()) {
    const Eigen::Vector3d m = cone.facetList().front().normal;
    return {Arc{wrapAngle(angleOf(m) - kPi / 2), kPi}};
  }
  const double a0 = angleOf(g[0]), a1 = angleOf(g[1]);
  const double w = wrapAngle(a1 - a0);
  if (w > kPi) return {Arc{a1, kTwoPi - w}};
  return {Arc{a0, w}};
}

double angularDistance(const Eigen::VectorXd& d, const Pcc& cone) {
  if (cone.isZero()) return kPi;
  if (cone.dim() == 1) return cone.contains(d) ? 0.0 : kPi;
  const double theta = wrapAngle(std::atan2(d(1), d(0)));
  double best = kPi;
  for (const auto& a : coneArcs(cone)) best = std::min(best, distanceToArc(theta, a));
  return best;
}

ForceChoice pickForceControl(const Pcc& goal, const std::vector<Pcc>& others) {
  if (goal.isZero())
    throw Error(ErrorCode::kIndistinguishable, "goal projection is the zero cone");
  if (goal.dim() == 1) return pickOnLine(goal, others);
  return pickOnCircle(goal, others);
}

StampingResult wrenchStamp(const Scene& scene, const ContactMode& mode,
                           const GoalSpec& goal) {
  validateMode(scene, mode);
  return wrenchStamp(scene, analyzeModes(scene), mode, goal);
}

StampingResult wrenchStamp(const Scene& scene, const ModeTable& table,
                           const ContactMode& mode, const GoalSpec& goal) {
  validateMode(scene, mode);
  const ModeAnalysis* target = table.find(mode);
  if (!target)
    throw Error(ErrorCode::kFInfeasibleGoal,
                "mode " + mode + " is not kinematically feasible");

  StampingResult res;
  res.mode = mode;
  res.k_f = scene.nominal_force;
  res.action = velocityDecomposition(target->constraints.N, goal, scene.char_length);
  if (!crashSafe(table.c_af, res.action))
    throw Error(ErrorCode::kCrash,
                "velocity command presses into a statically balanced direction");

  const bool all_separate = mode == uniformMode(scene, 's');
  if (!all_separate && !target->fFeasible())
    throw Error(ErrorCode::kFInfeasibleGoal,
                "mode " + mode + " has no robust force balance");
  if (!vFeasible(target->constraints, res.action))
    throw Error(ErrorCode::kGoalInfeasible,
                "mode " + mode + " cannot follow its own velocity command");

  std::vector<const ModeAnalysis*> competitors;
  for (const auto& a : table.modes) {
    ModeDisposition d{a.mode, ""};
    if (a.mode == mode) {
      d.tag = "goal";
    } else if (!a.intersects) {
      d.tag = "f-infeasible";
    } else if (!vFeasible(a.constraints, res.action)) {
      d.tag = "v-infeasible";
    } else {
      d.tag = "competitor";
      competitors.push_back(&a);
      res.competitors.push_back(a.mode);
    }
    res.ledger.push_back(d);
  }

  if (all_separate) {
    if (!competitors.empty())
      throw Error(ErrorCode::kIndistinguishable,
                  "other modes can hold the zero force command");
    res.phi_g = kPi / 2;
    res.phi_c = kPi;
    res.psi = kPi / 2;
    res.force_direction = Eigen::VectorXd::Zero(res.action.n_af);
    return res;
  }
  if (res.action.n_af == 0)
    throw Error(ErrorCode::kIndistinguishable,
                "action has no force-controlled direction");

  const Eigen::MatrixXd P = res.action.forceRows();
  res.goal_projection = project(target->c_m, P);
  for (const auto* c : competitors)
    res.competitor_projections.push_back(project(c->c_m, P));
  const ForceChoice choice =
      pickForceControl(res.goal_projection, res.competitor_projections);
  res.force_direction = choice.direction;
  res.action.eta_af = -res.k_f * choice.direction;
  res.phi_g = target->phi_g;
  res.phi_c = choice.phi_c;
  res.psi = std::min(res.phi_g, res.phi_c);
  return res;
}

}  // namespace sgrasp
