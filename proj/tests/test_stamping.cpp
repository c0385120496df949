#include <cmath>
#include <map>
#include <numbers>

#include "doctest.h"
#include "sgrasp/error.hpp"
#include "sgrasp/scenes.hpp"
#include "sgrasp/stamping.hpp"
#include "sgrasp/verify.hpp"
#include "support.hpp"

using namespace sgrasp;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kDeg = kPi / 180;

Pcc sector(double from_deg, double to_deg) {
  Eigen::MatrixXd g(2, 2);
  g << std::cos(from_deg * kDeg), std::sin(from_deg * kDeg), std::cos(to_deg * kDeg),
      std::sin(to_deg * kDeg);
  return Pcc::fromGenerators(g);
}

GoalSpec rotateObject() {
  GoalSpec g;
  g.G = Eigen::MatrixXd::Zero(1, 6);
  g.G(0, 2) = 1;
  g.b = Eigen::VectorXd::Constant(1, -0.1);
  return g;
}

ErrorCode codeOf(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return ErrorCode::kParse;
}

}  // namespace

TEST_CASE("geometric margin examples") {
  const Pcc ray = Pcc::fromGenerators(Eigen::RowVector3d(0, 1, 0));
  CHECK(geometricMargin(ray, ray) == 0.0);
  // Sectors [0, 90] and [45, 135] deg meet in [45, 90]; the 90 deg edge sits
  // 45 deg inside each outer sector, so the min-max depth is 45 deg.
  CHECK(geometricMargin(sector(0, 90), sector(45, 135)) == doctest::Approx(kPi / 4));
  CHECK(geometricMargin(sector(0, 30), sector(60, 90)) == 0.0);
}

TEST_CASE("cube-palm margins match the independent section oracle") {
  // Frozen from tests/oracle/margins.py (planar cross-section hulls).
  const std::map<ContactMode, double> expected = {
      {"ffff", 0.474990006917}, {"fffs", 0.145996695125}, {"ffsf", 0.145996695125},
      {"fsff", 0.212412213739}, {"fsfs", 0.266252049151}, {"llff", 0.610641392436},
      {"llsf", 0.177381361347}, {"lsff", 0.0},            {"rrff", 0.610641392436},
      {"rrfs", 0.177381361347}, {"sfff", 0.212412213739}, {"sfsf", 0.266252049151},
      {"srff", 0.0},
  };
  const ModeTable table = analyzeModes(cubePalmScene());
  int intersecting = 0, positive = 0;
  for (const auto& m : table.modes) {
    if (!m.intersects) {
      CHECK_MESSAGE(expected.count(m.mode) == 0, m.mode);
      continue;
    }
    ++intersecting;
    positive += m.phi_g > 0;
    REQUIRE_MESSAGE(expected.count(m.mode) == 1, m.mode);
    CHECK_MESSAGE(m.phi_g == doctest::Approx(expected.at(m.mode)).epsilon(1e-9), m.mode);
  }
  CHECK(intersecting == 13);
  CHECK(positive == 11);
}

TEST_CASE("finger-block margins match the independent section oracle") {
  CHECK(analyzeModes(fingerBlockScene()).find("llf")->phi_g ==
        doctest::Approx(0.189272231908).epsilon(1e-9));
  CHECK(analyzeModes(fingerBlockScene(0.1, 0.1, 0.02)).find("sff")->phi_g ==
        doctest::Approx(0.133937235331).epsilon(1e-9));
}

TEST_CASE("pick force control on the circle") {
  const ForceChoice alone = pickForceControl(sector(0, 90), {});
  CHECK(std::atan2(alone.direction(1), alone.direction(0)) == doctest::Approx(kPi / 4));
  CHECK(alone.phi_c == doctest::Approx(kPi));

  const ForceChoice split = pickForceControl(sector(0, 90), {sector(60, 180)});
  CHECK(std::atan2(split.direction(1), split.direction(0)) == doctest::Approx(kPi / 6));
  CHECK(split.phi_c == doctest::Approx(kPi / 6));

  CHECK(codeOf([] { pickForceControl(sector(0, 90), {sector(-10, 100)}); }) ==
        ErrorCode::kIndistinguishable);
  CHECK(codeOf([] { pickForceControl(sector(0, 90), {sector(0, 90)}); }) ==
        ErrorCode::kIndistinguishable);
  CHECK(codeOf([] { pickForceControl(Pcc::zero(2), {}); }) == ErrorCode::kIndistinguishable);
}

TEST_CASE("pick force control on the line") {
  const Pcc plus = Pcc::fromGenerators(Eigen::MatrixXd::Constant(1, 1, 1.0));
  const Pcc minus = Pcc::fromGenerators(Eigen::MatrixXd::Constant(1, 1, -1.0));
  Eigen::MatrixXd both(2, 1);
  both << 1, -1;
  const Pcc line = Pcc::fromGenerators(both);

  const ForceChoice a = pickForceControl(plus, {minus});
  CHECK(a.direction(0) == 1.0);
  CHECK(a.phi_c == doctest::Approx(kPi));
  const ForceChoice b = pickForceControl(line, {plus});
  CHECK(b.direction(0) == -1.0);
  CHECK(codeOf([&] { pickForceControl(plus, {line}); }) == ErrorCode::kIndistinguishable);
}

TEST_CASE("removing a competitor never lowers the control margin") {
  test::Rng rng(61);
  for (int trial = 0; trial < 300; ++trial) {
    const double g0 = rng.uniform(-180, 180);
    const Pcc goal = sector(g0, g0 + rng.uniform(5, 170));
    std::vector<Pcc> others;
    for (int k = 0; k < 1 + rng.index(3); ++k) {
      const double o0 = rng.uniform(-180, 180);
      others.push_back(sector(o0, o0 + rng.uniform(1, 120)));
    }
    double full = -1;
    try {
      full = pickForceControl(goal, others).phi_c;
    } catch (const Error&) {
      continue;
    }
    for (size_t drop = 0; drop < others.size(); ++drop) {
      std::vector<Pcc> fewer = others;
      fewer.erase(fewer.begin() + static_cast<long>(drop));
      CHECK(pickForceControl(goal, fewer).phi_c >= full - 1e-12);
    }
  }
}

TEST_CASE("stage-1 pivot stamping on the cube-palm scene") {
  const Scene s = cubePalmScene();
  const StampingResult r = wrenchStamp(s, "sfff", rotateObject());
  CHECK(r.psi > 0);
  CHECK(r.psi == std::min(r.phi_g, r.phi_c));
  CHECK(r.phi_g == doctest::Approx(0.212412213739).epsilon(1e-9));
  CHECK(r.action.n_af == 2);
  CHECK(r.action.eta_af.norm() == doctest::Approx(s.nominal_force));
  // The chosen force lies in the sfff projection and in no competitor's.
  CHECK(r.goal_projection.contains(r.force_direction));
  for (const auto& p : r.competitor_projections) CHECK_FALSE(p.contains(r.force_direction, 1e-9));
  CHECK(r.disturbance() == doctest::Approx(s.nominal_force * r.psi));
  CHECK(consistentModes(s, r.action) == std::vector<ContactMode>{"sfff"});
  size_t tagged = 0;
  for (const auto& d : r.ledger) tagged += !d.tag.empty();
  CHECK(tagged == analyzeModes(s).modes.size());
}

TEST_CASE("stamping failures") {
  const Scene s = cubePalmScene();
  GoalSpec down;
  down.G = Eigen::MatrixXd::Zero(1, 6);
  down.G(0, 4) = 1;
  down.b = Eigen::VectorXd::Constant(1, -0.1);
  CHECK(codeOf([&] { wrenchStamp(s, "ffss", down); }) == ErrorCode::kCrash);
  CHECK(codeOf([&] { wrenchStamp(s, "lsff", rotateObject()); }) == ErrorCode::kFInfeasibleGoal);
  CHECK(codeOf([&] { wrenchStamp(s, "lrff", rotateObject()); }) == ErrorCode::kFInfeasibleGoal);
  CHECK(codeOf([&] { wrenchStamp(s, "ffff", rotateObject()); }) == ErrorCode::kGoalInfeasible);
  CHECK(codeOf([&] { wrenchStamp(s, "fff", rotateObject()); }) == ErrorCode::kParse);
}

TEST_CASE("all-separate mode with the hand retracting") {
  const Scene s = cubePalmScene();
  GoalSpec up;
  up.G = Eigen::MatrixXd::Zero(3, 6);
  up.G.rightCols(3).setIdentity();
  up.b = Eigen::Vector3d(0, 0.1, 0);
  const StampingResult r = wrenchStamp(s, "ssss", up);
  CHECK(r.competitors.empty());
  CHECK(r.phi_c == doctest::Approx(kPi));
  CHECK(r.psi > 0);
}

TEST_CASE("stamping is scale invariant") {
  const Scene s = cubePalmScene();
  Scene big = s;
  const double k = 3.7;
  big.char_length *= k;
  for (auto& c : big.contacts) c.point *= k;
  GoalSpec g = rotateObject();
  const StampingResult a = wrenchStamp(s, "sfff", g);
  const StampingResult b = wrenchStamp(big, "sfff", g);
  CHECK(a.phi_g == doctest::Approx(b.phi_g).epsilon(1e-9));
  CHECK(a.phi_c == doctest::Approx(b.phi_c).epsilon(1e-9));
  CHECK(a.psi == doctest::Approx(b.psi).epsilon(1e-9));
}

TEST_CASE("stamping is deterministic") {
  const Scene s = cubePalmScene();
  const StampingResult a = wrenchStamp(s, "sfff", rotateObject());
  const StampingResult b = wrenchStamp(s, "sfff", rotateObject());
  CHECK(a.psi == b.psi);
  CHECK(a.action.R_a == b.action.R_a);
  CHECK(a.action.eta_af == b.action.eta_af);
  CHECK(a.competitors == b.competitors);
}

TEST_CASE("stamped actions are held only by their own mode") {
  test::Rng rng(62);
  int stamped = 0;
  for (int trial = 0; trial < 3000 && stamped < 60; ++trial) {
    const Scene s = rng.scene(2 + rng.index(2));
    const ModeTable table = analyzeModes(s);
    std::vector<const ModeAnalysis*> candidates;
    for (const auto& m : table.modes)
      if (m.fFeasible()) candidates.push_back(&m);
    if (candidates.empty()) continue;
    const ModeAnalysis& m = *candidates[rng.index(static_cast<int>(candidates.size()))];
    // A goal satisfied by some strictly consistent velocity of the mode.
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m.constraints.N, Eigen::ComputeFullV);
    int rank = 0;
    for (int i = 0; i < svd.singularValues().size(); ++i) rank += svd.singularValues()(i) > 1e-9;
    const Eigen::MatrixXd u = svd.matrixV().rightCols(6 - rank);
    Vector6d V;
    bool found = false;
    for (int k = 0; k < 200 && !found; ++k) {
      Eigen::VectorXd z(u.cols());
      for (int i = 0; i < z.size(); ++i) z(i) = rng.uniform(-1, 1);
      V = u * z;
      found = m.constraints.M.rows() == 0 || (m.constraints.M * V).maxCoeff() < -1e-3;
    }
    if (!found) continue;
    GoalSpec g;
    g.G.resize(1 + rng.index(2), 6);
    for (int r = 0; r < g.G.rows(); ++r)
      for (int c = 0; c < 6; ++c) g.G(r, c) = rng.uniform(-1, 1);
    g.b = g.G * V;
    StampingResult r;
    try {
      r = wrenchStamp(s, table, m.mode, g);
    } catch (const Error&) {
      continue;
    }
    ++stamped;
    CHECK(r.psi > 0);
    CHECK(consistentModes(s, r.action) == std::vector<ContactMode>{m.mode});
  }
  CHECK(stamped == 60);
}
