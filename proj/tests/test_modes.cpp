#include <algorithm>
#include <set>

#include "doctest.h"
#include "sgrasp/error.hpp"
#include "sgrasp/lp.hpp"
#include "sgrasp/modes.hpp"
#include "sgrasp/scenes.hpp"
#include "support.hpp"

using namespace sgrasp;

namespace {

// Strict realizability with |V|_inf <= 1: maximize t subject to N V = 0,
// M V + t <= 0, -1 <= V <= 1, 0 <= t <= 1.
bool realizableInf(const ModeConstraints& mc, double slack) {
  lp::Problem p(7);
  p.nonnegative = {false, false, false, false, false, false, true};
  p.cost(6) = -1;
  for (int r = 0; r < mc.N.rows(); ++r) {
    Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(7);
    row.head(6) = mc.N.row(r);
    p.addEquality(row, 0);
  }
  for (int r = 0; r < mc.M.rows(); ++r) {
    Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(7);
    row.head(6) = mc.M.row(r);
    row(6) = 1;
    p.addInequality(row, 0);
  }
  for (int k = 0; k < 7; ++k) {
    Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(7);
    row(k) = 1;
    p.addInequality(row, 1);
    if (k < 6) p.addInequality(-row, 1);
  }
  const auto r = lp::solve(p);
  return r.status == lp::Status::kOptimal && (mc.M.rows() == 0 || -r.objective >= slack);
}

// Reads the contact mode off a generalized velocity.
ContactMode classify(const Scene& s, const Vector6d& V, double tol) {
  ContactMode m;
  for (int i = 0; i < s.numContacts(); ++i) {
    const VelocityRows rows = contactVelocityRows(s, i);
    const double vn = rows.normal.dot(V), vt = rows.tangent.dot(V);
    if (vn > tol) m += 's';
    else if (vt > tol) m += 'l';
    else if (vt < -tol) m += 'r';
    else m += 'f';
  }
  return m;
}

Eigen::MatrixXd nullBasis(const Eigen::MatrixXd& n) {
  if (n.rows() == 0) return Eigen::MatrixXd::Identity(6, 6);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(n, Eigen::ComputeFullV);
  int rank = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i) rank += svd.singularValues()(i) > 1e-9;
  return svd.matrixV().rightCols(6 - rank);
}

}  // namespace

TEST_CASE("mode strings are validated") {
  const Scene s = cubePalmScene();
  CHECK_NOTHROW(validateMode(s, "sfff"));
  CHECK_THROWS_AS(validateMode(s, "fff"), Error);
  CHECK_THROWS_AS(validateMode(s, "ffxf"), Error);
  CHECK(uniformMode(s, 's') == "ssss");
}

TEST_CASE("a single frictional contact on a free body admits every mode") {
  Scene s;
  Contact env;
  env.normal = {0, 1};
  env.mu = 0.5;
  Contact hand = env;
  hand.owner = Owner::kHand;
  hand.point = {0, 1};
  hand.normal = {0, -1};
  s.contacts = {env, hand};
  const auto modes = enumerateModes(s);
  std::set<char> first;
  for (const auto& m : modes) first.insert(m[0]);
  CHECK(first == std::set<char>{'f', 'l', 'r', 's'});
}

TEST_CASE("cube-palm enumeration") {
  const auto modes = enumerateModes(cubePalmScene());
  // Coplanar contact pairs on the table and on the palm each admit 10 pair
  // modes (ff, ll, rr and the seven with a separation), and the pairs do not
  // interact, so 10 x 10.
  CHECK(modes.size() == 100);
  CHECK(std::is_sorted(modes.begin(), modes.end(), [](const auto& a, const auto& b) {
    const std::string order = "flrs";
    for (size_t i = 0; i < a.size(); ++i)
      if (a[i] != b[i]) return order.find(a[i]) < order.find(b[i]);
    return false;
  }));
  CHECK(std::set<ContactMode>(modes.begin(), modes.end()).size() == modes.size());
  CHECK(modes.front() == "ffff");
  CHECK(std::find(modes.begin(), modes.end(), "lrff") == modes.end());
}

TEST_CASE("too many contacts") {
  Scene s = cubePalmScene();
  while (s.numContacts() <= kMaxEnumeratedContacts) s.contacts.push_back(s.contacts[0]);
  CHECK_THROWS_AS(enumerateModes(s), Error);
}

TEST_CASE("mode cones") {
  const Scene s = cubePalmScene();
  const ModeCones none = modeCones(s, "ssss");
  CHECK(none.env.isZero());
  CHECK(none.hand.isZero());
  const ModeCones all = modeCones(s, "ffff");
  CHECK(all.env.numGenerators() == 4);
  CHECK(all.hand.numGenerators() == 4);
  const ModeCones slide = modeCones(s, "lsff");
  REQUIRE(slide.env.numGenerators() == 1);
  CHECK(slide.env.labels()[0] == edgeId(0, EdgeSide::kRight));
}

TEST_CASE("constraint row counts") {
  const Scene s = cubePalmScene();
  const ModeConstraints f = modeConstraints(s, "ffff");
  CHECK(f.N.rows() == 8);
  CHECK(f.M.rows() == 0);
  const ModeConstraints sfff = modeConstraints(s, "sfff");
  CHECK(sfff.N.rows() == 6);
  CHECK(sfff.M.rows() == 1);
  const ModeConstraints l = modeConstraints(s, "lfff");
  CHECK(l.N.rows() == 7);
  CHECK(l.M.rows() == 1);
}

TEST_CASE("every enumerated mode cone lies inside the all-fixed cones") {
  test::Rng rng(41);
  for (int trial = 0; trial < 20; ++trial) {
    const Scene s = rng.scene(2 + rng.index(2));
    const ModeCones af = modeCones(s, uniformMode(s, 'f'));
    const Pcc c_af = allFixedCone(s);
    for (const auto& m : enumerateModes(s)) {
      const ModeCones mc = modeCones(s, m);
      CHECK(contains(af.env, mc.env));
      CHECK(contains(af.hand, mc.hand));
      CHECK(contains(c_af, intersect(mc.env, mc.hand)));
    }
  }
}

TEST_CASE("enumeration agrees with an infinity-norm LP filter") {
  test::Rng rng(42);
  const std::string letters = "flrs";
  for (int trial = 0; trial < 60; ++trial) {
    const Scene s = rng.scene(2);
    const auto modes = enumerateModes(s);
    const std::set<ContactMode> got(modes.begin(), modes.end());
    for (char a : letters)
      for (char b : letters) {
        const ContactMode m{a, b};
        const bool expected = m == "ff" || realizableInf(modeConstraints(s, m), 1e-6);
        CHECK_MESSAGE(got.count(m) == expected, m);
      }
  }
}

TEST_CASE("velocities sampled from a mode reproduce the mode") {
  test::Rng rng(43);
  int checked = 0;
  for (int trial = 0; trial < 40; ++trial) {
    const Scene s = rng.scene(2 + rng.index(2));
    for (const auto& m : enumerateModes(s)) {
      const ModeConstraints mc = modeConstraints(s, m);
      const Eigen::MatrixXd u = nullBasis(mc.N);
      if (u.cols() == 0) continue;
      for (int k = 0; k < 200; ++k) {
        Eigen::VectorXd z(u.cols());
        for (int i = 0; i < z.size(); ++i) z(i) = rng.uniform(-1, 1);
        const Vector6d V = u * z;
        if (mc.M.rows() && (mc.M * V).maxCoeff() > -1e-3) continue;
        CHECK(classify(s, V, 1e-9) == m);
        ++checked;
        break;
      }
    }
  }
  CHECK(checked > 100);
}

TEST_CASE("wrench classification against the balance equations") {
  test::Rng rng(44);
  for (int trial = 0; trial < 20; ++trial) {
    const Scene s = rng.scene(3);
    const ContactJacobians j = buildJacobians(s);
    const ModeCones af = modeCones(s, uniformMode(s, 'f'));
    const Pcc c_af = allFixedCone(s);
    for (int k = 0; k < 50; ++k) {
      const Eigen::Vector3d w = rng.unit3();
      auto solvable = [&](const Eigen::MatrixXd& jac) {
        lp::Problem p(static_cast<int>(jac.rows()));
        p.nonnegative.assign(jac.rows(), true);
        p.addEqualities(jac.transpose(), w);
        return lp::isFeasible(p);
      };
      const bool hand = solvable(j.hand);
      const bool balanced = hand && solvable(j.env);
      // Hand cone membership uses the hand-side wrench, which is what the
      // Jacobian rows carry.
      CHECK(af.hand.containsEmbedded(w) == hand);
      CHECK(c_af.containsEmbedded(w) == balanced);
    }
  }
}
