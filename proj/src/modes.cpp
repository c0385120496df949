#include "sgrasp/modes.hpp"

#include <algorithm>

#include "sgrasp/error.hpp"
#include "sgrasp/lp.hpp"
#include "sgrasp/parallel.hpp"

namespace sgrasp {

namespace {

void appendRow(Eigen::MatrixXd& m, const RowVector6d& row) {
  m.conservativeResize(m.rows() + 1, 6);
  m.row(m.rows() - 1) = row;
}

constexpr char kLetters[] = {'f', 'l', 'r', 's'};

}  // namespace

void validateMode(const Scene& scene, const ContactMode& mode) {
  if (static_cast<int>(mode.size()) != scene.numContacts())
    throw Error(ErrorCode::kParse,
                "mode '" + mode + "' has " + std::to_string(mode.size()) +
                    " letters, scene has " +
                    std::to_string(scene.numContacts()) + " contacts");
  for (char c : mode)
    if (c != 's' && c != 'f' && c != 'l' && c != 'r')
      throw Error(ErrorCode::kParse,
                  std::string("mode letter '") + c + "' is not one of s, f, l, r");
}

ContactMode uniformMode(const Scene& scene, char letter) {
  return ContactMode(static_cast<size_t>(scene.numContacts()), letter);
}

ModeConstraints modeConstraints(const Scene& scene, const ContactMode& mode) {
  validateMode(scene, mode);
  ModeConstraints mc;
  mc.N.resize(0, 6);
  mc.M.resize(0, 6);
  for (int i = 0; i < scene.numContacts(); ++i) {
    const VelocityRows rows = contactVelocityRows(scene, i);
    switch (mode[i]) {
      case 's':
        appendRow(mc.M, -rows.normal);
        break;
      case 'f':
        appendRow(mc.N, rows.normal);
        appendRow(mc.N, rows.tangent);
        break;
      case 'l':
        appendRow(mc.N, rows.normal);
        appendRow(mc.M, -rows.tangent);
        break;
      default:
        appendRow(mc.N, rows.normal);
        appendRow(mc.M, rows.tangent);
        break;
    }
  }
  return mc;
}

bool kinematicallyFeasible(const ModeConstraints& mc, double slack) {
  if (mc.M.rows() == 0) return true;
  // Variables: V (6, free), u (6, >= 0, |V| <= u), t in [0, 1].
  lp::Problem p(13);
  for (int i = 6; i < 13; ++i) p.nonnegative[i] = true;
  p.cost(12) = -1.0;
  for (Eigen::Index r = 0; r < mc.N.rows(); ++r) {
    Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(13);
    row.head(6) = mc.N.row(r);
    p.addEquality(row, 0.0);
  }
  for (Eigen::Index r = 0; r < mc.M.rows(); ++r) {
    Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(13);
    row.head(6) = mc.M.row(r);
    row(12) = 1.0;
    p.addInequality(row, 0.0);
  }
  for (int i = 0; i < 6; ++i) {
    Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(13);
    row(i) = 1.0;
    row(6 + i) = -1.0;
    p.addInequality(row, 0.0);
    row(i) = -1.0;
    p.addInequality(row, 0.0);
  }
  Eigen::RowVectorXd l1 = Eigen::RowVectorXd::Zero(13);
  l1.segment(6, 6).setOnes();
  p.addInequality(l1, 1.0);
  Eigen::RowVectorXd cap = Eigen::RowVectorXd::Zero(13);
  cap(12) = 1.0;
  p.addInequality(cap, 1.0);
  const lp::Result r = lp::solve(p);
  return r.status == lp::Status::kOptimal && r.x(12) >= slack;
}

std::vector<ContactMode> enumerateModes(const Scene& scene, double slack) {
  const int n = scene.numContacts();
  if (n > kMaxEnumeratedContacts)
    throw Error(ErrorCode::kTooManyContacts,
                std::to_string(n) + " contacts exceed the enumeration bound of " +
                    std::to_string(kMaxEnumeratedContacts));
  int total = 1;
  for (int i = 0; i < n; ++i) total *= 4;
  std::vector<ContactMode> all(static_cast<size_t>(total));
  for (int k = 0; k < total; ++k) {
    ContactMode m(static_cast<size_t>(n), 'f');
    int code = k;
    for (int i = n - 1; i >= 0; --i) {
      m[i] = kLetters[code % 4];
      code /= 4;
    }
    all[k] = m;
  }
  std::vector<char> keep(static_cast<size_t>(total), 0);
  parallelFor(total, [&](int k) {
    keep[k] = kinematicallyFeasible(modeConstraints(scene, all[k]), slack) ? 1 : 0;
  });
  std::vector<ContactMode> out;
  for (int k = 0; k < total; ++k)
    if (keep[k]) out.push_back(all[k]);
  return out;
}

ModeCones modeCones(const Scene& scene, const ContactMode& mode) {
  validateMode(scene, mode);
  std::vector<Eigen::Vector3d> env, hand;
  std::vector<int> env_labels, hand_labels;
  for (int i = 0; i < scene.numContacts(); ++i) {
    const Contact& c = scene.contacts[i];
    auto [left, right] = frictionEdges(c, scene.char_length, i);
    const double sign = jacobianSign(c.owner);
    auto& gens = c.owner == Owner::kHand ? hand : env;
    auto& labels = c.owner == Owner::kHand ? hand_labels : env_labels;
    const char letter = mode[i];
    if (letter == 'f' || letter == 'r') {
      gens.push_back(sign * left.direction);
      labels.push_back(edgeId(i, EdgeSide::kLeft));
    }
    if (letter == 'f' || letter == 'l') {
      gens.push_back(sign * right.direction);
      labels.push_back(edgeId(i, EdgeSide::kRight));
    }
  }
  return {Pcc::fromEmbedded(3, env, env_labels),
          Pcc::fromEmbedded(3, hand, hand_labels)};
}

Pcc allFixedCone(const Scene& scene) {
  const ModeCones c = modeCones(scene, uniformMode(scene, 'f'));
  return intersect(c.env, c.hand);
}

}  // namespace sgrasp
