#include "sgrasp/geometry.hpp"

#include <cmath>
#include <sstream>

#include "sgrasp/error.hpp"

namespace sgrasp {

Eigen::Matrix2d Pose2::rotation() const {
  return Eigen::Rotation2Dd(theta).toRotationMatrix();
}

Eigen::Vector2d Pose2::transformPoint(const Eigen::Vector2d& p) const {
  return rotation() * p + Eigen::Vector2d(x, y);
}

Eigen::Vector2d Pose2::transformVector(const Eigen::Vector2d& v) const {
  return rotation() * v;
}

Pose2 Pose2::inverse() const {
  const Eigen::Vector2d t = -(rotation().transpose() * Eigen::Vector2d(x, y));
  return {t.x(), t.y(), -theta};
}

Pose2 Pose2::operator*(const Pose2& other) const {
  const Eigen::Vector2d t = transformPoint(Eigen::Vector2d(other.x, other.y));
  return {t.x(), t.y(), theta + other.theta};
}

Eigen::Matrix3d adjoint(const Pose2& pose) {
  Eigen::Matrix3d adj = Eigen::Matrix3d::Zero();
  adj.topLeftCorner<2, 2>() = pose.rotation();
  adj(0, 2) = pose.y;
  adj(1, 2) = -pose.x;
  adj(2, 2) = 1;
  return adj;
}

int Scene::countOwner(Owner owner) const {
  int n = 0;
  for (const auto& c : contacts) n += c.owner == owner ? 1 : 0;
  return n;
}

void Scene::validate() const {
  auto fail = [](const std::string& msg) {
    throw Error(ErrorCode::kInvalidScene, msg);
  };
  if (!(char_length > 0) || !std::isfinite(char_length))
    fail("characteristic length must be positive");
  if (!(nominal_force > 0) || !std::isfinite(nominal_force))
    fail("nominal force must be positive");
  if (countOwner(Owner::kEnvironment) < 1)
    fail("scene needs at least one environment contact");
  if (countOwner(Owner::kHand) < 1)
    fail("scene needs at least one hand contact");
  for (int i = 0; i < numContacts(); ++i) {
    const Contact& c = contacts[i];
    std::ostringstream where;
    where << "contact " << i << ": ";
    if (!c.point.allFinite()) fail(where.str() + "point is not finite");
    if (std::abs(c.normal.norm() - 1.0) > 1e-12)
      fail(where.str() + "normal is not unit length");
    if (!(c.mu >= 0) || !std::isfinite(c.mu))
      fail(where.str() + "friction coefficient must be >= 0");
  }
}

std::pair<WrenchRay, WrenchRay> frictionEdges(const Contact& contact,
                                              double char_length,
                                              int contact_index) {
  WrenchRay left, right;
  left.direction = edgeScrew<double>(contact.point, contact.normal, contact.mu,
                                     char_length, EdgeSide::kLeft)
                       .normalized();
  right.direction = edgeScrew<double>(contact.point, contact.normal,
                                      contact.mu, char_length, EdgeSide::kRight)
                        .normalized();
  left.contact = right.contact = contact_index;
  left.edge = EdgeSide::kLeft;
  right.edge = EdgeSide::kRight;
  return {left, right};
}

ContactJacobians buildJacobians(const Scene& scene) {
  ContactJacobians jac;
  for (int i = 0; i < scene.numContacts(); ++i) {
    const Contact& c = scene.contacts[i];
    auto [left, right] = frictionEdges(c, scene.char_length, i);
    const double sign = jacobianSign(c.owner);
    left.direction *= sign;
    right.direction *= sign;
    auto& rays = c.owner == Owner::kHand ? jac.hand_rays : jac.env_rays;
    rays.push_back(left);
    rays.push_back(right);
  }
  auto stack = [](const std::vector<WrenchRay>& rays) {
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rays.size()), 3);
    for (size_t r = 0; r < rays.size(); ++r)
      m.row(static_cast<Eigen::Index>(r)) = rays[r].direction.transpose();
    return m;
  };
  jac.env = stack(jac.env_rays);
  jac.hand = stack(jac.hand_rays);
  return jac;
}

VelocityRows contactVelocityRows(const Scene& scene, int contact_index) {
  const Contact& c = scene.contacts.at(contact_index);
  const Eigen::Vector2d t = tangentOf<double>(c.normal);
  // d . (v + omega x p) = d . v + omega (p x d)
  auto pointRow = [&](const Eigen::Vector2d& d) {
    return Eigen::RowVector3d(d.x(), d.y(), cross2<double>(c.point, d));
  };
  VelocityRows rows;
  rows.normal.setZero();
  rows.tangent.setZero();
  rows.normal.head<3>() = pointRow(c.normal);
  rows.tangent.head<3>() = pointRow(t);
  if (c.owner == Owner::kHand) {
    rows.normal.tail<3>() = -pointRow(c.normal);
    rows.tangent.tail<3>() = -pointRow(t);
  }
  return rows;
}

}  // namespace sgrasp
