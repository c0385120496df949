#pragma once

// Planar rigid-body kinematics for a hand-object-environment system.
//
// Every vector lives in the hand frame H. Wrenches are (f_x, f_y, tau / L),
// twists are (v_x, v_y, omega) of a body relative to the world, measured at
// the origin of H. A generalized velocity V stacks the object twist on top of
// the hand twist.

#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace sgrasp {

using Vector6d = Eigen::Matrix<double, 6, 1>;
using RowVector6d = Eigen::Matrix<double, 1, 6>;

struct Pose2 {
  double x = 0;
  double y = 0;
  double theta = 0;

  Eigen::Matrix2d rotation() const;
  Eigen::Vector2d transformPoint(const Eigen::Vector2d& p) const;
  Eigen::Vector2d transformVector(const Eigen::Vector2d& v) const;
  Pose2 inverse() const;
  Pose2 operator*(const Pose2& other) const;
};

// Adjoint of a planar pose acting on (v_x, v_y, omega) twists.
Eigen::Matrix3d adjoint(const Pose2& pose);

enum class Owner { kEnvironment, kHand };
enum class EdgeSide { kLeft, kRight };

struct Contact {
  Owner owner = Owner::kEnvironment;
  Eigen::Vector2d point = Eigen::Vector2d::Zero();
  // Unit normal pointing into the object: the direction the contact pushes.
  Eigen::Vector2d normal = Eigen::Vector2d::UnitY();
  double mu = 0;
};

struct Scene {
  Pose2 object_pose;
  Pose2 hand_pose;
  std::vector<Contact> contacts;
  double char_length = 1;
  double nominal_force = 10;

  int numContacts() const { return static_cast<int>(contacts.size()); }
  int countOwner(Owner owner) const;
  // Throws Error(kInvalidScene) when an invariant is violated.
  void validate() const;
};

struct WrenchRay {
  Eigen::Vector3d direction = Eigen::Vector3d::Zero();
  int contact = -1;
  EdgeSide edge = EdgeSide::kLeft;
};

// Contact tangent: the normal rotated by +90 degrees. "Left" refers to this
// direction as seen from the contact looking into the object.
template <typename Scalar>
Eigen::Matrix<Scalar, 2, 1> tangentOf(const Eigen::Matrix<Scalar, 2, 1>& n) {
  return Eigen::Matrix<Scalar, 2, 1>(-n.y(), n.x());
}

template <typename Scalar>
Scalar cross2(const Eigen::Matrix<Scalar, 2, 1>& a,
              const Eigen::Matrix<Scalar, 2, 1>& b) {
  return a.x() * b.y() - a.y() * b.x();
}

// Unnormalized wrench applied to the object along one friction cone edge:
// [e; (p x e) / L] with e = n + mu t (left) or e = n - mu t (right).
template <typename Scalar>
Eigen::Matrix<Scalar, 3, 1> edgeScrew(const Eigen::Matrix<Scalar, 2, 1>& p,
                                      const Eigen::Matrix<Scalar, 2, 1>& n,
                                      Scalar mu, Scalar length, EdgeSide side) {
  const Eigen::Matrix<Scalar, 2, 1> t = tangentOf(n);
  const Eigen::Matrix<Scalar, 2, 1> e =
      side == EdgeSide::kLeft ? Eigen::Matrix<Scalar, 2, 1>(n + mu * t)
                              : Eigen::Matrix<Scalar, 2, 1>(n - mu * t);
  return Eigen::Matrix<Scalar, 3, 1>(e.x(), e.y(), cross2(p, e) / length);
}

// Left and right friction edge wrenches a contact can apply to the object.
std::pair<WrenchRay, WrenchRay> frictionEdges(const Contact& contact,
                                              double char_length,
                                              int contact_index = -1);

// Sign of a contact's Jacobian rows. Hand rows carry the wrench the object
// exerts on the hand, so that J_e' tau_e = J_h' tau_h = -f_H.
inline double jacobianSign(Owner owner) {
  return owner == Owner::kHand ? -1.0 : 1.0;
}

struct ContactJacobians {
  Eigen::MatrixXd env;   // one row per environment edge, contact order x (L, R)
  Eigen::MatrixXd hand;  // one row per hand edge
  std::vector<WrenchRay> env_rays;
  std::vector<WrenchRay> hand_rays;
};

ContactJacobians buildJacobians(const Scene& scene);

struct VelocityRows {
  RowVector6d normal;   // normal . v_rel
  RowVector6d tangent;  // tangent . v_rel
};

// Rows mapping V to the normal and tangential velocity of the object surface
// point at the contact relative to the other body.
VelocityRows contactVelocityRows(const Scene& scene, int contact_index);

}  // namespace sgrasp
