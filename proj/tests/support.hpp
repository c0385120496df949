#pragma once

// Hand-rolled random generators for property tests.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "sgrasp/cone.hpp"
#include "sgrasp/geometry.hpp"
#include "sgrasp/lp.hpp"

namespace sgrasp::test {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(engine_);
  }
  int index(int n) { return std::uniform_int_distribution<int>(0, n - 1)(engine_); }
  bool coin() { return index(2) == 1; }

  Eigen::Vector3d unit3() {
    std::normal_distribution<double> g;
    Eigen::Vector3d v;
    do {
      v = {g(engine_), g(engine_), g(engine_)};
    } while (v.norm() < 1e-6);
    return v.normalized();
  }

  Eigen::Vector2d unit2() {
    const double a = uniform(-std::numbers::pi, std::numbers::pi);
    return {std::cos(a), std::sin(a)};
  }

  // Rays within `spread` radians of a random axis, so the cone is pointed.
  std::vector<Eigen::Vector3d> pointedRays(int count, double spread) {
    const Eigen::Vector3d axis = unit3();
    std::vector<Eigen::Vector3d> rays;
    for (int i = 0; i < count; ++i) {
      Eigen::Vector3d r;
      do {
        r = unit3();
      } while (std::acos(std::clamp(r.dot(axis), -1.0, 1.0)) > spread);
      rays.push_back(r);
    }
    return rays;
  }

  Pcc pointedCone(int count, double spread = 1.2) {
    return Pcc::fromEmbedded(3, pointedRays(count, spread));
  }

  Eigen::Matrix3d rotation() {
    Eigen::Quaterniond q(uniform(-1, 1), uniform(-1, 1), uniform(-1, 1), uniform(-1, 1));
    return q.normalized().toRotationMatrix();
  }

  // Random 2-3 contact scene with at least one contact per owner.
  Scene scene(int contacts) {
    Scene s;
    for (int i = 0; i < contacts; ++i) {
      Contact c;
      c.owner = i == 0 ? Owner::kEnvironment
                : i == 1 ? Owner::kHand
                         : (coin() ? Owner::kHand : Owner::kEnvironment);
      c.point = {uniform(-1, 1), uniform(-1, 1)};
      c.normal = unit2();
      c.mu = uniform(0.1, 1.0);
      s.contacts.push_back(c);
    }
    return s;
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

// Membership of x in cone{rows} by LP: x = sum lambda_i g_i, lambda >= 0,
// with slack variables measuring the residual.
inline bool lpMember(const std::vector<Eigen::Vector3d>& gens, const Eigen::Vector3d& x,
                     double tol = 1e-9) {
  const int n = static_cast<int>(gens.size());
  lp::Problem p(n + 6);
  for (int i = 0; i < n + 6; ++i) p.nonnegative[i] = true;
  for (int i = 0; i < 6; ++i) p.cost(n + i) = 1;
  for (int k = 0; k < 3; ++k) {
    Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(n + 6);
    for (int i = 0; i < n; ++i) row(i) = gens[i](k);
    row(n + 2 * k) = 1;
    row(n + 2 * k + 1) = -1;
    p.addEquality(row, x(k));
  }
  const auto r = lp::solve(p);
  return r.status == lp::Status::kOptimal && r.objective <= tol;
}

}  // namespace sgrasp::test
