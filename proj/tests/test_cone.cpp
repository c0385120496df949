#include <cmath>
#include <numbers>

#include "doctest.h"
#include "sgrasp/cone.hpp"
#include "sgrasp/error.hpp"
#include "support.hpp"

using namespace sgrasp;

namespace {

constexpr double kPi = std::numbers::pi;

Eigen::Vector3d sampleInside(test::Rng& rng, const Pcc& c) {
  Eigen::Vector3d x = Eigen::Vector3d::Zero();
  for (const auto& g : c.embedded()) x += rng.uniform(0, 1) * g;
  return x.normalized();
}

std::vector<Eigen::Vector3d> rotate(const Eigen::Matrix3d& r, const std::vector<Eigen::Vector3d>& v) {
  std::vector<Eigen::Vector3d> out;
  for (const auto& x : v) out.push_back(r * x);
  return out;
}

// Extreme rays: generators not in the cone of the others.
std::vector<Eigen::Vector3d> extremeRays(const std::vector<Eigen::Vector3d>& rays) {
  std::vector<Eigen::Vector3d> out;
  for (size_t i = 0; i < rays.size(); ++i) {
    std::vector<Eigen::Vector3d> others;
    for (size_t k = 0; k < rays.size(); ++k)
      if (k != i) others.push_back(rays[k]);
    if (!test::lpMember(others, rays[i], 1e-12)) out.push_back(rays[i]);
  }
  return out;
}

// min over facets of max over inner extreme rays of asin(n . E), with facets
// of a pointed full-rank cone found by checking every generator pair.
double sigmaBruteForce(const std::vector<Eigen::Vector3d>& outer,
                       const std::vector<Eigen::Vector3d>& inner) {
  const auto edges = extremeRays(inner);
  double best = kPi;
  for (size_t i = 0; i < outer.size(); ++i) {
    for (size_t j = i + 1; j < outer.size(); ++j) {
      Eigen::Vector3d n = outer[i].cross(outer[j]);
      if (n.norm() < 1e-12) continue;
      n.normalize();
      double lo = 0, hi = 0;
      for (const auto& g : outer) {
        lo = std::min(lo, n.dot(g));
        hi = std::max(hi, n.dot(g));
      }
      if (lo < -1e-12 && hi > 1e-12) continue;
      if (lo < -1e-12) n = -n;
      double worst = -kPi;
      for (const auto& e : edges) worst = std::max(worst, std::asin(std::clamp(n.dot(e), -1.0, 1.0)));
      best = std::min(best, worst);
    }
  }
  return std::max(best, 0.0);
}

}  // namespace

TEST_CASE("octant facets are the coordinate planes") {
  const Pcc c = Pcc::fromGenerators(Eigen::Matrix3d::Identity());
  const auto f = facets(c);
  REQUIRE(f.size() == 3);
  for (int axis = 0; axis < 3; ++axis) {
    int hits = 0;
    for (const auto& facet : f) hits += (facet.normal - Eigen::Vector3d::Unit(axis)).norm() < 1e-12;
    CHECK(hits == 1);
  }
}

TEST_CASE("single ray has no facets and the zero cone throws") {
  const Pcc ray = Pcc::fromGenerators(Eigen::RowVector3d(0, 1, 0));
  CHECK(facets(ray).empty());
  try {
    facets(Pcc::zero(3));
    FAIL("zero cone accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kZeroCone);
  }
}

TEST_CASE("two generators give two one-dimensional facets") {
  Eigen::MatrixXd g(2, 3);
  g << 1, 0, 0, 0, 1, 0;
  const auto f = facets(Pcc::fromGenerators(g));
  REQUIRE(f.size() == 2);
  CHECK(f[0].one_dimensional);
  CHECK(f[1].one_dimensional);
}

TEST_CASE("intersection examples") {
  test::Rng rng(31);
  const Pcc a = rng.pointedCone(5);
  const Pcc same = intersect(a, a);
  CHECK(contains(a, same));
  CHECK(contains(same, a));

  Eigen::MatrixXd quadrant(2, 2);
  quadrant << 1, 0, 0, 1;
  const Pcc y = Pcc::fromGenerators(Eigen::RowVector2d(0, 1));
  const Pcc inter = intersect(Pcc::fromGenerators(quadrant), y);
  REQUIRE(inter.numGenerators() == 1);
  CHECK((inter.generator(0) - Eigen::Vector2d(0, 1)).norm() < 1e-12);
}

TEST_CASE("projection examples") {
  Eigen::MatrixXd first_two(2, 3);
  first_two << 1, 0, 0, 0, 1, 0;
  CHECK(project(Pcc::fromGenerators(Eigen::RowVector3d(0, 0, 1)), first_two).isZero());

  Eigen::MatrixXd line(2, 3);
  line << 1, 0, 0, -1, 0, 0;
  const Pcc p = project(Pcc::fromGenerators(line), Eigen::RowVector3d(1, 0, 0));
  CHECK(p.dim() == 1);
  CHECK(p.isFull());
  CHECK_FALSE(p.isPointed());
}

TEST_CASE("delta values") {
  const Eigen::Vector3d z(0, 0, 1);
  CHECK(delta(z, z) == doctest::Approx(kPi / 2));
  CHECK(delta(z, Eigen::Vector3d(1, 0, 0)) == doctest::Approx(0).epsilon(1e-15));
  CHECK(delta(z, Eigen::Vector3d(std::sqrt(0.75), 0, 0.5)) == doctest::Approx(kPi / 6));
  test::Rng rng(32);
  for (int i = 0; i < 100; ++i) {
    const Eigen::Vector3d n = rng.unit3(), e = rng.unit3();
    CHECK(delta(-n, e) == doctest::Approx(-delta(n, e)).epsilon(1e-15));
  }
}

TEST_CASE("sigma examples") {
  const Pcc ray = Pcc::fromGenerators(Eigen::RowVector3d(0, 1, 0));
  CHECK(sigma(ray, ray) == 0.0);

  Eigen::MatrixXd quadrant(2, 2);
  quadrant << 1, 0, 0, 1;
  const Pcc bisector = Pcc::fromGenerators(Eigen::RowVector2d(1, 1).normalized());
  CHECK(sigma(Pcc::fromGenerators(quadrant), bisector) == doctest::Approx(kPi / 4));

  CHECK_THROWS_AS(sigma(ray, Pcc::fromGenerators(Eigen::RowVector3d(1, 0, 0))), Error);
  CHECK_THROWS_AS(sigma(ray, Pcc::zero(3)), Error);
}

TEST_CASE("sigma on a non-pointed outer cone is flagged") {
  Eigen::MatrixXd halfplane(3, 3);
  halfplane << 1, 0, 0, -1, 0, 0, 0, 1, 0;
  const SigmaDetail d = sigmaDetail(Pcc::fromGenerators(halfplane), Pcc::fromGenerators(Eigen::RowVector3d(0, 1, 0)));
  CHECK(d.flagged);
  CHECK(d.value == doctest::Approx(kPi / 2));
}

TEST_CASE("generators are unit and deduplicated") {
  Eigen::MatrixXd g(4, 3);
  g << 2, 0, 0, 1, 0, 0, 0, 3, 0, 1, 1, 0;
  const Pcc c = Pcc::fromGenerators(g);
  CHECK(c.numGenerators() == 2);
  for (const auto& r : c.embedded()) CHECK(r.norm() == doctest::Approx(1.0));
}

TEST_CASE("facets of random cones support their generators") {
  test::Rng rng(33);
  for (int trial = 0; trial < 100; ++trial) {
    const Pcc c = rng.pointedCone(3 + rng.index(6));
    for (const auto& f : facets(c)) {
      int support = 0;
      for (const auto& g : c.embedded()) {
        CHECK(f.normal.dot(g) >= -kConeTol);
        support += std::abs(f.normal.dot(g)) < 1e-9;
      }
      CHECK(support >= 2);
    }
  }
}

TEST_CASE("V and H descriptions agree on random rays") {
  test::Rng rng(34);
  for (int trial = 0; trial < 50; ++trial) {
    const Pcc c = rng.pointedCone(3 + rng.index(5));
    for (int k = 0; k < 200; ++k) {
      const Eigen::Vector3d x = rng.unit3();
      bool inside = true;
      for (const auto& h : c.halfspaces()) inside &= h.dot(x) >= -kConeTol;
      CHECK(inside == test::lpMember(c.embedded(), x));
    }
    const Pcc back = Pcc::fromHalfspaces(3, c.halfspaces());
    CHECK(contains(c, back));
    CHECK(contains(back, c));
  }
}

TEST_CASE("intersection and containment agree with LP membership") {
  test::Rng rng(35);
  for (int trial = 0; trial < 100; ++trial) {
    const Pcc a = rng.pointedCone(3 + rng.index(4));
    const Pcc b = rng.pointedCone(3 + rng.index(4));
    const Pcc ab = intersect(a, b);
    for (const auto& g : ab.embedded()) {
      CHECK(test::lpMember(a.embedded(), g));
      CHECK(test::lpMember(b.embedded(), g));
    }
    for (int k = 0; k < 200; ++k) {
      const Eigen::Vector3d x = k % 2 ? sampleInside(rng, a) : sampleInside(rng, b);
      const bool both = test::lpMember(a.embedded(), x) && test::lpMember(b.embedded(), x);
      CHECK(ab.containsEmbedded(x) == both);
    }
    bool all = true;
    for (const auto& g : b.embedded()) all &= test::lpMember(a.embedded(), g);
    CHECK(contains(a, b) == all);
  }
}

TEST_CASE("projection contains the image of every member") {
  test::Rng rng(36);
  for (int trial = 0; trial < 100; ++trial) {
    const Pcc c = rng.pointedCone(2 + rng.index(5));
    Eigen::MatrixXd p(1 + rng.index(2), 3);
    for (int r = 0; r < p.rows(); ++r) p.row(r) = rng.unit3().transpose();
    const Pcc img = project(c, p);
    for (int k = 0; k < 50; ++k) CHECK(img.contains(p * sampleInside(rng, c), 1e-9));
  }
}

TEST_CASE("sigma matches a brute-force min-max on rotated inputs") {
  test::Rng rng(37);
  for (int trial = 0; trial < 100; ++trial) {
    const Pcc outer = rng.pointedCone(3 + rng.index(4), 1.0);
    if (outer.rank() < 3) continue;
    std::vector<Eigen::Vector3d> inner_rays;
    for (int k = 0; k < 1 + rng.index(4); ++k) inner_rays.push_back(sampleInside(rng, outer));
    const Pcc inner = Pcc::fromEmbedded(3, inner_rays);
    const Eigen::Matrix3d r = rng.rotation();
    const double expected = sigmaBruteForce(rotate(r, outer.embedded()), rotate(r, inner_rays));
    CHECK(sigma(outer, inner) == doctest::Approx(expected).epsilon(1e-9));
  }
}

TEST_CASE("sigma and intersection are rotation invariant") {
  test::Rng rng(38);
  for (int trial = 0; trial < 100; ++trial) {
    const Pcc a = rng.pointedCone(4);
    const Pcc b = rng.pointedCone(4);
    const Eigen::Matrix3d r = rng.rotation();
    const Pcc ra = Pcc::fromEmbedded(3, rotate(r, a.embedded()));
    const Pcc rb = Pcc::fromEmbedded(3, rotate(r, b.embedded()));
    const Pcc ab = intersect(a, b);
    const Pcc rab = intersect(ra, rb);
    CHECK(ab.numGenerators() == rab.numGenerators());
    const Pcc moved = Pcc::fromEmbedded(3, rotate(r, ab.embedded()));
    CHECK(contains(moved, rab, 1e-8));
    CHECK(contains(rab, moved, 1e-8));
    if (!ab.isZero()) CHECK(sigma(a, ab) == doctest::Approx(sigma(ra, rab)).epsilon(1e-9));
  }
}
