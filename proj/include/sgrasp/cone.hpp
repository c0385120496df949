#pragma once

// Polyhedral convex cones in R^1..R^3 with a dual generator / half-space
// description, plus the angular depth metrics used for stability margins.
//
// Cones of lower ambient dimension are embedded in R^3 (trailing coordinates
// pinned to zero) so a single set of routines handles every case. Generators
// are unit rays; a pointed cone keeps only its extreme rays.

#include <array>
#include <vector>

#include <Eigen/Dense>

namespace sgrasp {

inline constexpr double kConeTol = 1e-9;

struct Facet {
  // Inward unit normal, embedded in R^3. For a one-dimensional facet this is
  // the in-plane normal of the bounding ray.
  Eigen::Vector3d normal = Eigen::Vector3d::Zero();
  // Bounding generator of a one-dimensional facet (a planar cone's edge).
  Eigen::Vector3d ray = Eigen::Vector3d::Zero();
  bool one_dimensional = false;
  // Indices of the generators spanning the facet; the second is -1 for
  // one-dimensional facets.
  std::array<int, 2> support{-1, -1};
};

class Pcc {
 public:
  Pcc() = default;  // the zero cone in R^3

  static Pcc zero(int dim);
  // Rows of `rows` are generators; `labels` (optional) tag each generator and
  // follow it through deduplication and extreme-ray selection.
  static Pcc fromGenerators(const Eigen::MatrixXd& rows,
                            const std::vector<int>& labels = {});
  static Pcc fromEmbedded(int dim, const std::vector<Eigen::Vector3d>& gens,
                          const std::vector<int>& labels = {});
  // Cone {x : n . x >= 0 for every normal n}.
  static Pcc fromHalfspaces(int dim, const std::vector<Eigen::Vector3d>& normals);

  int dim() const { return dim_; }
  int rank() const { return rank_; }
  bool isZero() const { return gens_.empty(); }
  // Equal to the whole ambient space.
  bool isFull() const { return full_; }
  // Contains no line.
  bool isPointed() const { return pointed_; }

  int numGenerators() const { return static_cast<int>(gens_.size()); }
  Eigen::VectorXd generator(int i) const { return gens_[i].head(dim_); }
  Eigen::MatrixXd generatorMatrix() const;
  const std::vector<Eigen::Vector3d>& embedded() const { return gens_; }
  const std::vector<int>& labels() const { return labels_; }
  const std::vector<Facet>& facetList() const { return facets_; }
  // Complete half-space description, equalities written as +/- pairs.
  const std::vector<Eigen::Vector3d>& halfspaces() const { return halfspaces_; }
  // Normal of the supporting plane of a rank-2 cone.
  const Eigen::Vector3d& planeNormal() const { return plane_normal_; }

  bool contains(const Eigen::VectorXd& x, double tol = kConeTol) const;
  bool containsEmbedded(const Eigen::Vector3d& x, double tol = kConeTol) const;

 private:
  void build(std::vector<Eigen::Vector3d> gens, std::vector<int> labels);
  void buildRank1();
  void buildRank2();
  void buildRank3();

  int dim_ = 3;
  int rank_ = 0;
  bool pointed_ = true;
  bool full_ = false;
  std::vector<Eigen::Vector3d> gens_;
  std::vector<int> labels_;
  std::vector<Facet> facets_;
  std::vector<Eigen::Vector3d> halfspaces_;
  Eigen::Vector3d plane_normal_ = Eigen::Vector3d::Zero();
};

Eigen::Vector3d embed(const Eigen::VectorXd& v);

// Throws Error(kZeroCone) for the zero cone. A rank-2 cone in R^3 reports its
// two generators as one-dimensional facets; a single ray has no facets.
std::vector<Facet> facets(const Pcc& cone);

Pcc intersect(const Pcc& a, const Pcc& b);

// Image of the cone under a linear map R^dim -> R^k (k = map.rows()).
Pcc project(const Pcc& cone, const Eigen::MatrixXd& map);

// inner is a subset of outer.
bool contains(const Pcc& outer, const Pcc& inner, double tol = kConeTol);

// Signed angular distance from ray `edge` to the hyperplane with unit normal
// `facet_normal`: asin(n . E).
double delta(const Eigen::VectorXd& facet_normal, const Eigen::VectorXd& edge);

// Angular distance between a one-dimensional facet ray and an edge.
double rayAngle(const Eigen::Vector3d& ray, const Eigen::Vector3d& edge);

struct SigmaDetail {
  double value = 0;
  int facet = -1;   // index into facetList() of the outer cone
  int edge = -1;    // index into the inner cone's generators
  bool flagged = false;  // outer cone is not pointed
};

// Depth of `inner` inside `outer`: min over facets of max over edges of the
// facet-edge distance. Throws kZeroCone if inner is zero and kNotContained if
// inner is not a subset of outer.
SigmaDetail sigmaDetail(const Pcc& outer, const Pcc& inner);
inline double sigma(const Pcc& outer, const Pcc& inner) {
  return sigmaDetail(outer, inner).value;
}

}  // namespace sgrasp
