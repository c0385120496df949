#include "sgrasp/cone.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sgrasp/error.hpp"

namespace sgrasp {

namespace {

constexpr double kRankTol = 1e-9;
constexpr double kDedupTol = 1e-9;
constexpr double kCrossTol = 1e-12;

int numericalRank(const std::vector<Eigen::Vector3d>& vs,
                  Eigen::Matrix3d* right_vectors = nullptr) {
  if (vs.empty()) return 0;
  Eigen::MatrixXd m(static_cast<Eigen::Index>(vs.size()), 3);
  for (size_t i = 0; i < vs.size(); ++i)
    m.row(static_cast<Eigen::Index>(i)) = vs[i].transpose();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullV);
  if (right_vectors) *right_vectors = svd.matrixV();
  const auto& s = svd.singularValues();
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) r += s(i) > kRankTol ? 1 : 0;
  return r;
}

// Deterministic sign: largest-magnitude component positive.
Eigen::Vector3d canonicalSign(const Eigen::Vector3d& v) {
  Eigen::Index k;
  v.cwiseAbs().maxCoeff(&k);
  return v(k) < 0 ? Eigen::Vector3d(-v) : v;
}

// Two unit vectors orthogonal to unit u.
std::pair<Eigen::Vector3d, Eigen::Vector3d> orthoBasis(const Eigen::Vector3d& u) {
  Eigen::Vector3d a = std::abs(u.x()) < 0.9 ? Eigen::Vector3d::UnitX()
                                            : Eigen::Vector3d::UnitY();
  a = (a - a.dot(u) * u).normalized();
  return {a, u.cross(a).normalized()};
}

bool nearlyEqual(const Eigen::Vector3d& a, const Eigen::Vector3d& b) {
  return (a - b).norm() < kDedupTol;
}

void pushUnique(std::vector<Eigen::Vector3d>& out, const Eigen::Vector3d& v) {
  for (const auto& w : out)
    if (nearlyEqual(w, v)) return;
  out.push_back(v);
}

bool allAbove(const std::vector<Eigen::Vector3d>& gens, const Eigen::Vector3d& n,
              double tol) {
  for (const auto& g : gens)
    if (n.dot(g) < -tol) return false;
  return true;
}

}  // namespace

Eigen::Vector3d embed(const Eigen::VectorXd& v) {
  Eigen::Vector3d e = Eigen::Vector3d::Zero();
  e.head(std::min<Eigen::Index>(3, v.size())) = v.head(std::min<Eigen::Index>(3, v.size()));
  return e;
}

Pcc Pcc::zero(int dim) {
  Pcc c;
  c.build({}, {});
  c.dim_ = dim;
  return c;
}

Pcc Pcc::fromGenerators(const Eigen::MatrixXd& rows,
                        const std::vector<int>& labels) {
  std::vector<Eigen::Vector3d> gens;
  gens.reserve(static_cast<size_t>(rows.rows()));
  for (Eigen::Index r = 0; r < rows.rows(); ++r)
    gens.push_back(embed(rows.row(r).transpose()));
  return fromEmbedded(static_cast<int>(rows.cols()), gens, labels);
}

Pcc Pcc::fromEmbedded(int dim, const std::vector<Eigen::Vector3d>& gens,
                      const std::vector<int>& labels) {
  Pcc c;
  c.dim_ = dim;
  std::vector<int> l = labels;
  if (l.size() != gens.size()) {
    l.resize(gens.size());
    for (size_t i = 0; i < l.size(); ++i) l[i] = -1;
  }
  c.build(gens, l);
  return c;
}

void Pcc::build(std::vector<Eigen::Vector3d> gens, std::vector<int> labels) {
  gens_.clear();
  labels_.clear();
  facets_.clear();
  halfspaces_.clear();
  plane_normal_.setZero();
  pointed_ = true;
  full_ = false;
  for (size_t i = 0; i < gens.size(); ++i) {
    Eigen::Vector3d g = gens[i];
    for (int k = dim_; k < 3; ++k) g(k) = 0;
    const double n = g.norm();
    if (n < 1e-12) continue;
    g /= n;
    bool dup = false;
    for (const auto& h : gens_) dup = dup || nearlyEqual(g, h);
    if (dup) continue;
    gens_.push_back(g);
    labels_.push_back(labels[i]);
  }
  Eigen::Matrix3d v;
  rank_ = numericalRank(gens_, &v);
  switch (rank_) {
    case 0:
      for (int k = 0; k < 3; ++k) {
        halfspaces_.push_back(Eigen::Vector3d::Unit(k));
        halfspaces_.push_back(-Eigen::Vector3d::Unit(k));
      }
      break;
    case 1:
      buildRank1();
      break;
    case 2:
      plane_normal_ = canonicalSign(v.col(2));
      buildRank2();
      break;
    default:
      buildRank3();
      break;
  }
}

void Pcc::buildRank1() {
  const Eigen::Vector3d g = gens_.front();
  bool line = false;
  for (const auto& h : gens_) line = line || h.dot(g) < 0;
  auto [a, b] = orthoBasis(g);
  halfspaces_ = {a, -a, b, -b};
  if (line) {
    pointed_ = false;
    gens_ = {g, -g};
    labels_ = {labels_.front(), -1};
    full_ = dim_ == 1;
  } else {
    gens_ = {g};
    labels_ = {labels_.front()};
    halfspaces_.push_back(g);
  }
}

void Pcc::buildRank2() {
  const Eigen::Vector3d w = plane_normal_;
  std::vector<Eigen::Vector3d> in_plane;
  std::vector<int> owner;  // generator index tight on each in-plane normal
  for (size_t i = 0; i < gens_.size(); ++i) {
    const Eigen::Vector3d m = w.cross(gens_[i]).normalized();
    for (double s : {1.0, -1.0}) {
      const Eigen::Vector3d ms = s * m;
      if (!allAbove(gens_, ms, kConeTol)) continue;
      bool dup = false;
      for (const auto& x : in_plane) dup = dup || nearlyEqual(x, ms);
      if (!dup) {
        in_plane.push_back(ms);
        owner.push_back(static_cast<int>(i));
      }
    }
  }
  halfspaces_ = {w, -w};
  for (const auto& m : in_plane) halfspaces_.push_back(m);
  if (in_plane.size() != 2) {
    // Half-plane (one bounding line) or the whole plane.
    pointed_ = false;
    full_ = in_plane.empty() && dim_ == 2;
    if (in_plane.size() == 1) {
      Facet f;
      f.normal = in_plane.front();
      f.ray = gens_[owner.front()];
      f.one_dimensional = true;
      f.support = {owner.front(), -1};
      facets_.push_back(f);
    }
    return;
  }
  // Sector: keep the two bounding generators only.
  std::vector<Eigen::Vector3d> gens = {gens_[owner[0]], gens_[owner[1]]};
  std::vector<int> labels = {labels_[owner[0]], labels_[owner[1]]};
  std::vector<int> order = {0, 1};
  if (owner[1] < owner[0]) {
    std::swap(gens[0], gens[1]);
    std::swap(labels[0], labels[1]);
    std::swap(in_plane[0], in_plane[1]);
  }
  gens_ = gens;
  labels_ = labels;
  for (int k = 0; k < 2; ++k) {
    Facet f;
    f.normal = in_plane[k];
    f.ray = gens_[k];
    f.one_dimensional = true;
    f.support = {k, -1};
    facets_.push_back(f);
  }
}

void Pcc::buildRank3() {
  const int n = numGenerators();
  std::vector<Eigen::Vector3d> normals;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const Eigen::Vector3d c = gens_[i].cross(gens_[j]);
      if (c.norm() < kCrossTol) continue;
      const Eigen::Vector3d u = c.normalized();
      for (double s : {1.0, -1.0}) {
        const Eigen::Vector3d us = s * u;
        if (allAbove(gens_, us, kConeTol)) pushUnique(normals, us);
      }
    }
  }
  halfspaces_ = normals;
  if (normals.empty()) {
    pointed_ = false;
    full_ = dim_ == 3;
    return;
  }
  pointed_ = numericalRank(normals) == 3;

  std::vector<Facet> facets;
  std::vector<bool> extreme(static_cast<size_t>(n), false);
  for (const auto& u : normals) {
    std::vector<int> tight;
    for (int k = 0; k < n; ++k)
      if (std::abs(u.dot(gens_[k])) <= kConeTol) tight.push_back(k);
    Facet f;
    f.normal = u;
    double best = 2.0;
    for (size_t a = 0; a < tight.size(); ++a) {
      for (size_t b = a + 1; b < tight.size(); ++b) {
        const double d = gens_[tight[a]].dot(gens_[tight[b]]);
        if (d < best - 1e-15) {
          best = d;
          f.support = {tight[a], tight[b]};
        }
      }
    }
    if (f.support[0] >= 0) {
      extreme[f.support[0]] = true;
      extreme[f.support[1]] = true;
    }
    facets.push_back(f);
  }
  if (!pointed_) {
    facets_ = facets;
    return;
  }
  std::vector<int> remap(static_cast<size_t>(n), -1);
  std::vector<Eigen::Vector3d> gens;
  std::vector<int> labels;
  for (int k = 0; k < n; ++k) {
    if (!extreme[k]) continue;
    remap[k] = static_cast<int>(gens.size());
    gens.push_back(gens_[k]);
    labels.push_back(labels_[k]);
  }
  gens_ = gens;
  labels_ = labels;
  for (auto& f : facets) {
    f.support = {remap[f.support[0]], remap[f.support[1]]};
    if (f.support[0] > f.support[1]) std::swap(f.support[0], f.support[1]);
  }
  std::sort(facets.begin(), facets.end(), [](const Facet& a, const Facet& b) {
    return a.support < b.support;
  });
  facets_ = facets;
}

Pcc Pcc::fromHalfspaces(int dim, const std::vector<Eigen::Vector3d>& normals_in) {
  std::vector<Eigen::Vector3d> normals;
  for (const auto& n : normals_in) {
    if (n.norm() < 1e-12) continue;
    pushUnique(normals, n.normalized());
  }
  for (int k = dim; k < 3; ++k) {
    pushUnique(normals, Eigen::Vector3d::Unit(k));
    pushUnique(normals, -Eigen::Vector3d::Unit(k));
  }
  Eigen::Matrix3d v;
  const int r = numericalRank(normals, &v);
  std::vector<Eigen::Vector3d> gens;
  if (r == 0) {
    for (int k = 0; k < dim; ++k) {
      gens.push_back(Eigen::Vector3d::Unit(k));
      gens.push_back(-Eigen::Vector3d::Unit(k));
    }
  } else if (r == 3) {
    for (size_t i = 0; i < normals.size(); ++i) {
      for (size_t j = i + 1; j < normals.size(); ++j) {
        const Eigen::Vector3d c = normals[i].cross(normals[j]);
        if (c.norm() < kCrossTol) continue;
        const Eigen::Vector3d u = c.normalized();
        for (double s : {1.0, -1.0})
          if (allAbove(normals, s * u, kConeTol)) pushUnique(gens, s * u);
      }
    }
  } else if (r == 2) {
    const Eigen::Vector3d d = v.col(2).normalized();
    gens = {d, -d};
    for (const auto& n : normals) {
      const Eigen::Vector3d c = d.cross(n);
      if (c.norm() < kCrossTol) continue;
      for (double s : {1.0, -1.0}) {
        const Eigen::Vector3d u = s * c.normalized();
        if (allAbove(normals, u, kConeTol)) pushUnique(gens, u);
      }
    }
  } else {
    const Eigen::Vector3d u = normals.front();
    bool both = false;
    for (const auto& n : normals) both = both || n.dot(u) < 0;
    auto [a, b] = orthoBasis(u);
    gens = {a, -a, b, -b};
    if (!both) gens.push_back(u);
  }
  return fromEmbedded(dim, gens);
}

Eigen::MatrixXd Pcc::generatorMatrix() const {
  Eigen::MatrixXd m(numGenerators(), dim_);
  for (int i = 0; i < numGenerators(); ++i) m.row(i) = gens_[i].head(dim_).transpose();
  return m;
}

bool Pcc::containsEmbedded(const Eigen::Vector3d& x, double tol) const {
  const double n = x.norm();
  if (n < 1e-12) return true;
  const Eigen::Vector3d u = x / n;
  for (const auto& h : halfspaces_)
    if (h.dot(u) < -tol) return false;
  return true;
}

bool Pcc::contains(const Eigen::VectorXd& x, double tol) const {
  return containsEmbedded(embed(x), tol);
}

std::vector<Facet> facets(const Pcc& cone) {
  if (cone.isZero()) throw Error(ErrorCode::kZeroCone, "facets of the zero cone");
  return cone.facetList();
}

Pcc intersect(const Pcc& a, const Pcc& b) {
  std::vector<Eigen::Vector3d> normals = a.halfspaces();
  normals.insert(normals.end(), b.halfspaces().begin(), b.halfspaces().end());
  return Pcc::fromHalfspaces(std::max(a.dim(), b.dim()), normals);
}

Pcc project(const Pcc& cone, const Eigen::MatrixXd& map) {
  const int k = static_cast<int>(map.rows());
  std::vector<Eigen::Vector3d> gens;
  for (int i = 0; i < cone.numGenerators(); ++i) {
    const Eigen::VectorXd y = map * cone.generator(i);
    if (y.norm() < 1e-12) continue;
    gens.push_back(embed(y));
  }
  return Pcc::fromEmbedded(k, gens);
}

bool contains(const Pcc& outer, const Pcc& inner, double tol) {
  for (const auto& g : inner.embedded())
    if (!outer.containsEmbedded(g, tol)) return false;
  return true;
}

double delta(const Eigen::VectorXd& facet_normal, const Eigen::VectorXd& edge) {
  return std::asin(std::clamp(facet_normal.dot(edge), -1.0, 1.0));
}

double rayAngle(const Eigen::Vector3d& ray, const Eigen::Vector3d& edge) {
  return std::acos(std::clamp(ray.dot(edge), -1.0, 1.0));
}

SigmaDetail sigmaDetail(const Pcc& outer, const Pcc& inner) {
  if (inner.isZero()) throw Error(ErrorCode::kZeroCone, "sigma of a zero inner cone");
  if (!contains(outer, inner))
    throw Error(ErrorCode::kNotContained, "sigma: inner cone is not contained");
  SigmaDetail out;
  if (!outer.isPointed()) {
    out.value = std::numbers::pi / 2;
    out.flagged = true;
    return out;
  }
  if (outer.rank() <= 1) return out;
  const auto& fs = outer.facetList();
  double best = std::numeric_limits<double>::infinity();
  for (size_t j = 0; j < fs.size(); ++j) {
    double worst = -std::numeric_limits<double>::infinity();
    int worst_i = -1;
    for (int i = 0; i < inner.numGenerators(); ++i) {
      const Eigen::Vector3d& e = inner.embedded()[i];
      const double d = fs[j].one_dimensional ? rayAngle(fs[j].ray, e)
                                             : delta(fs[j].normal, e);
      if (d > worst) {
        worst = d;
        worst_i = i;
      }
    }
    if (worst < best) {
      best = worst;
      out.facet = static_cast<int>(j);
      out.edge = worst_i;
    }
  }
  // Boundary contact within tolerance counts as zero depth.
  out.value = std::max(0.0, best);
  return out;
}

}  // namespace sgrasp
