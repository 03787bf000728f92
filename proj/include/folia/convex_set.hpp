#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "folia/types.hpp"

namespace folia {

/// Closed convex set exposing membership, distance and the metric projection.
/// All oracles are immutable after construction; every operation is a pure
/// function of its inputs and safe to call concurrently.
class ConvexSet {
 public:
  virtual ~ConvexSet() = default;

  Eigen::Index dim() const { return dim_; }
  const std::string& kind() const { return kind_; }

  /// Nearest point of the set. Points already in the set are returned
  /// unchanged (short-circuit before any iteration).
  virtual Vec project(const Vec& x) const = 0;

  /// Euclidean distance to the set; zero iff the point is a member.
  virtual double distance(const Vec& x) const;

  bool contains(const Vec& x, double tol = kMembershipTol) const {
    return distance(x) <= tol;
  }

  /// A point strictly inside the set.
  virtual Vec anchor() const = 0;

  /// Distance from x to the complement (positive strictly inside, <= 0
  /// outside). Exact for polyhedral kinds, a conservative lower bound or a
  /// ray estimate otherwise.
  virtual double interior_depth(const Vec& x) const;

  /// Deterministic boundary sample cloud.
  virtual std::vector<Vec> boundary_samples(int n) const;

 protected:
  ConvexSet(Eigen::Index dim, std::string kind);
  void check_dim(const Vec& x) const;

  Eigen::Index dim_;
  std::string kind_;
};

class Ball final : public ConvexSet {
 public:
  Ball(Vec center, double radius);
  Vec project(const Vec& x) const override;
  double distance(const Vec& x) const override;
  Vec anchor() const override { return center_; }
  double interior_depth(const Vec& x) const override;
  std::vector<Vec> boundary_samples(int n) const override;

  const Vec& center() const { return center_; }
  double radius() const { return radius_; }

 private:
  Vec center_;
  double radius_;
};

/// { x : <normal, x> <= offset }
class Halfspace final : public ConvexSet {
 public:
  Halfspace(Vec normal, double offset);
  Vec project(const Vec& x) const override;
  double distance(const Vec& x) const override;
  Vec anchor() const override;
  double interior_depth(const Vec& x) const override;
  std::vector<Vec> boundary_samples(int n) const override;

 private:
  Vec normal_;
  double offset_;
  double norm_;
};

/// { x : (x-c)^T A (x-c) <= 1 } with A symmetric positive definite.
/// Projection solves the KKT multiplier equation by bisection.
class Ellipsoid final : public ConvexSet {
 public:
  Ellipsoid(Vec center, Mat shape);
  static Ellipsoid from_semi_axes(Vec center, const Vec& semi_axes);

  Vec project(const Vec& x) const override;
  Vec anchor() const override { return center_; }
  double interior_depth(const Vec& x) const override;
  std::vector<Vec> boundary_samples(int n) const override;

  double gauge(const Vec& x) const;  // (x-c)^T A (x-c)

 private:
  Vec center_;
  Mat shape_;
  Mat eigvecs_;
  Vec eigvals_;
  double min_semi_axis_;
};

/// Finite intersection of halfspaces a_i^T x <= b_i, certified nonempty by a
/// strictly interior point. Projection runs Dykstra's alternating scheme.
class Polytope final : public ConvexSet {
 public:
  Polytope(Mat normals, Vec offsets, Vec interior_point);
  static Polytope box(const Vec& lo, const Vec& hi);

  Vec project(const Vec& x) const override;
  Vec anchor() const override { return interior_; }
  double interior_depth(const Vec& x) const override;
  std::vector<Vec> boundary_samples(int n) const override;

  const Mat& normals() const { return normals_; }
  const Vec& offsets() const { return offsets_; }

 private:
  double max_violation(const Vec& x) const;
  Mat normals_;
  Vec offsets_;
  Vec interior_;
  Vec row_norms_;
};

/// Sublevel set [f <= level] of a smooth convex function. Projection is a
/// bisection on the KKT multiplier with an inner proximal gradient descent.
class SublevelSet final : public ConvexSet {
 public:
  SublevelSet(Eigen::Index dim, std::function<double(const Vec&)> f,
              std::function<Vec(const Vec&)> grad,  // may be empty
              double level, Vec interior_witness,
              double proj_tol = kProjTol, int iteration_budget = 10000);

  Vec project(const Vec& x) const override;
  Vec anchor() const override { return witness_; }

  double value(const Vec& x) const { return f_(x); }
  double level() const { return level_; }

 private:
  Vec grad_at(const Vec& x) const;
  std::function<double(const Vec&)> f_;
  std::function<Vec(const Vec&)> grad_;
  double level_;
  Vec witness_;
  double proj_tol_;
  int budget_;
};

/// Normal-cone residual of direction v at xbar against a probe sample of the
/// set: max over probes y of <v, y - xbar> / (|v| * max(1, |y - xbar|)).
/// Values <= tol certify v in N_set(xbar) against the sample.
double normal_residual(const ConvexSet& set, const Vec& xbar, const Vec& v,
                       const std::vector<Vec>& probes);

/// Boundary samples plus the interior anchor, the default probe cloud.
std::vector<Vec> probe_points(const ConvexSet& set, int n);

}  // namespace folia
