#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "folia/convex_set.hpp"
#include "folia/functions.hpp"
#include "folia/types.hpp"

namespace folia {

/// Ordered family {S_t}, t in [a,b], of nonempty closed convex sets with
/// strict nesting. index_of maps a point of S_b \ int S_a to the unique t
/// with x on the boundary of S_t. Immutable; all queries are pure.
class ConvexFoliation {
 public:
  virtual ~ConvexFoliation() = default;

  double t_min() const { return a_; }
  double t_max() const { return b_; }
  Eigen::Index dim() const { return dim_; }

  virtual std::shared_ptr<const ConvexSet> set_at(double t) const = 0;

  /// Boundary index of x. The default implementation bisects the membership
  /// predicate in t to kIndexTol; points within membership tolerance of the
  /// boundary of S_a map to a.
  virtual double index_of(const Vec& x) const;

  virtual bool smooth_boundaries() const { return false; }

 protected:
  ConvexFoliation(double a, double b, Eigen::Index dim);
  double a_, b_;
  Eigen::Index dim_;
};

/// Foliation by sublevel sets of a quasiconvex function; index_of(x) = f(x).
class SublevelFoliation final : public ConvexFoliation {
 public:
  SublevelFoliation(FunctionSpec f, double a, double b, Vec witness);
  std::shared_ptr<const ConvexSet> set_at(double t) const override;
  double index_of(const Vec& x) const override { return spec_.value(x); }
  bool smooth_boundaries() const override { return spec_.smooth; }
  const FunctionSpec& function() const { return spec_; }

 private:
  FunctionSpec spec_;
  Vec witness_;
};

/// Foliation given directly by a parametric set family.
class ParametricFoliation final : public ConvexFoliation {
 public:
  ParametricFoliation(std::function<std::shared_ptr<const ConvexSet>(double)> factory,
                      double a, double b, Eigen::Index dim, bool smooth,
                      std::string kind);
  std::shared_ptr<const ConvexSet> set_at(double t) const override;
  bool smooth_boundaries() const override { return smooth_; }
  const std::string& family_kind() const { return kind_; }

 private:
  std::function<std::shared_ptr<const ConvexSet>(double)> factory_;
  bool smooth_;
  std::string kind_;
};

/// Builds the sublevel foliation of f on [a,b]. Requires a witness point with
/// f(witness) <= a and runs the quasiconvexity sampling check.
std::shared_ptr<SublevelFoliation> make_sublevel_foliation(
    FunctionSpec f, double a, double b, const Vec& witness,
    std::uint64_t seed = 0, int quasiconvexity_pairs = 1000);

/// Parametric families: "scaled_ellipsoids" (params: semi_axes),
/// "translated_balls" (params: velocity), "boxes".
std::shared_ptr<ParametricFoliation> make_parametric_foliation(
    const std::string& kind, const nlohmann::json& params, double a, double b,
    Eigen::Index dim, bool check_nesting = true);

struct NestingViolation {
  double t1, t2;
  Vec point;
  double margin;
};

struct NestingReport {
  bool passed = false;
  double min_margin = 0.0;
  int levels = 0, points_per_level = 0;
  std::vector<NestingViolation> violations;
};

/// Samples level pairs t1 < t2 and boundary points of S_{t1}; each point must
/// sit strictly inside S_{t2}. Violations are reported, never thrown.
NestingReport validate_nesting(const ConvexFoliation& fol, int n_levels = 32,
                               int n_points = 64);

struct ContinuityModulus {
  std::vector<double> deltas;
  std::vector<double> hausdorff;  // boundary-cloud Hausdorff estimates
};

/// Set-valued continuity diagnostic: Hausdorff-distance estimates between the
/// sampled boundaries of S_{t+delta} and S_t for a shrinking delta sequence.
ContinuityModulus continuity_modulus(const ConvexFoliation& fol, double t,
                                     const std::vector<double>& deltas,
                                     int n_dirs = 128);

}  // namespace folia
