#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "folia/convex_set.hpp"
#include "folia/types.hpp"

namespace folia {

/// A scalar function whose sublevel sets drive a foliation. Registered
/// functions may carry an exact sublevel-set constructor; without one the
/// generic iterative SublevelSet oracle is used.
struct FunctionSpec {
  std::string name;
  Eigen::Index dim = 0;
  std::function<double(const Vec&)> value;
  std::function<Vec(const Vec&)> gradient;  // may be empty
  std::function<std::shared_ptr<const ConvexSet>(double level)> sublevel;  // may be empty
  Vec box_lo, box_hi;   // sampling domain for validation
  bool smooth = false;  // level boundaries are C1 manifolds away from the minimum
};

/// Registered names: norm, sqnorm, sqrt_norm, ellipsoid_quadratic, box_max,
/// sqnorm_cos_drift (a planted non-quasiconvex function for validation tests).
FunctionSpec make_function(const std::string& name, const nlohmann::json& params,
                           Eigen::Index dim);

std::vector<std::string> registered_functions();

/// Midpoint-quasiconvexity sampling: f((p+q)/2) <= max(f(p), f(q)) + tol over
/// quasi-random pairs in the domain box. Throws validation_error carrying the
/// first violating pair.
void check_quasiconvexity(const FunctionSpec& f, int n_pairs = 1000,
                          std::uint64_t seed = 0, double tol = 1e-9);

}  // namespace folia
