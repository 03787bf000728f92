#include "folia/functions.hpp"

#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

#include "folia/sampling.hpp"

namespace folia {

namespace {

using nlohmann::json;

Vec json_vec(const json& j, Eigen::Index d, const char* what) {
  auto v = j.get<std::vector<double>>();
  if (static_cast<Eigen::Index>(v.size()) != d)
    throw input_error(std::string(what) + ": expected " + std::to_string(d) +
                      " entries");
  return Eigen::Map<const Vec>(v.data(), d);
}

void default_box(FunctionSpec& f, double half_width) {
  f.box_lo = Vec::Constant(f.dim, -half_width);
  f.box_hi = Vec::Constant(f.dim, half_width);
}

}  // namespace

FunctionSpec make_function(const std::string& name, const nlohmann::json& params,
                           Eigen::Index dim) {
  if (dim < 1) throw input_error("function: dimension must be >= 1");
  FunctionSpec f;
  f.name = name;
  f.dim = dim;
  default_box(f, 8.0);
  if (params.contains("box_lo")) f.box_lo = json_vec(params.at("box_lo"), dim, "box_lo");
  if (params.contains("box_hi")) f.box_hi = json_vec(params.at("box_hi"), dim, "box_hi");

  if (name == "norm") {
    f.value = [](const Vec& x) { return x.norm(); };
    f.gradient = [](const Vec& x) -> Vec {
      double n = x.norm();
      if (n < 1e-300) return Vec::Zero(x.size());
      return x / n;
    };
    f.sublevel = [dim](double level) -> std::shared_ptr<const ConvexSet> {
      if (!(level > 0.0)) throw input_error("norm sublevel: level must be positive");
      return std::make_shared<Ball>(Vec::Zero(dim), level);
    };
    f.smooth = true;
  } else if (name == "sqnorm") {
    f.value = [](const Vec& x) { return x.squaredNorm(); };
    f.gradient = [](const Vec& x) -> Vec { return 2.0 * x; };
    f.sublevel = [dim](double level) -> std::shared_ptr<const ConvexSet> {
      if (!(level > 0.0)) throw input_error("sqnorm sublevel: level must be positive");
      return std::make_shared<Ball>(Vec::Zero(dim), std::sqrt(level));
    };
    f.smooth = true;
  } else if (name == "sqrt_norm") {
    f.value = [](const Vec& x) { return std::sqrt(x.norm()); };
    f.gradient = [](const Vec& x) -> Vec {
      double n = x.norm();
      if (n < 1e-300) return Vec::Zero(x.size());
      return x / (2.0 * std::pow(n, 1.5));
    };
    f.sublevel = [dim](double level) -> std::shared_ptr<const ConvexSet> {
      if (!(level > 0.0))
        throw input_error("sqrt_norm sublevel: level must be positive");
      return std::make_shared<Ball>(Vec::Zero(dim), level * level);
    };
    f.smooth = true;
  } else if (name == "ellipsoid_quadratic") {
    // f(x) = sum (x_i / a_i)^2
    Vec axes = params.contains("semi_axes")
                   ? json_vec(params.at("semi_axes"), dim, "semi_axes")
                   : Vec::Ones(dim);
    if (axes.minCoeff() <= 0.0)
      throw input_error("ellipsoid_quadratic: semi_axes must be positive");
    Vec w = axes.array().square().inverse();
    f.value = [w](const Vec& x) { return (w.array() * x.array().square()).sum(); };
    f.gradient = [w](const Vec& x) -> Vec { return 2.0 * (w.array() * x.array()).matrix(); };
    f.sublevel = [dim, axes](double level) -> std::shared_ptr<const ConvexSet> {
      if (!(level > 0.0))
        throw input_error("ellipsoid_quadratic sublevel: level must be positive");
      return std::make_shared<Ellipsoid>(
          Ellipsoid::from_semi_axes(Vec::Zero(dim), (std::sqrt(level) * axes).eval()));
    };
    f.smooth = true;
  } else if (name == "box_max") {
    f.value = [](const Vec& x) { return x.cwiseAbs().maxCoeff(); };
    f.sublevel = [dim](double level) -> std::shared_ptr<const ConvexSet> {
      if (!(level > 0.0)) throw input_error("box_max sublevel: level must be positive");
      return std::make_shared<Polytope>(Polytope::box(Vec::Constant(dim, -level).eval(),
                                                      Vec::Constant(dim, level).eval()));
    };
    f.smooth = false;
  } else if (name == "sqnorm_cos_drift") {
    // |x|^2 - 4 cos(3 x_1): multi-well along the first axis, not quasiconvex.
    f.value = [](const Vec& x) { return x.squaredNorm() - 4.0 * std::cos(3.0 * x[0]); };
    f.gradient = [](const Vec& x) -> Vec {
      Vec g = 2.0 * x;
      g[0] += 12.0 * std::sin(3.0 * x[0]);
      return g;
    };
    f.smooth = false;
    default_box(f, 2.0);
  } else {
    throw input_error("unknown function name: " + name);
  }
  return f;
}

std::vector<std::string> registered_functions() {
  return {"norm", "sqnorm", "sqrt_norm", "ellipsoid_quadratic", "box_max",
          "sqnorm_cos_drift"};
}

void check_quasiconvexity(const FunctionSpec& f, int n_pairs, std::uint64_t seed,
                          double tol) {
  const int d = static_cast<int>(f.dim);
  Vec span = f.box_hi - f.box_lo;
  for (int k = 0; k < n_pairs; ++k) {
    // One 2d-dimensional quasi-random point per pair keeps the endpoints
    // jointly stratified.
    Vec uv = halton_point(seed + 1 + static_cast<std::uint64_t>(k), 2 * d);
    Vec p = f.box_lo + span.cwiseProduct(uv.head(d));
    Vec q = f.box_lo + span.cwiseProduct(uv.tail(d));
    double mid = f.value(0.5 * (p + q));
    double cap = std::max(f.value(p), f.value(q));
    if (mid > cap + tol) {
      std::ostringstream os;
      os << f.name << ": quasiconvexity violated at midpoint (f(mid)=" << mid
         << " > max(f(p),f(q))=" << cap << ")";
      throw validation_error(os.str(), p, q);
    }
  }
}

}  // namespace folia
