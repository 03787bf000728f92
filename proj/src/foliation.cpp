#include "folia/foliation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

#include "folia/sampling.hpp"

namespace folia {

namespace {
using nlohmann::json;
}

ConvexFoliation::ConvexFoliation(double a, double b, Eigen::Index dim)
    : a_(a), b_(b), dim_(dim) {
  if (!(a < b)) throw input_error("foliation: index range must satisfy a < b");
  if (!std::isfinite(a) || !std::isfinite(b))
    throw input_error("foliation: index range must be finite");
}

double ConvexFoliation::index_of(const Vec& x) const {
  require_dim(x, dim_, "index_of");
  auto outer = set_at(b_);
  if (!outer->contains(x))
    throw input_error("index_of: point lies outside S_b");
  auto inner = set_at(a_);
  if (inner->contains(x)) {
    // Ties at the inner boundary resolve to a; deeper points have no index.
    if (inner->interior_depth(x) <= kMembershipTol) return a_;
    throw input_error("index_of: point lies in the interior of S_a");
  }
  double lo = a_, hi = b_;
  while (hi - lo > kIndexTol * (1.0 + std::abs(hi))) {
    double mid = 0.5 * (lo + hi);
    (set_at(mid)->contains(x) ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

SublevelFoliation::SublevelFoliation(FunctionSpec f, double a, double b, Vec witness)
    : ConvexFoliation(a, b, f.dim), spec_(std::move(f)), witness_(std::move(witness)) {
  require_dim(witness_, dim_, "sublevel foliation witness");
}

std::shared_ptr<const ConvexSet> SublevelFoliation::set_at(double t) const {
  if (t < a_ - kIndexTol || t > b_ + kIndexTol)
    throw input_error("set_at: level outside [a,b]");
  if (spec_.sublevel) return spec_.sublevel(t);
  return std::make_shared<SublevelSet>(dim_, spec_.value, spec_.gradient, t, witness_);
}

ParametricFoliation::ParametricFoliation(
    std::function<std::shared_ptr<const ConvexSet>(double)> factory, double a,
    double b, Eigen::Index dim, bool smooth, std::string kind)
    : ConvexFoliation(a, b, dim),
      factory_(std::move(factory)),
      smooth_(smooth),
      kind_(std::move(kind)) {}

std::shared_ptr<const ConvexSet> ParametricFoliation::set_at(double t) const {
  if (t < a_ - kIndexTol || t > b_ + kIndexTol)
    throw input_error("set_at: level outside [a,b]");
  return factory_(t);
}

std::shared_ptr<SublevelFoliation> make_sublevel_foliation(
    FunctionSpec f, double a, double b, const Vec& witness, std::uint64_t seed,
    int quasiconvexity_pairs) {
  if (!(a < b)) throw input_error("make_sublevel_foliation: requires a < b");
  require_dim(witness, f.dim, "make_sublevel_foliation witness");
  if (f.value(witness) > a + kMembershipTol)
    throw input_error(
        "make_sublevel_foliation: witness does not certify [f <= a] nonempty");
  check_quasiconvexity(f, quasiconvexity_pairs, seed);
  return std::make_shared<SublevelFoliation>(std::move(f), a, b, witness);
}

std::shared_ptr<ParametricFoliation> make_parametric_foliation(
    const std::string& kind, const nlohmann::json& params, double a, double b,
    Eigen::Index dim, bool check_nesting) {
  std::function<std::shared_ptr<const ConvexSet>(double)> factory;
  bool smooth = false;
  const Eigen::Index d = dim;
  if (kind == "scaled_ellipsoids") {
    Vec axes = Vec::Ones(d);
    if (params.contains("semi_axes")) {
      auto v = params.at("semi_axes").get<std::vector<double>>();
      if (static_cast<Eigen::Index>(v.size()) != d)
        throw input_error("scaled_ellipsoids: semi_axes size mismatch");
      axes = Eigen::Map<const Vec>(v.data(), d);
    }
    if (axes.minCoeff() <= 0.0)
      throw input_error("scaled_ellipsoids: semi_axes must be positive");
    factory = [d, axes](double t) -> std::shared_ptr<const ConvexSet> {
      if (!(t > 0.0)) throw input_error("scaled_ellipsoids: level must be positive");
      return std::make_shared<Ellipsoid>(
          Ellipsoid::from_semi_axes(Vec::Zero(d), (t * axes).eval()));
    };
    smooth = true;
  } else if (kind == "translated_balls") {
    Vec vel = Vec::Zero(d);
    if (params.contains("velocity")) {
      auto v = params.at("velocity").get<std::vector<double>>();
      if (static_cast<Eigen::Index>(v.size()) != d)
        throw input_error("translated_balls: velocity size mismatch");
      vel = Eigen::Map<const Vec>(v.data(), d);
    }
    factory = [vel](double t) -> std::shared_ptr<const ConvexSet> {
      if (!(t > 0.0)) throw input_error("translated_balls: radius must be positive");
      return std::make_shared<Ball>((t * vel).eval(), t);
    };
    smooth = true;
  } else if (kind == "boxes") {
    factory = [d](double t) -> std::shared_ptr<const ConvexSet> {
      if (!(t > 0.0)) throw input_error("boxes: level must be positive");
      return std::make_shared<Polytope>(Polytope::box(
          Vec::Constant(d, -t).eval(), Vec::Constant(d, t).eval()));
    };
  } else {
    throw input_error("unknown parametric family kind: " + kind);
  }
  auto fol = std::make_shared<ParametricFoliation>(factory, a, b, dim, smooth, kind);
  if (check_nesting) {
    NestingReport rep = validate_nesting(*fol, 16, 32);
    if (!rep.passed) {
      std::ostringstream os;
      os << "parametric family '" << kind << "' violates strict nesting between t="
         << rep.violations.front().t1 << " and t=" << rep.violations.front().t2
         << " (margin " << rep.violations.front().margin << ")";
      throw validation_error(os.str());
    }
  }
  return fol;
}

NestingReport validate_nesting(const ConvexFoliation& fol, int n_levels,
                               int n_points) {
  if (n_levels < 2) throw input_error("validate_nesting: needs n_levels >= 2");
  NestingReport rep;
  rep.levels = n_levels;
  rep.points_per_level = n_points;
  rep.min_margin = std::numeric_limits<double>::infinity();
  const double a = fol.t_min(), b = fol.t_max();
  for (int k = 0; k + 1 < n_levels; ++k) {
    double t1 = a + (b - a) * k / (n_levels - 1);
    double t2 = a + (b - a) * (k + 1) / (n_levels - 1);
    auto s1 = fol.set_at(t1);
    auto s2 = fol.set_at(t2);
    for (const Vec& p : s1->boundary_samples(n_points)) {
      double margin = s2->interior_depth(p);
      rep.min_margin = std::min(rep.min_margin, margin);
      if (!(margin > 0.0)) rep.violations.push_back({t1, t2, p, margin});
    }
  }
  rep.passed = rep.violations.empty() && rep.min_margin > 0.0;
  return rep;
}

ContinuityModulus continuity_modulus(const ConvexFoliation& fol, double t,
                                     const std::vector<double>& deltas,
                                     int n_dirs) {
  ContinuityModulus mod;
  auto base = fol.set_at(t);
  auto cloud_base = base->boundary_samples(n_dirs);
  for (double delta : deltas) {
    double tn = std::min(t + std::abs(delta), fol.t_max());
    auto other = fol.set_at(tn);
    auto cloud_other = other->boundary_samples(n_dirs);
    auto one_sided = [](const std::vector<Vec>& from, const std::vector<Vec>& to) {
      double h = 0.0;
      for (const Vec& p : from) {
        double best = std::numeric_limits<double>::infinity();
        for (const Vec& q : to) best = std::min(best, (p - q).norm());
        h = std::max(h, best);
      }
      return h;
    };
    mod.deltas.push_back(std::abs(delta));
    mod.hausdorff.push_back(
        std::max(one_sided(cloud_base, cloud_other), one_sided(cloud_other, cloud_base)));
  }
  return mod;
}

}  // namespace folia
