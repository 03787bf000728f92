#include "folia/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "folia/sampling.hpp"

namespace folia {

double check_self_contracted(const UnitSpeedCurve& curve, int n_triples,
                             std::uint64_t seed) {
  if (curve.points().size() < 3 && curve.length() <= 0.0)
    throw input_error("check_self_contracted: degenerate curve");
  const double L = curve.length();
  double worst = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < n_triples; ++k) {
    Vec u = halton_point(seed + 1 + static_cast<std::uint64_t>(k), 3);
    double s[3] = {L * u[0], L * u[1], L * u[2]};
    std::sort(s, s + 3);
    Vec p1 = curve.eval(s[0]), p2 = curve.eval(s[1]), p3 = curve.eval(s[2]);
    worst = std::max(worst, (p2 - p3).norm() - (p1 - p3).norm());
  }
  return worst;
}

double length_diameter_ratio(const UnitSpeedCurve& curve) {
  const auto& pts = curve.points();
  if (pts.size() < 2)
    throw degenerate_error("length_diameter_ratio: fewer than two distinct samples");
  // A polyline's diameter is attained at vertices.
  double diam = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      diam = std::max(diam, (pts[i] - pts[j]).norm());
  if (!(diam > 0.0))
    throw degenerate_error("length_diameter_ratio: all samples coincide");
  return curve.length() / diam;
}

InclusionResult inclusion_residual(const UnitSpeedCurve& curve,
                                   const ConvexFoliation& fol, int n_samples,
                                   double h_fd, int n_probes) {
  if (n_samples < 1) throw input_error("inclusion_residual: needs n_samples >= 1");
  const double L = curve.length();
  if (!(L > 2.0 * h_fd))
    throw input_error("inclusion_residual: curve too short for the fd spacing");
  InclusionResult res;
  res.max_residual = -std::numeric_limits<double>::infinity();
  const auto& knots = curve.knots();
  for (int k = 0; k < n_samples; ++k) {
    // Golden-ratio cell offset: keeps samples off any uniform knot grid.
    double s = h_fd + (L - 2.0 * h_fd) * (k + 0.61803398874989485) / n_samples;
    // The inclusion holds a.e.; polygon vertices are the exception set.
    auto it = std::lower_bound(knots.begin(), knots.end(), s - h_fd);
    if (it != knots.end() && *it <= s + h_fd) {
      ++res.skipped;
      continue;
    }
    Vec tangent = (curve.eval(s + h_fd) - curve.eval(s - h_fd)) / (2.0 * h_fd);
    if (tangent.norm() < 1e-12) {
      ++res.skipped;
      continue;
    }
    Vec p = curve.eval(s);
    auto set = fol.set_at(fol.index_of(p));
    double r = normal_residual(*set, p, (-tangent).eval(), probe_points(*set, n_probes));
    res.max_residual = std::max(res.max_residual, r);
    ++res.evaluated;
  }
  if (res.evaluated == 0)
    throw numerical_error("inclusion_residual: every sample was skipped",
                          static_cast<double>(res.skipped));
  return res;
}

double tangent_continuity(const UnitSpeedCurve& curve, double window) {
  if (!(window > 0.0)) throw input_error("tangent_continuity: window must be positive");
  const double L = curve.length();
  std::vector<Vec> tangents;
  for (double s = window; s + window < L; s += window) {
    Vec t = curve.eval(s + window) - curve.eval(s - window);
    double n = t.norm();
    if (n > 1e-14) tangents.push_back(t / n);
  }
  double worst = 0.0;
  for (std::size_t i = 0; i + 1 < tangents.size(); ++i) {
    double c = std::clamp(tangents[i].dot(tangents[i + 1]), -1.0, 1.0);
    worst = std::max(worst, std::acos(c));
  }
  return worst;
}

ReferenceFlowResult reference_flow(const FunctionSpec& f, const Vec& x0,
                                   double stop_level, double arclength_budget,
                                   double step, double gradient_floor) {
  if (!f.gradient) throw input_error("reference_flow: function has no gradient");
  require_dim(x0, f.dim, "reference_flow x0");
  if (!(step > 0.0) || !(arclength_budget > 0.0))
    throw input_error("reference_flow: step and budget must be positive");

  bool floor_hit = false;
  auto field = [&](const Vec& x) -> Vec {
    Vec g = f.gradient(x);
    double n = g.norm();
    if (n < gradient_floor) {
      floor_hit = true;
      return Vec::Zero(x.size());
    }
    return -g / n;
  };
  auto rk4 = [&](const Vec& x, double h) -> Vec {
    Vec k1 = field(x);
    if (floor_hit) return x;
    Vec k2 = field(x + 0.5 * h * k1);
    if (floor_hit) return x;
    Vec k3 = field(x + 0.5 * h * k2);
    if (floor_hit) return x;
    Vec k4 = field(x + h * k3);
    if (floor_hit) return x;
    return x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  };

  std::vector<Vec> pts{x0};
  Vec x = x0;
  double travelled = 0.0;
  while (travelled < arclength_budget && f.value(x) > stop_level) {
    Vec next = rk4(x, step);
    if (floor_hit) break;
    if (f.value(next) < stop_level) {
      // Land on the stopping level by bisecting the substep length.
      double lo = 0.0, hi = step;
      for (int it = 0; it < 100; ++it) {
        double mid = 0.5 * (lo + hi);
        (f.value(rk4(x, mid)) > stop_level ? lo : hi) = mid;
        if (floor_hit) break;
      }
      next = rk4(x, 0.5 * (lo + hi));
      pts.push_back(next);
      x = next;
      break;
    }
    travelled += step;
    pts.push_back(next);
    x = next;
  }
  ReferenceFlowResult out{UnitSpeedCurve(std::move(pts)), floor_hit, f.value(x)};
  return out;
}

double sup_distance(const UnitSpeedCurve& lhs, const UnitSpeedCurve& rhs, int grid) {
  if (grid < 2) throw input_error("sup_distance: grid must have >= 2 points");
  double L = std::max(lhs.length(), rhs.length());
  double sup = 0.0;
  for (int k = 0; k < grid; ++k) {
    double s = L * k / (grid - 1);
    sup = std::max(sup, (lhs.eval(s) - rhs.eval(s)).norm());
  }
  return sup;
}

}  // namespace folia
