#include "folia/catching_up.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace folia {

Partition Partition::uniform(double a, double b, int steps) {
  if (steps < 1) throw input_error("partition: needs at least one step");
  std::vector<double> levels(static_cast<std::size_t>(steps) + 1);
  for (int i = 0; i <= steps; ++i)
    levels[static_cast<std::size_t>(i)] = b + (a - b) * i / steps;
  levels.front() = b;
  levels.back() = a;
  return from_levels(std::move(levels));
}

Partition Partition::geometric(double a, double b, int steps, double ratio) {
  if (steps < 1) throw input_error("partition: needs at least one step");
  if (!(ratio > 0.0 && ratio < 1.0))
    throw input_error("partition: geometric ratio must lie in (0,1)");
  std::vector<double> levels(static_cast<std::size_t>(steps) + 1);
  double scale = 1.0;
  for (int i = 0; i < steps; ++i) {
    levels[static_cast<std::size_t>(i)] = a + (b - a) * scale;
    scale *= ratio;
  }
  levels.back() = a;
  levels.front() = b;
  return from_levels(std::move(levels));
}

Partition Partition::from_levels(std::vector<double> levels) {
  if (levels.size() < 2) throw input_error("partition: needs at least two levels");
  for (std::size_t i = 0; i + 1 < levels.size(); ++i)
    if (!(levels[i] > levels[i + 1]))
      throw input_error("partition: levels must decrease strictly");
  Partition p;
  p.levels = std::move(levels);
  return p;
}

double Partition::mesh() const {
  double m = 0.0;
  for (std::size_t i = 0; i + 1 < levels.size(); ++i)
    m = std::max(m, levels[i] - levels[i + 1]);
  return m;
}

PolygonalTrajectory run_partition(const ConvexFoliation& fol, const Vec& x0,
                                  const Partition& part, const CatchingUpConfig& cfg) {
  require_finite(x0, "run_partition x0");
  require_dim(x0, fol.dim(), "run_partition x0");
  if (std::abs(part.levels.front() - fol.t_max()) > kIndexTol ||
      std::abs(part.levels.back() - fol.t_min()) > kIndexTol)
    throw input_error("run_partition: partition does not span [a,b]");
  auto outer = fol.set_at(fol.t_max());
  if (!outer->contains(x0, cfg.membership))
    throw input_error("run_partition: x0 is not a member of S_b");
  auto target = fol.set_at(fol.t_min());

  PolygonalTrajectory traj;
  traj.dist_to_target = target->distance(x0);
  traj.extension_length = cfg.k_cap * traj.dist_to_target;
  if (target->contains(x0, cfg.membership)) {
    traj.vertices = {x0};
    traj.levels = {fol.t_min()};
    traj.arclengths = {0.0};
    return traj;
  }

  traj.vertices.reserve(part.levels.size());
  traj.levels = part.levels;
  traj.arclengths.reserve(part.levels.size());
  traj.vertices.push_back(x0);
  traj.arclengths.push_back(0.0);
  Vec x = x0;
  for (std::size_t i = 1; i < part.levels.size(); ++i) {
    Vec y;
    try {
      y = fol.set_at(part.levels[i])->project(x);
    } catch (const numerical_error& e) {
      throw numerical_error("run_partition: projection failed at level index " +
                                std::to_string(i) + " (t=" +
                                std::to_string(part.levels[i]) + "): " + e.what(),
                            e.residual);
    }
    traj.total_length += (y - x).norm();
    traj.arclengths.push_back(traj.total_length);
    traj.vertices.push_back(y);
    x = y;
  }
  if (traj.total_length > traj.extension_length)
    throw numerical_error("run_partition: length bound ceiling exceeded",
                          traj.total_length - traj.extension_length);
  return traj;
}

UnitSpeedCurve::UnitSpeedCurve(std::vector<Vec> points) {
  if (points.empty()) throw input_error("curve: needs at least one point");
  points_.push_back(points.front());
  knots_.push_back(0.0);
  for (std::size_t i = 1; i < points.size(); ++i) {
    double seg = (points[i] - points_.back()).norm();
    if (seg > 0.0) {
      points_.push_back(points[i]);
      knots_.push_back(knots_.back() + seg);
    }
  }
}

Vec UnitSpeedCurve::eval(double s) const {
  if (s <= 0.0 || points_.size() == 1) return points_.front();
  if (s >= knots_.back()) return points_.back();
  auto it = std::upper_bound(knots_.begin(), knots_.end(), s);
  std::size_t hi = static_cast<std::size_t>(it - knots_.begin());
  std::size_t lo = hi - 1;
  double w = (s - knots_[lo]) / (knots_[hi] - knots_[lo]);
  return (1.0 - w) * points_[lo] + w * points_[hi];
}

std::vector<Vec> UnitSpeedCurve::sample(int n) const {
  if (n < 2) throw input_error("curve sample: needs n >= 2");
  std::vector<Vec> out;
  out.reserve(static_cast<std::size_t>(n));
  double L = length();
  for (int k = 0; k < n; ++k) out.push_back(eval(L * k / (n - 1)));
  return out;
}

UnitSpeedCurve arclength_parametrize(const PolygonalTrajectory& traj) {
  if (!(traj.total_length > 0.0))
    throw degenerate_error("arclength_parametrize: trajectory has zero length");
  return UnitSpeedCurve(traj.vertices);
}

ExtendedCurve extend(const PolygonalTrajectory& traj) {
  return ExtendedCurve{UnitSpeedCurve(traj.vertices),
                       std::max(traj.extension_length, traj.total_length)};
}

std::pair<PolygonalTrajectory, RefinementReport> refine(
    const ConvexFoliation& fol, const Vec& x0, const std::vector<int>& schedule,
    const RefineConfig& cfg) {
  if (schedule.empty()) throw input_error("refine: empty schedule");
  for (std::size_t i = 0; i + 1 < schedule.size(); ++i)
    if (!(schedule[i] < schedule[i + 1]))
      throw input_error("refine: schedule must be strictly increasing");

  RefinementReport report;
  report.eps_conv = cfg.eps_conv;
  const double a = fol.t_min(), b = fol.t_max();

  PolygonalTrajectory finest;
  std::vector<Vec> prev_grid;
  for (std::size_t lvl = 0; lvl < schedule.size(); ++lvl) {
    Partition part = cfg.scheme == PartitionScheme::uniform
                         ? Partition::uniform(a, b, schedule[lvl])
                         : Partition::geometric(a, b, schedule[lvl]);
    PolygonalTrajectory traj = run_partition(fol, x0, part, cfg.catching_up);
    ExtendedCurve curve = extend(traj);
    report.extension_length = curve.domain_end;

    std::vector<Vec> grid;
    grid.reserve(static_cast<std::size_t>(cfg.comparison_grid));
    for (int k = 0; k < cfg.comparison_grid; ++k)
      grid.push_back(curve.eval(curve.domain_end * k / (cfg.comparison_grid - 1)));

    RefinementRecord rec;
    rec.steps = schedule[lvl];
    rec.mesh = part.mesh();
    rec.vertex_count = static_cast<int>(traj.vertices.size());
    rec.total_length = traj.total_length;
    rec.sup_distance = std::numeric_limits<double>::quiet_NaN();
    if (!prev_grid.empty()) {
      double sup = 0.0;
      for (std::size_t k = 0; k < grid.size(); ++k)
        sup = std::max(sup, (grid[k] - prev_grid[k]).norm());
      rec.sup_distance = sup;
    }
    report.records.push_back(rec);
    prev_grid = std::move(grid);
    finest = std::move(traj);
  }
  report.converged = report.records.size() >= 2 &&
                     report.records.back().sup_distance < cfg.eps_conv;
  return {std::move(finest), std::move(report)};
}

}  // namespace folia
