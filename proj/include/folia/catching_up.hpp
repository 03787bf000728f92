#pragma once

#include <utility>
#include <vector>

#include "folia/foliation.hpp"
#include "folia/types.hpp"

namespace folia {

enum class PartitionScheme { uniform, geometric };

/// Strictly decreasing levels b = l[0] > ... > l[n] = a.
struct Partition {
  std::vector<double> levels;

  static Partition uniform(double a, double b, int steps);
  // Levels accumulate geometrically toward a with the given ratio.
  static Partition geometric(double a, double b, int steps, double ratio = 0.5);
  static Partition from_levels(std::vector<double> levels);

  int steps() const { return static_cast<int>(levels.size()) - 1; }
  double mesh() const;
};

struct PolygonalTrajectory {
  std::vector<Vec> vertices;       // x_0 .. x_n (repeated when a step is zero)
  std::vector<double> levels;      // partition levels, aligned with vertices
  std::vector<double> arclengths;  // cumulative, arclengths[0] = 0
  double total_length = 0.0;
  double dist_to_target = 0.0;     // dist(x_0, S_a)
  double extension_length = 0.0;   // K_cap * dist_to_target
};

struct CatchingUpConfig {
  double k_cap = 32.0;  // assertion ceiling standing in for the dimensional constant
  double membership = kMembershipTol;
};

/// The projection recursion x_i = P_{S_{tau_i}}(x_{i-1}). A start already in
/// S_a yields a single-vertex trajectory of length zero.
PolygonalTrajectory run_partition(const ConvexFoliation& fol, const Vec& x0,
                                  const Partition& part,
                                  const CatchingUpConfig& cfg = {});

/// Piecewise-linear curve in unit-speed parametrization. eval clamps outside
/// [0, length], which realizes the constant extension of the domain.
class UnitSpeedCurve {
 public:
  explicit UnitSpeedCurve(std::vector<Vec> points);

  double length() const { return knots_.back(); }
  Vec eval(double s) const;
  std::vector<Vec> sample(int n) const;  // n >= 2 equispaced points on [0, L]

  const std::vector<Vec>& points() const { return points_; }
  const std::vector<double>& knots() const { return knots_; }

 private:
  std::vector<Vec> points_;    // consecutive duplicates removed
  std::vector<double> knots_;  // cumulative arclength
};

/// Unit-speed curve of the polygonal trajectory on [0, L].
/// Throws degenerate_error when the trajectory has zero length.
UnitSpeedCurve arclength_parametrize(const PolygonalTrajectory& traj);

/// Domain extension to [0, L*]: constant at the final vertex past L.
struct ExtendedCurve {
  UnitSpeedCurve base;
  double domain_end;  // L*
  Vec eval(double s) const { return base.eval(std::min(s, domain_end)); }
};

ExtendedCurve extend(const PolygonalTrajectory& traj);

struct RefinementRecord {
  int steps = 0;
  double mesh = 0.0;
  int vertex_count = 0;
  double total_length = 0.0;
  double sup_distance = 0.0;  // vs previous level on the common grid; NaN first
};

struct RefinementReport {
  std::vector<RefinementRecord> records;
  bool converged = false;
  double eps_conv = 0.0;
  double extension_length = 0.0;
};

struct RefineConfig {
  PartitionScheme scheme = PartitionScheme::uniform;
  double eps_conv = 1e-6;
  int comparison_grid = 4096;
  CatchingUpConfig catching_up;
};

/// Runs the recursion over a strictly increasing schedule of partition sizes
/// and compares consecutive extended curves on a fixed grid of [0, L*].
/// Non-convergence is reported in the flag, never thrown.
std::pair<PolygonalTrajectory, RefinementReport> refine(
    const ConvexFoliation& fol, const Vec& x0, const std::vector<int>& schedule,
    const RefineConfig& cfg = {});

}  // namespace folia
