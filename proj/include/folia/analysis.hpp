#pragma once

#include <optional>
#include <string>

#include "folia/catching_up.hpp"
#include "folia/foliation.hpp"
#include "folia/functions.hpp"
#include "folia/types.hpp"

namespace folia {

struct AnalysisReport {
  double self_contracted_max_violation = 0.0;
  double length_diameter_ratio = 0.0;
  double inclusion_residual_max = 0.0;
  int inclusion_samples = 0;
  int inclusion_skipped = 0;
  std::optional<double> tangent_gap_coarse;  // window 1e-2
  std::optional<double> tangent_gap_fine;    // window 1e-3
  std::optional<double> reference_sup_distance;
  std::string reference_note;
};

/// Max over sampled ordered triples s1 < s2 < s3 of
/// |g(s2) - g(s3)| - |g(s1) - g(s3)|. Positive values witness a violation of
/// self-contractedness; <= tol certifies the property on the sample.
double check_self_contracted(const UnitSpeedCurve& curve, int n_triples,
                             std::uint64_t seed = 0);

/// Total length divided by the diameter of the vertex cloud (the empirical
/// stand-in for the dimensional length constant).
double length_diameter_ratio(const UnitSpeedCurve& curve);

struct InclusionResult {
  double max_residual = 0.0;
  int evaluated = 0;
  int skipped = 0;  // samples within h_fd of a polygon vertex
};

/// Normal-cone inclusion residual of -d(gamma)/ds along the curve, against the
/// foliation set through each sampled point.
InclusionResult inclusion_residual(const UnitSpeedCurve& curve,
                                   const ConvexFoliation& fol, int n_samples,
                                   double h_fd = 1e-5, int n_probes = 64);

/// Max angle between consecutive finite-difference tangents taken at arclength
/// spacing `window`. Decreases with the window on smooth foliations.
double tangent_continuity(const UnitSpeedCurve& curve, double window);

struct ReferenceFlowResult {
  UnitSpeedCurve curve;
  bool gradient_floor_hit = false;
  double final_value = 0.0;  // f at the endpoint
};

/// High-accuracy RK4 integration of the normalized gradient flow
/// dx/ds = -grad f / |grad f|, stopped at f = stop_level or at the arclength
/// budget. A gradient norm below the floor returns a partial curve + flag.
ReferenceFlowResult reference_flow(const FunctionSpec& f, const Vec& x0,
                                   double stop_level, double arclength_budget,
                                   double step = 1e-4,
                                   double gradient_floor = 1e-8);

/// Sup distance over a common grid of [0, max(L1, L2)], with both curves held
/// constant past their own length.
double sup_distance(const UnitSpeedCurve& lhs, const UnitSpeedCurve& rhs,
                    int grid = 4096);

}  // namespace folia
