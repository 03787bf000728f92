#include <cmath>

#include <doctest.h>
#include <nlohmann/json.hpp>

#include "folia/analysis.hpp"

using namespace folia;
using nlohmann::json;

namespace {

Vec v2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

UnitSpeedCurve segment(const Vec& from, const Vec& to, int n = 32) {
  std::vector<Vec> pts;
  for (int k = 0; k < n; ++k)
    pts.push_back(from + (to - from) * (static_cast<double>(k) / (n - 1)));
  return UnitSpeedCurve(std::move(pts));
}

// Unit circle arc of the given angle, sampled densely.
UnitSpeedCurve arc(double angle, int n = 2048) {
  std::vector<Vec> pts;
  for (int k = 0; k < n; ++k) {
    double th = angle * k / (n - 1);
    pts.push_back(v2(std::cos(th), std::sin(th)));
  }
  return UnitSpeedCurve(std::move(pts));
}

}  // namespace

TEST_CASE("self-contracted check") {
  CHECK(check_self_contracted(segment(v2(0, 0), v2(3, 4)), 500) <= 0.0);

  // A long circular arc is a genuine counterexample: with the far endpoint
  // fixed, the chord distance 2 sin((s3 - s)/2) first grows along the curve
  // once the swept angle exceeds pi.
  double violation = check_self_contracted(arc(1.5 * M_PI), 1000);
  CHECK(violation > 0.1);

  // Arcs of angle at most pi stay self-contracted.
  CHECK(check_self_contracted(arc(0.75 * M_PI), 1000) <= 1e-9);
}

TEST_CASE("length/diameter ratio") {
  CHECK(length_diameter_ratio(segment(v2(1, 2), v2(4, 6))) ==
        doctest::Approx(1.0).epsilon(1e-12));
  UnitSpeedCurve bend({v2(0, 0), v2(1, 0), v2(1, 1)});
  CHECK(length_diameter_ratio(bend) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  std::vector<Vec> same{v2(1, 1), v2(1, 1), v2(1, 1)};
  CHECK_THROWS_AS(length_diameter_ratio(UnitSpeedCurve(same)), degenerate_error);
}

TEST_CASE("inclusion residual on radial and facet geometry") {
  auto balls = make_sublevel_foliation(make_function("norm", json::object(), 2),
                                       1.0, 5.0, v2(0, 0));
  UnitSpeedCurve radial = segment(v2(3, 4), v2(0.6, 0.8), 256);
  InclusionResult res = inclusion_residual(radial, *balls, 64);
  CHECK(res.max_residual <= 1e-6);
  CHECK(res.evaluated > 0);

  auto boxes = make_sublevel_foliation(make_function("box_max", json::object(), 2),
                                       0.05, 1.5, v2(0, 0));
  // Along a facet the curve direction is the facet normal.
  UnitSpeedCurve facet = segment(v2(1.4, 0.2), v2(0.3, 0.2), 128);
  InclusionResult fres = inclusion_residual(facet, *boxes, 64);
  CHECK(fres.max_residual <= 1e-9);
}

TEST_CASE("tangent continuity") {
  CHECK(tangent_continuity(segment(v2(0, 0), v2(5, 0), 256), 1e-2) == 0.0);
  // A right-angle bend shows a large gap at any window.
  UnitSpeedCurve bend({v2(0, 0), v2(1, 0), v2(1, 1)});
  CHECK(tangent_continuity(bend, 1e-2) > 0.5);
}

TEST_CASE("reference flow: radial closed form") {
  FunctionSpec f = make_function("sqnorm", json::object(), 2);
  Vec x0 = v2(3, 4);
  ReferenceFlowResult ref = reference_flow(f, x0, 1.0, 10.0);
  CHECK_FALSE(ref.gradient_floor_hit);
  CHECK(ref.final_value == doctest::Approx(1.0).epsilon(1e-10));
  // The normalized flow of |x|^2 is the radial segment toward the origin.
  Vec dir = x0 / x0.norm();
  for (double s = 0.0; s <= ref.curve.length(); s += 0.1) {
    Vec want = x0 - s * dir;
    CHECK((ref.curve.eval(s) - want).norm() < 1e-9);
  }
}

TEST_CASE("reference flow: step-halving self-consistency") {
  FunctionSpec f =
      make_function("ellipsoid_quadratic", json{{"semi_axes", {2.0, 1.0}}}, 2);
  ReferenceFlowResult coarse = reference_flow(f, v2(2, 1), 0.1, 10.0, 1e-4);
  ReferenceFlowResult fine = reference_flow(f, v2(2, 1), 0.1, 10.0, 5e-5);
  Vec end_c = coarse.curve.points().back();
  Vec end_f = fine.curve.points().back();
  CHECK((end_c - end_f).norm() < 1e-8);
}

TEST_CASE("reference flow: normalization erases reparametrization") {
  FunctionSpec f1 = make_function("norm", json::object(), 2);
  FunctionSpec f2 = make_function("sqrt_norm", json::object(), 2);
  Vec x0 = v2(3, 4);
  Vec g1 = f1.gradient(x0).normalized();
  Vec g2 = f2.gradient(x0).normalized();
  CHECK((g1 - g2).norm() < 1e-14);
  ReferenceFlowResult r1 = reference_flow(f1, x0, 1.0, 10.0, 1e-3);
  ReferenceFlowResult r2 = reference_flow(f2, x0, 1.0, 10.0, 1e-3);
  CHECK(sup_distance(r1.curve, r2.curve, 512) < 1e-8);
}

TEST_CASE("reference flow: gradient floor flags a partial curve") {
  FunctionSpec f = make_function("sqnorm", json::object(), 2);
  // A start at the singular point has no flow direction at all.
  ReferenceFlowResult ref = reference_flow(f, v2(0, 0), -1.0, 10.0, 1e-3);
  CHECK(ref.gradient_floor_hit);
  CHECK(ref.curve.length() == 0.0);
}
