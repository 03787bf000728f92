#include <cmath>

#include <doctest.h>
#include <nlohmann/json.hpp>

#include "folia/foliation.hpp"

using namespace folia;
using nlohmann::json;

namespace {

Vec v2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

FunctionSpec fn(const std::string& name, const json& params = json::object()) {
  return make_function(name, params, 2);
}

}  // namespace

TEST_CASE("sublevel foliation index map") {
  auto balls = make_sublevel_foliation(fn("norm"), 1.0, 5.0, v2(0, 0));
  CHECK(balls->index_of(v2(0, 3)) == doctest::Approx(3.0).epsilon(1e-15));

  auto sqrt_balls =
      make_sublevel_foliation(fn("sqrt_norm"), 1.0, std::sqrt(5.0), v2(0, 0));
  CHECK(sqrt_balls->index_of(v2(0, 3)) == doctest::Approx(std::sqrt(3.0)).epsilon(1e-15));

  auto boxes = make_sublevel_foliation(fn("box_max"), 0.1, 2.0, v2(0, 0));
  CHECK(boxes->index_of(v2(1.0, 0.5)) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("sublevel foliation rejects a missing or bad witness") {
  CHECK_THROWS_AS(make_sublevel_foliation(fn("norm"), 1.0, 5.0, v2(3, 3)),
                  input_error);
}

TEST_CASE("quasiconvexity sampling finds the planted violation") {
  FunctionSpec wavy = fn("sqnorm_cos_drift");
  try {
    check_quasiconvexity(wavy);
    FAIL("expected a quasiconvexity violation");
  } catch (const validation_error& e) {
    REQUIRE(e.witness_a.size() == 2);
    REQUIRE(e.witness_b.size() == 2);
    double mid = wavy.value(0.5 * (e.witness_a + e.witness_b));
    double cap = std::max(wavy.value(e.witness_a), wavy.value(e.witness_b));
    CHECK(mid > cap + 1e-9);  // the reported pair is a genuine witness
  }
  for (const char* name : {"norm", "sqnorm", "sqrt_norm", "box_max"})
    CHECK_NOTHROW(check_quasiconvexity(fn(name)));
}

TEST_CASE("parametric foliation index by bisection") {
  auto ells = make_parametric_foliation(
      "scaled_ellipsoids", json{{"semi_axes", {2.0, 1.0}}}, 1.0, 3.0, 2);
  // Bisection accuracy is anchored by the membership tolerance (1e-9).
  CHECK(ells->index_of(v2(2, 0)) == doctest::Approx(1.0).epsilon(1e-8));

  auto boxes = make_parametric_foliation("boxes", json::object(), 0.5, 2.0, 2);
  CHECK(boxes->index_of(v2(1, 1)) == doctest::Approx(1.0).epsilon(1e-8));

  // Bracket failures.
  CHECK_THROWS_AS(boxes->index_of(v2(5, 5)), input_error);     // outside S_b
  CHECK_THROWS_AS(boxes->index_of(v2(0.1, 0.1)), input_error); // inside int S_a
  // Ties at the inner boundary map to a.
  CHECK(boxes->index_of(v2(0.5, 0.25)) == doctest::Approx(0.5));
}

TEST_CASE("translated balls violating nesting are rejected at construction") {
  json params{{"velocity", {1.5, 0.0}}};
  CHECK_THROWS_AS(
      make_parametric_foliation("translated_balls", params, 0.5, 2.0, 2),
      validation_error);
  // A slow enough translation nests fine.
  json ok{{"velocity", {0.25, 0.0}}};
  CHECK_NOTHROW(make_parametric_foliation("translated_balls", ok, 0.5, 2.0, 2));
}

TEST_CASE("validate_nesting reports margins and violations") {
  auto balls = make_sublevel_foliation(fn("norm"), 1.0, 5.0, v2(0, 0));
  NestingReport rep = validate_nesting(*balls, 9, 16);
  CHECK(rep.passed);
  // Consecutive sampled levels are 0.5 apart; margin equals the gap.
  CHECK(rep.min_margin == doctest::Approx(0.5).epsilon(1e-6));

  auto boxes = make_sublevel_foliation(fn("box_max"), 0.1, 2.0, v2(0, 0));
  NestingReport box_rep = validate_nesting(*boxes, 16, 32);
  CHECK(box_rep.passed);
  CHECK(box_rep.min_margin > 0.0);

  auto bad = make_parametric_foliation(
      "translated_balls", json{{"velocity", {1.5, 0.0}}}, 0.5, 2.0, 2,
      /*check_nesting=*/false);
  NestingReport bad_rep = validate_nesting(*bad, 16, 32);
  CHECK_FALSE(bad_rep.passed);
  CHECK(!bad_rep.violations.empty());

  CHECK_THROWS_AS(validate_nesting(*balls, 1, 8), input_error);
}

TEST_CASE("index_of is monotone with membership") {
  auto ells = make_parametric_foliation(
      "scaled_ellipsoids", json{{"semi_axes", {2.0, 1.0}}}, 0.5, 3.0, 2);
  for (double r : {0.7, 1.1, 1.9, 2.6}) {
    Vec x = v2(0.3 * r, 0.0);
    double idx = ells->index_of(ells->set_at(r)->boundary_samples(8)[3]);
    CHECK(idx == doctest::Approx(r).epsilon(1e-9));
    for (double t : {0.6, 1.0, 1.5, 2.0, 2.9}) {
      bool strictly_inside = ells->set_at(t)->interior_depth(
                                 ells->set_at(r)->boundary_samples(8)[3]) > 1e-9;
      if (strictly_inside) CHECK(idx < t + 1e-9);
      if (idx < t - 1e-9) CHECK(strictly_inside);
    }
    (void)x;
  }
}

TEST_CASE("set-valued continuity modulus shrinks with delta") {
  auto ells = make_sublevel_foliation(
      fn("ellipsoid_quadratic", json{{"semi_axes", {2.0, 1.0}}}), 0.25, 2.0,
      v2(0, 0));
  ContinuityModulus mod = continuity_modulus(*ells, 1.0, {0.4, 0.2, 0.1, 0.05}, 96);
  REQUIRE(mod.hausdorff.size() == 4);
  for (std::size_t i = 0; i + 1 < mod.hausdorff.size(); ++i)
    CHECK(mod.hausdorff[i + 1] < mod.hausdorff[i]);
}
