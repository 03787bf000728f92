#include <cmath>
#include <random>

#include <doctest.h>
#include <nlohmann/json.hpp>

#include "folia/catching_up.hpp"
#include "folia/foliation.hpp"

using namespace folia;
using nlohmann::json;

namespace {

Vec v2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

std::shared_ptr<SublevelFoliation> ball_foliation(double a = 1.0, double b = 5.0) {
  return make_sublevel_foliation(make_function("norm", json::object(), 2), a, b,
                                 v2(0, 0));
}

std::shared_ptr<SublevelFoliation> ellipsoid_foliation(double a, double b) {
  return make_sublevel_foliation(
      make_function("ellipsoid_quadratic", json{{"semi_axes", {2.0, 1.0}}}, 2), a,
      b, v2(0, 0));
}

// Test-local projection oracle: golden-section search over the boundary angle
// of the ellipse sum (x1/a1)^2 + (x2/a2)^2 = t.
Vec ellipse_step_oracle(double t, const Vec& x) {
  double ax = 2.0 * std::sqrt(t), ay = std::sqrt(t);
  auto point = [&](double th) { return v2(ax * std::cos(th), ay * std::sin(th)); };
  auto dist = [&](double th) { return (point(th) - x).norm(); };
  double best = 0.0, bestd = dist(0.0);
  const int n = 5000;
  for (int k = 1; k < n; ++k) {
    double th = 2.0 * M_PI * k / n;
    if (dist(th) < bestd) {
      bestd = dist(th);
      best = th;
    }
  }
  double lo = best - 2.0 * M_PI / n, hi = best + 2.0 * M_PI / n;
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = hi - phi * (hi - lo), d = lo + phi * (hi - lo);
  for (int it = 0; it < 200; ++it) {
    if (dist(c) < dist(d)) {
      hi = d;
      d = c;
      c = hi - phi * (hi - lo);
    } else {
      lo = c;
      c = d;
      d = lo + phi * (hi - lo);
    }
  }
  return point(0.5 * (lo + hi));
}

}  // namespace

TEST_CASE("partitions") {
  Partition u = Partition::uniform(1.0, 5.0, 4);
  CHECK(u.levels == std::vector<double>{5.0, 4.0, 3.0, 2.0, 1.0});
  CHECK(u.mesh() == doctest::Approx(1.0));

  Partition g = Partition::geometric(0.0, 1.0, 4, 0.5);
  CHECK(g.levels.front() == 1.0);
  CHECK(g.levels.back() == 0.0);
  for (std::size_t i = 0; i + 1 < g.levels.size(); ++i)
    CHECK(g.levels[i] > g.levels[i + 1]);

  CHECK_THROWS_AS(Partition::from_levels({1.0, 1.0, 0.0}), input_error);
  CHECK_THROWS_AS(Partition::uniform(1.0, 5.0, 0), input_error);
}

TEST_CASE("radial recursion is exact on concentric balls") {
  auto fol = ball_foliation();
  PolygonalTrajectory traj =
      run_partition(*fol, v2(3, 4), Partition::uniform(1.0, 5.0, 4));
  REQUIRE(traj.vertices.size() == 5);
  const double expected[5][2] = {
      {3.0, 4.0}, {2.4, 3.2}, {1.8, 2.4}, {1.2, 1.6}, {0.6, 0.8}};
  for (int i = 0; i < 5; ++i) {
    CHECK(traj.vertices[i][0] == doctest::Approx(expected[i][0]).epsilon(1e-14));
    CHECK(traj.vertices[i][1] == doctest::Approx(expected[i][1]).epsilon(1e-14));
  }
  CHECK(traj.total_length == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(traj.dist_to_target == doctest::Approx(4.0).epsilon(1e-14));
}

TEST_CASE("start already in S_a degenerates to one vertex") {
  auto fol = ball_foliation();
  PolygonalTrajectory traj =
      run_partition(*fol, v2(0.6, 0.8), Partition::uniform(1.0, 5.0, 8));
  CHECK(traj.vertices.size() == 1);
  CHECK(traj.total_length == 0.0);
  CHECK_THROWS_AS(arclength_parametrize(traj), degenerate_error);
}

TEST_CASE("x0 outside S_b is rejected") {
  auto fol = ball_foliation();
  CHECK_THROWS_AS(run_partition(*fol, v2(6, 0), Partition::uniform(1.0, 5.0, 4)),
                  input_error);
}

TEST_CASE("each ellipsoid step matches the independent oracle") {
  auto fol = ellipsoid_foliation(0.5, 2.0);
  Vec x0 = v2(2, 1);
  Partition part = Partition::uniform(0.5, 2.0, 64);
  PolygonalTrajectory traj = run_partition(*fol, x0, part);
  REQUIRE(traj.vertices.size() == 65);
  for (std::size_t i = 1; i < traj.vertices.size(); ++i) {
    const Vec& prev = traj.vertices[i - 1];
    double t = part.levels[i];
    if (fol->index_of(prev) <= t) {
      CHECK((traj.vertices[i] - prev).norm() == 0.0);  // zero-length step kept
    } else {
      Vec want = ellipse_step_oracle(t, prev);
      CHECK((traj.vertices[i] - want).norm() < 1e-6);
    }
  }
}

TEST_CASE("trajectory invariants on test families") {
  auto fol = ellipsoid_foliation(0.25, 2.0);
  Vec x0 = v2(2, 1);
  Partition part = Partition::uniform(0.25, 2.0, 128);
  PolygonalTrajectory traj = run_partition(*fol, x0, part);

  auto target = fol->set_at(fol->t_min());
  Vec foot = target->project(x0);
  double radius = traj.dist_to_target;

  for (std::size_t i = 0; i < traj.vertices.size(); ++i) {
    // Membership at each level.
    CHECK(fol->set_at(traj.levels[i])->contains(traj.vertices[i], 1e-8));
    // Confinement in the ball around the projection of x0 onto S_a.
    CHECK((traj.vertices[i] - foot).norm() <= radius + 1e-9);
  }
  // Fejer monotonicity toward every probe of S_a.
  for (const Vec& z : probe_points(*target, 32)) {
    for (std::size_t i = 0; i + 1 < traj.vertices.size(); ++i)
      CHECK((traj.vertices[i] - z).norm() >=
            (traj.vertices[i + 1] - z).norm() - kProjTol);
  }
  // Normal-cone variational inequality along each nonzero step.
  for (std::size_t i = 0; i + 1 < traj.vertices.size(); ++i) {
    Vec step = traj.vertices[i] - traj.vertices[i + 1];
    if (step.norm() < 1e-12) continue;
    auto set = fol->set_at(traj.levels[i + 1]);
    CHECK(normal_residual(*set, traj.vertices[i + 1], step,
                          probe_points(*set, 48)) <= kProjTol);
  }
  // Level monotonicity across distinct vertices.
  for (std::size_t i = 0; i + 1 < traj.vertices.size(); ++i)
    if ((traj.vertices[i + 1] - traj.vertices[i]).norm() > 1e-12)
      CHECK(fol->index_of(traj.vertices[i + 1]) < fol->index_of(traj.vertices[i]));
}

TEST_CASE("extension and Lipschitz property") {
  auto fol = ball_foliation();
  PolygonalTrajectory traj =
      run_partition(*fol, v2(3, 4), Partition::uniform(1.0, 5.0, 16));
  ExtendedCurve curve = extend(traj);
  CHECK(curve.domain_end == doctest::Approx(32.0 * 4.0));
  CHECK((curve.eval(0.0) - v2(3, 4)).norm() == 0.0);
  // Constant past the total length.
  CHECK((curve.eval(curve.domain_end) - curve.eval(traj.total_length)).norm() == 0.0);

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, curve.domain_end);
  for (int k = 0; k < 1000; ++k) {
    double s = u(rng), t = u(rng);
    CHECK((curve.eval(s) - curve.eval(t)).norm() <= std::abs(s - t) + 1e-12);
  }
}

TEST_CASE("refinement diagnostics") {
  SUBCASE("concentric balls are exact at every mesh") {
    auto fol = ball_foliation();
    auto [traj, rep] = refine(*fol, v2(3, 4), {8, 16, 32, 64});
    CHECK(rep.converged);
    for (std::size_t i = 1; i < rep.records.size(); ++i)
      CHECK(rep.records[i].sup_distance < 1e-12);
    for (const auto& r : rep.records)
      CHECK(r.total_length == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(traj.vertices.size() == 65);
  }
  SUBCASE("ellipsoid sup-distances decrease monotonically") {
    auto fol = ellipsoid_foliation(0.1, 2.0);
    auto [traj, rep] = refine(*fol, v2(2, 1), {8, 16, 32, 64, 128, 256});
    for (std::size_t i = 2; i < rep.records.size(); ++i)
      CHECK(rep.records[i].sup_distance < rep.records[i - 1].sup_distance);
    (void)traj;
  }
  SUBCASE("nested squares from a diagonal start converge") {
    auto boxes = make_sublevel_foliation(make_function("box_max", json::object(), 2),
                                         0.05, 1.5, v2(0, 0));
    auto [traj, rep] =
        refine(*boxes, v2(1.5, 1.5), {8, 16, 32, 64, 128, 256, 512, 1024});
    CHECK(rep.converged);
    (void)traj;
  }
  SUBCASE("schedule must increase strictly") {
    auto fol = ball_foliation();
    CHECK_THROWS_AS(refine(*fol, v2(3, 4), {16, 16}), input_error);
  }
}

TEST_CASE("arclength sampling") {
  auto fol = ball_foliation();
  PolygonalTrajectory traj =
      run_partition(*fol, v2(3, 4), Partition::uniform(1.0, 5.0, 4));
  UnitSpeedCurve curve = arclength_parametrize(traj);
  std::vector<Vec> pts = curve.sample(5);
  Vec dir = v2(0.6, 0.8);
  double radii[5] = {5.0, 4.0, 3.0, 2.0, 1.0};
  for (int i = 0; i < 5; ++i)
    CHECK((pts[static_cast<std::size_t>(i)] - radii[i] * dir).norm() < 1e-12);

  // Right-angle polyline: the midpoint sample lands on the corner.
  UnitSpeedCurve bend({v2(0, 0), v2(1, 0), v2(1, 1)});
  CHECK((bend.eval(1.0) - v2(1, 0)).norm() == 0.0);
  CHECK((bend.sample(3)[1] - v2(1, 0)).norm() == 0.0);

  // Finite-difference tangents have unit norm away from vertices.
  auto ell = ellipsoid_foliation(0.5, 2.0);
  UnitSpeedCurve smooth = arclength_parametrize(
      run_partition(*ell, v2(2, 1), Partition::uniform(0.5, 2.0, 64)));
  const double h = 1e-4;
  int unit = 0, total = 0;
  for (double s = 0.05; s < smooth.length() - 0.05; s += 0.05) {
    double speed = (smooth.eval(s + h) - smooth.eval(s - h)).norm() / (2.0 * h);
    CHECK(speed <= 1.0 + 1e-6);
    ++total;
    if (speed >= 1.0 - 1e-6) ++unit;  // below 1 only while straddling a vertex
  }
  CHECK(unit >= (4 * total) / 5);
}

TEST_CASE("non-stalling: the boundary index keeps moving along the curve") {
  auto boxes = make_sublevel_foliation(make_function("box_max", json::object(), 2),
                                       0.05, 1.5, v2(0, 0));
  PolygonalTrajectory traj =
      run_partition(*boxes, v2(1.5, 0.7), Partition::uniform(0.05, 1.5, 256));
  UnitSpeedCurve curve = arclength_parametrize(traj);
  const int n = 512;
  const double ds = curve.length() / (n - 1);
  const double threshold = 4.0 * (curve.length() / 256.0 + ds);
  double run_start = 0.0;
  double last_idx = boxes->index_of(curve.eval(0.0));
  for (int k = 1; k < n; ++k) {
    double s = ds * k;
    double idx = boxes->index_of(curve.eval(s));
    if (std::abs(idx - last_idx) > 1e-12) {
      run_start = s;
      last_idx = idx;
    }
    CHECK(s - run_start <= threshold);
  }
}
