#include <doctest.h>

#include <cmath>
#include <random>

#include "refgov/environment.hpp"
#include "support/oracles.hpp"

using namespace refgov;
using refgov::testing::random_vec2;

namespace {

Environment annulus_env(double rho = 0.0) {
  Environment env;
  env.workspace = make_disk_region({0, 0}, 3.0);
  env.obstacles.push_back(make_disk_region({0, 0}, 1.0));
  env.robot_radius = rho;
  return env;
}

Environment rect_env() {
  Environment env;
  env.workspace = make_polygon_region({{0, 0}, {4, 0}, {4, 2}, {0, 2}});
  env.robot_radius = 0.0;
  return env;
}

// Independent oracle: dense parametric samples of the annulus circles.
double annulus_boundary_oracle(const Vec2& p, double r_in, double r_out) {
  double best = 1e300;
  for (int i = 0; i < 40000; ++i) {
    const double th = 2.0 * M_PI * i / 40000;
    const Vec2 u(std::cos(th), std::sin(th));
    best = std::min(best, (p - r_in * u).norm());
    best = std::min(best, (p - r_out * u).norm());
  }
  return best;
}

}  // namespace

TEST_CASE("annulus free space keeps both boundary circles") {
  const FreeSpace fs = build_free_space(annulus_env());
  REQUIRE(fs.boundary_primitives().size() == 2);
  std::vector<double> radii;
  for (const auto& prim : fs.boundary_primitives()) radii.push_back(std::get<Arc>(prim).radius);
  std::sort(radii.begin(), radii.end());
  CHECK(radii[0] == doctest::Approx(1.0));
  CHECK(radii[1] == doctest::Approx(3.0));
}

TEST_CASE("disk obstacle dilation adds the robot radius") {
  const FreeSpace fs = build_free_space(annulus_env(0.5));
  std::vector<double> radii;
  for (const auto& prim : fs.boundary_primitives()) radii.push_back(std::get<Arc>(prim).radius);
  std::sort(radii.begin(), radii.end());
  CHECK(radii[0] == doctest::Approx(1.5));
  CHECK(radii[1] == doctest::Approx(2.5));
}

TEST_CASE("polygon dilation area matches the Minkowski sum (Monte-Carlo oracle)") {
  Environment env;
  env.workspace = make_polygon_region({{-3, -3}, {3, -3}, {3, 3}, {-3, 3}});
  env.obstacles.push_back(make_polygon_region({{0, 0}, {1, 0}, {1, 1}, {0, 1}}));
  env.robot_radius = 0.1;
  const FreeSpace fs = build_free_space(env);
  const InflatedObstacle& ob = fs.inflated_obstacles().front();

  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> u(-0.2, 1.2);
  const int n = 1000000;
  int hits = 0;
  for (int i = 0; i < n; ++i)
    if (ob.contains({u(rng), u(rng)})) ++hits;
  const double area = 1.96 * hits / n;
  const double expected = 1.0 + 4.0 * 0.1 + M_PI * 0.01;
  CHECK(std::abs(area - expected) <= 0.005 * expected);
}

TEST_CASE("point_boundary_distance on the annulus and the rectangle") {
  const FreeSpace annulus = build_free_space(annulus_env());
  CHECK(annulus.point_boundary_distance({2, 0}) == doctest::Approx(1.0));
  CHECK(annulus.point_boundary_distance({0, 2.9}) == doctest::Approx(0.1));
  CHECK(annulus.point_boundary_distance({2.9 * std::cos(1.0), 2.9 * std::sin(1.0)}) ==
        doctest::Approx(annulus_boundary_oracle({2.9 * std::cos(1.0), 2.9 * std::sin(1.0)}, 1, 3)).epsilon(1e-6));

  const FreeSpace rect = build_free_space(rect_env());
  CHECK(rect.point_boundary_distance({1, 1}) == doctest::Approx(1.0));
}

TEST_CASE("contains treats the boundary as inside and the hole as outside") {
  const FreeSpace fs = build_free_space(annulus_env());
  CHECK(!fs.contains({0, 0}));
  CHECK(fs.contains({2, 0}));
  CHECK(fs.contains({3, 0}));   // outer boundary, closed set
  CHECK(fs.contains({1, 0}));   // inner boundary, closed set
  CHECK(!fs.contains({0.99, 0}));
  CHECK(!fs.contains({3.01, 0}));
}

TEST_CASE("set_boundary_distance on hand-checked sets") {
  const FreeSpace annulus = build_free_space(annulus_env());
  CHECK(std::abs(annulus.set_boundary_distance(ConvexSet::disk({2, 0}, 0.5)) - 0.5) <= 1.5e-3);
  // A disk tangent to the outer circle touches the boundary.
  CHECK(annulus.set_boundary_distance(ConvexSet::disk({2.5, 0}, 0.5)) <= 1e-3);

  const FreeSpace rect = build_free_space(rect_env());
  CHECK(std::abs(rect.set_boundary_distance(ConvexSet::polytope({{1, 1}, {1.5, 1}, {1, 1.5}})) - 0.5) <= 1e-9);
}

TEST_CASE("singleton set distance agrees with the point distance") {
  const FreeSpace fs = build_free_space(annulus_env());
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> rad(1.05, 2.95), ang(0.0, 2.0 * M_PI);
  for (int i = 0; i < 50; ++i) {
    const double r = rad(rng), th = ang(rng);
    const Vec2 p(r * std::cos(th), r * std::sin(th));
    CHECK(std::abs(fs.set_boundary_distance(ConvexSet::point(p)) - fs.point_boundary_distance(p)) <=
          fs.arc_tolerance() + 1e-9);
  }
}

TEST_CASE("point_boundary_distance is 1-Lipschitz") {
  const FreeSpace fs = build_free_space(annulus_env());
  std::mt19937 rng(17);
  for (int i = 0; i < 1000; ++i) {
    const Vec2 p = random_vec2(rng, -3, 3);
    const Vec2 q = random_vec2(rng, -3, 3);
    CHECK(std::abs(fs.point_boundary_distance(p) - fs.point_boundary_distance(q)) <= (p - q).norm() + 1e-12);
  }
}

TEST_CASE("growing the robot radius never increases clearance") {
  const FreeSpace fs_small = build_free_space(annulus_env(0.1));
  const FreeSpace fs_large = build_free_space(annulus_env(0.3));
  std::mt19937 rng(29);
  std::uniform_real_distribution<double> rad(1.35, 2.65), ang(0.0, 2.0 * M_PI);
  for (int i = 0; i < 200; ++i) {
    const double r = rad(rng), th = ang(rng);
    const Vec2 p(r * std::cos(th), r * std::sin(th));
    REQUIRE(fs_large.contains(p));
    CHECK(fs_small.point_boundary_distance(p) >= fs_large.point_boundary_distance(p) - 1e-12);
  }
}

TEST_CASE("a set strictly inside the free space is no farther than its anchor point") {
  const FreeSpace fs = build_free_space(annulus_env());
  std::mt19937 rng(31);
  std::uniform_real_distribution<double> rad(1.3, 2.7), ang(0.0, 2.0 * M_PI), rr(0.01, 0.25);
  for (int i = 0; i < 50; ++i) {
    const double r = rad(rng), th = ang(rng);
    const Vec2 p(r * std::cos(th), r * std::sin(th));
    const ConvexSet s = ConvexSet::disk(p, rr(rng));
    CHECK(fs.set_boundary_distance(s) <= fs.point_boundary_distance(p) + 1e-9);
    // Same bound, within the arc tolerance, when p is off-center in the set.
    const ConvexSet tri = ConvexSet::polytope({p, p + Vec2(0.05, 0.01), p + Vec2(0.02, 0.06)});
    CHECK(fs.set_boundary_distance(tri) <= fs.point_boundary_distance(p) + fs.arc_tolerance() + 1e-9);
  }
}

TEST_CASE("degenerate environments are rejected, disconnection is a warning") {
  Environment env;
  env.workspace = make_disk_region({0, 0}, 1.0);
  env.robot_radius = 1.0;
  CHECK_THROWS_AS(build_free_space(env), std::runtime_error);  // erosion vanishes

  Environment covered = rect_env();
  covered.obstacles.push_back(make_polygon_region({{-1, -1}, {5, -1}, {5, 3}, {-1, 3}}));
  CHECK_THROWS_AS(build_free_space(covered), std::runtime_error);  // fully covered

  Environment split = rect_env();
  split.obstacles.push_back(make_polygon_region({{1.8, -0.5}, {2.2, -0.5}, {2.2, 2.5}, {1.8, 2.5}}));
  const FreeSpace fs = build_free_space(split);
  CHECK(fs.connected_components() == 2);
  CHECK(!fs.warnings().empty());
}

TEST_CASE("erosion of a non-axis-aligned workspace matches the inradius") {
  // Equilateral triangle with side 4: inradius 4*sqrt(3)/6 at the centroid.
  Environment env;
  env.workspace = make_polygon_region({{0, 0}, {4, 0}, {2, 2.0 * std::sqrt(3.0)}});
  env.robot_radius = 0.5;
  const FreeSpace fs = build_free_space(env);
  const Vec2 centroid(2.0, 2.0 * std::sqrt(3.0) / 3.0);
  CHECK(fs.contains(centroid));
  CHECK(fs.point_boundary_distance(centroid) == doctest::Approx(4.0 * std::sqrt(3.0) / 6.0 - 0.5));
}

TEST_CASE("corner arcs spanning the angle wrap are measured correctly") {
  // Diamond obstacle: the left corner's arc sweeps across the atan2 cut.
  Environment env;
  env.workspace = make_polygon_region({{-6, -6}, {6, -6}, {6, 6}, {-6, 6}});
  env.obstacles.push_back(make_polygon_region({{1, 0}, {0, 1}, {-1, 0}, {0, -1}}));
  env.robot_radius = 0.3;
  const FreeSpace fs = build_free_space(env);
  CHECK(fs.point_boundary_distance({-2, 0}) == doctest::Approx(1.0 - 0.3));
  CHECK(!fs.contains({-1.25, 0}));
  CHECK(fs.contains({-1.35, 0}));
  // Along the corner bisector the rounded corner is a circle around (-1, 0).
  const Vec2 diag = Vec2(-1, 0) + 0.9 * Vec2(-std::cos(0.7), std::sin(0.7));
  CHECK(fs.point_boundary_distance(diag) == doctest::Approx(0.9 - 0.3));
}

TEST_CASE("inflated corner arcs appear for polygon obstacles") {
  Environment env;
  env.workspace = make_polygon_region({{-3, -3}, {3, -3}, {3, 3}, {-3, 3}});
  env.obstacles.push_back(make_polygon_region({{0, 0}, {1, 0}, {1, 1}, {0, 1}}));
  env.robot_radius = 0.2;
  const FreeSpace fs = build_free_space(env);
  int arcs = 0, segments = 0;
  for (const auto& prim : fs.boundary_primitives()) {
    if (std::holds_alternative<Arc>(prim)) ++arcs;
    else ++segments;
  }
  CHECK(arcs == 4);          // one quarter arc per square corner
  CHECK(segments == 4 + 4);  // eroded workspace + offset edges
  // Distance from the obstacle corner region respects the rounded geometry.
  CHECK(fs.point_boundary_distance({1.5, 1.5}) == doctest::Approx(std::sqrt(0.5) - 0.2));
}
