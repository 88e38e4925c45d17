#include <doctest.h>

#include <random>

#include "refgov/geometry.hpp"
#include "support/oracles.hpp"

using namespace refgov;
using refgov::testing::random_convex_set;
using refgov::testing::random_vec2;

TEST_CASE("project_to_ball maps exterior points radially and fixes the rest") {
  CHECK((project_to_ball({3, 0}, {{0, 0}, 1}) - Vec2(1, 0)).norm() == doctest::Approx(0.0));
  CHECK((project_to_ball({0.2, 0}, {{0, 0}, 1}) - Vec2(0.2, 0)).norm() == doctest::Approx(0.0));
  CHECK((project_to_ball({3, 4}, {{0, 0}, 5}) - Vec2(3, 4)).norm() == doctest::Approx(0.0));
}

TEST_CASE("project_to_ball is idempotent and 1-Lipschitz") {
  std::mt19937 rng(7);
  for (int i = 0; i < 1000; ++i) {
    const Ball ball{random_vec2(rng, -2, 2), std::uniform_real_distribution<double>(0.0, 2.0)(rng)};
    const Vec2 p = random_vec2(rng, -5, 5);
    const Vec2 q = random_vec2(rng, -5, 5);
    const Vec2 pp = project_to_ball(p, ball);
    CHECK((project_to_ball(pp, ball) - pp).norm() <= 1e-14);
    CHECK((project_to_ball(p, ball) - project_to_ball(q, ball)).norm() <= (p - q).norm() + 1e-12);
  }
}

TEST_CASE("support_point picks extreme points") {
  CHECK((support_point(ConvexSet::disk({0, 0}, 2), {0, 1}) - Vec2(0, 2)).norm() <= 1e-15);
  CHECK((support_point(ConvexSet::polytope({{0, 0}, {1, 0}, {0, 1}}), {1, 0}) - Vec2(1, 0)).norm() <= 1e-15);
  CHECK_THROWS_AS(support_point(ConvexSet::disk({0, 0}, 1), {0, 0}), std::invalid_argument);
}

TEST_CASE("ellipse support matches a dense boundary sweep") {
  Mat2 q;
  q << 4, 0, 0, 1;
  const ConvexSet e = ConvexSet::ellipse({0, 0}, q, 1.0);
  CHECK((support_point(e, {1, 0}) - Vec2(2, 0)).norm() <= 1e-12);

  std::mt19937 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const Vec2 dir = random_vec2(rng, -1, 1);
    if (dir.norm() < 1e-3) continue;
    double best = -1e300;
    for (const Vec2& p : boundary_samples(e, 20000)) best = std::max(best, dir.dot(p));
    CHECK(dir.dot(support_point(e, dir)) >= best - 1e-6);
    CHECK(dir.dot(support_point(e, dir)) <= best + 1e-6 + 1e-7 * std::abs(best));
  }
}

TEST_CASE("convex_distance on hand-checked pairs") {
  CHECK(convex_distance(ConvexSet::disk({0, 0}, 1), ConvexSet::disk({5, 0}, 1)) == doctest::Approx(3.0).epsilon(1e-9));
  // Segment above a unit disk; nearest point is (0, 2) -> distance 1.
  CHECK(convex_distance(ConvexSet::segment({0, 2}, {1, 2}), ConvexSet::disk({0, 0}, 1)) ==
        doctest::Approx(1.0).epsilon(1e-9));
  CHECK(convex_distance(ConvexSet::disk({0, 0}, 1), ConvexSet::disk({0.5, 0}, 1)) == doctest::Approx(0.0));
  CHECK(convex_distance(ConvexSet::point({3, 4}), ConvexSet::point({0, 0})) == doctest::Approx(5.0));

  // Overlapping pairs of every flavor report zero distance.
  Mat2 q;
  q << 4, 0, 0, 1;
  CHECK(convex_distance(ConvexSet::ellipse({0, 0}, q, 1.0), ConvexSet::disk({1.5, 0}, 1.0)) == 0.0);
  CHECK(convex_distance(ConvexSet::polytope({{-1, -1}, {1, -1}, {0, 1}}),
                        ConvexSet::segment({-2, 0}, {2, 0})) == 0.0);
  CHECK(convex_distance(ConvexSet::point({0.1, 0.2}), ConvexSet::disk({0, 0}, 1)) == 0.0);
}

TEST_CASE("convex_distance is symmetric and dominated by the sampling oracle") {
  std::mt19937 rng(23);
  for (int trial = 0; trial < 60; ++trial) {
    const ConvexSet a = random_convex_set(rng, random_vec2(rng, 0.2, 2.0));
    const ConvexSet b = random_convex_set(rng, random_vec2(rng, -2.0, -0.2));
    const double dab = convex_distance(a, b);
    const double dba = convex_distance(b, a);
    CHECK(std::abs(dab - dba) < 1e-12);
    const double brute = brute_force_distance(a, b, 2000);
    CHECK(dab <= brute + 1e-9);
    CHECK(brute - dab <= 5e-3);  // coarser sampling than the acceptance sweep
  }
}

TEST_CASE("brute_force_distance basics") {
  const ConvexSet d1 = ConvexSet::disk({0, 0}, 1);
  CHECK(brute_force_distance(d1, d1, 500) == doctest::Approx(0.0));
  CHECK(brute_force_distance(ConvexSet::point({0, 0}), ConvexSet::point({3, 4}), 2) == doctest::Approx(5.0));
  const double d = brute_force_distance(ConvexSet::segment({0, 2}, {1, 2}), d1, 10000);
  CHECK(d == doctest::Approx(1.0).epsilon(1e-3));
  CHECK_THROWS_AS(brute_force_distance(d1, d1, 1), std::invalid_argument);
}

TEST_CASE("translation Lipschitz bound of the set distance") {
  std::mt19937 rng(37);
  for (int trial = 0; trial < 300; ++trial) {
    const ConvexSet x = random_convex_set(rng, random_vec2(rng, 0.2, 2.0));
    const ConvexSet y = random_convex_set(rng, random_vec2(rng, -2.0, -0.2));
    const Vec2 b1 = random_vec2(rng, -1, 1);
    const Vec2 b2 = random_vec2(rng, -1, 1);
    const double d1 = convex_distance(x.translated(b1), y);
    const double d2 = convex_distance(x.translated(b2), y);
    CHECK(std::abs(d1 - d2) <= (b1 - b2).norm() + 1e-9);
  }
}

TEST_CASE("linear-map Lipschitz bound of the set distance on polytopes") {
  std::mt19937 rng(41);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<Vec2> verts;
    const int m = 3 + trial % 4;
    for (int i = 0; i < m; ++i) verts.push_back(random_vec2(rng, -1, 1));
    const ConvexSet y = random_convex_set(rng, random_vec2(rng, 1.5, 3.0));
    Mat2 a1, a2;
    a1 << u(rng), u(rng), u(rng), u(rng);
    a2 << u(rng), u(rng), u(rng), u(rng);
    auto mapped = [&](const Mat2& a) {
      std::vector<Vec2> out;
      for (const Vec2& v : verts) out.push_back(a * v);
      return ConvexSet::polytope(out);
    };
    double max_norm = 0.0;
    for (const Vec2& v : verts) max_norm = std::max(max_norm, v.norm());
    const double d1 = convex_distance(mapped(a1), y);
    const double d2 = convex_distance(mapped(a2), y);
    const double bound = (a1 - a2).jacobiSvd().singularValues()(0) * max_norm;
    CHECK(std::abs(d1 - d2) <= bound + 1e-9);
  }
}

TEST_CASE("matrix_sqrt_psd") {
  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(3, 3);
  CHECK((matrix_sqrt_psd(eye) - eye).norm() <= 1e-14);

  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(2, 2);
  d(0, 0) = 4.0;
  d(1, 1) = 9.0;
  const Eigen::MatrixXd r = matrix_sqrt_psd(d);
  CHECK(r(0, 0) == doctest::Approx(2.0));
  CHECK(r(1, 1) == doctest::Approx(3.0));

  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int trial = 0; trial < 50; ++trial) {
    const int k = 2 + trial % 4;
    Eigen::MatrixXd g(k, k);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) g(i, j) = u(rng);
    const Eigen::MatrixXd s = g * g.transpose();
    const Eigen::MatrixXd root = matrix_sqrt_psd(s);
    CHECK((root * root.transpose() - s).norm() < 1e-10);
    CHECK((root - root.transpose()).norm() < 1e-12);
  }

  Eigen::MatrixXd asym(2, 2);
  asym << 1, 2, 0, 1;
  CHECK_THROWS_AS(matrix_sqrt_psd(asym), std::invalid_argument);
  Eigen::MatrixXd indef(2, 2);
  indef << 1, 0, 0, -1;
  CHECK_THROWS_AS(matrix_sqrt_psd(indef), std::invalid_argument);
}

TEST_CASE("convex set constructors enforce invariants") {
  CHECK_THROWS_AS(ConvexSet::disk({0, 0}, -1), std::invalid_argument);
  CHECK_THROWS_AS(ConvexSet::polytope({}), std::invalid_argument);
  Mat2 asym;
  asym << 1, 0.5, 0, 1;
  CHECK_THROWS_AS(ConvexSet::ellipse({0, 0}, asym, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(ConvexSet::ellipse({0, 0}, Mat2::Identity(), -0.5), std::invalid_argument);
}

TEST_CASE("convex_hull and point-polygon distance") {
  const auto hull = convex_hull({{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0.5, 0.5}});
  CHECK(hull.size() == 4);
  CHECK(point_convex_polygon_distance({0.5, 0.5}, hull) == doctest::Approx(0.0));
  CHECK(point_convex_polygon_distance({2, 0.5}, hull) == doctest::Approx(1.0));
  CHECK(point_convex_polygon_distance({-1, -1}, hull) == doctest::Approx(std::sqrt(2.0)));
}
