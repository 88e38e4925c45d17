#pragma once

#include <Eigen/Dense>
#include <variant>
#include <vector>

namespace refgov {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

/// Closed Euclidean ball.
struct Ball {
  Vec2 center{0.0, 0.0};
  double radius = 0.0;
};

/// Metric projection of a point onto a closed ball. Total: interior points
/// map to themselves, exterior points to the radial boundary point.
Vec2 project_to_ball(const Vec2& point, const Ball& ball);

/// Unique symmetric PSD square root R of a symmetric PSD matrix S, R*R^T = S.
/// Throws std::invalid_argument on asymmetric or indefinite input.
Eigen::MatrixXd matrix_sqrt_psd(const Eigen::MatrixXd& s);

// Compact convex set variants. All coordinates in meters.
struct PointShape {
  Vec2 p;
};
struct SegmentShape {
  Vec2 a;
  Vec2 b;
};
struct DiskShape {
  Vec2 center;
  double radius;  // >= 0
};
// {center + scale * shape^{1/2} u : |u| <= 1}, shape symmetric PSD.
struct EllipseShape {
  Vec2 center;
  Mat2 shape;
  double scale;  // >= 0
  Mat2 shape_sqrt;  // cached symmetric PSD square root of shape
};
struct PolytopeShape {
  std::vector<Vec2> vertices;  // >= 1 vertex, any order
};

class ConvexSet {
 public:
  using Shape = std::variant<PointShape, SegmentShape, DiskShape, EllipseShape, PolytopeShape>;

  static ConvexSet point(const Vec2& p);
  static ConvexSet segment(const Vec2& a, const Vec2& b);
  static ConvexSet disk(const Vec2& center, double radius);
  static ConvexSet ellipse(const Vec2& center, const Mat2& shape, double scale);
  static ConvexSet polytope(std::vector<Vec2> vertices);

  const Shape& shape() const { return shape_; }

  /// A point inside the set, used as the seed/reference for distance queries.
  Vec2 reference_point() const;
  /// Upper bound on max_{x in set} |x - reference_point()|.
  double radius_bound() const;

  ConvexSet translated(const Vec2& offset) const;

 private:
  explicit ConvexSet(Shape shape) : shape_(std::move(shape)) {}
  Shape shape_;
};

/// argmax over the set of <x, direction>. Throws on zero direction.
Vec2 support_point(const ConvexSet& set, const Vec2& direction);

/// Minimum Euclidean distance between two compact convex sets, computed by
/// GJK support-function iteration to absolute tolerance 1e-9 (<= 128
/// iterations). Returns 0 on overlap. Throws std::runtime_error (with the
/// best bound in the message) if the iteration fails to converge.
double convex_distance(const ConvexSet& a, const ConvexSet& b);

/// Independent sampling oracle: min pairwise distance over `samples` boundary
/// points of each set. Upper-bounds the true distance.
double brute_force_distance(const ConvexSet& a, const ConvexSet& b, int samples);

/// Boundary discretization used by brute_force_distance, exposed for tests.
std::vector<Vec2> boundary_samples(const ConvexSet& set, int samples);

// Small planar helpers shared across modules.
double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b);

/// Convex hull (monotone chain), CCW, duplicates removed. Collinear interior
/// points are dropped. Accepts any number of points >= 1.
std::vector<Vec2> convex_hull(std::vector<Vec2> points);

/// Distance from a point to the convex hull of `hull` (CCW). 0 inside.
double point_convex_polygon_distance(const Vec2& p, const std::vector<Vec2>& hull);

}  // namespace refgov
