#pragma once

#include <string>
#include <variant>
#include <vector>

#include "refgov/geometry.hpp"

namespace refgov {

struct DiskRegion {
  Vec2 center;
  double radius;  // > 0
};

/// Convex polygon, stored CCW. Construction normalizes orientation and
/// rejects non-convex input.
struct PolygonRegion {
  std::vector<Vec2> vertices;
};

using ConvexRegion = std::variant<DiskRegion, PolygonRegion>;

ConvexRegion make_disk_region(const Vec2& center, double radius);
ConvexRegion make_polygon_region(std::vector<Vec2> vertices);

bool region_contains(const ConvexRegion& region, const Vec2& p);         // closed
bool region_strictly_contains(const ConvexRegion& region, const Vec2& p);
double point_region_distance(const ConvexRegion& region, const Vec2& p);  // 0 inside
ConvexSet region_as_convex_set(const ConvexRegion& region);

/// Circular arc, CCW from start_angle over span radians (span in (0, 2*pi]).
struct Arc {
  Vec2 center;
  double radius;
  double start_angle;
  double span;
};

double point_arc_distance(const Vec2& p, const Arc& arc);

using BoundaryPrimitive = std::variant<SegmentShape, Arc>;

struct Environment {
  ConvexRegion workspace;
  std::vector<ConvexRegion> obstacles;
  double robot_radius = 0.0;
};

/// Obstacle dilated by the robot radius: membership is distance-to-base.
struct InflatedObstacle {
  ConvexRegion base;
  double inflation;

  bool contains(const Vec2& p) const;            // closed
  bool strictly_contains(const Vec2& p) const;
};

/// Free space of the disk robot: the workspace eroded by the robot radius
/// minus the radius-dilated obstacles. Immutable after construction; all
/// queries are pure.
class FreeSpace {
 public:
  bool contains(const Vec2& p) const;
  double point_boundary_distance(const Vec2& p) const;
  /// Min distance from a convex set to the boundary; arcs are handled through
  /// their polygonized chords (chordal tolerance arc_tolerance()).
  double set_boundary_distance(const ConvexSet& s) const;

  const std::vector<BoundaryPrimitive>& boundary_primitives() const { return primitives_; }
  const ConvexRegion& eroded_workspace() const { return eroded_workspace_; }
  const std::vector<InflatedObstacle>& inflated_obstacles() const { return inflated_; }
  const std::vector<std::string>& warnings() const { return warnings_; }
  double arc_tolerance() const { return arc_tolerance_; }
  /// Component count from the grid connectivity probe (1 = no warning).
  int connected_components() const { return components_; }

 private:
  friend FreeSpace build_free_space(const Environment& env, double arc_tolerance);

  ConvexRegion eroded_workspace_{DiskRegion{Vec2::Zero(), 1.0}};
  std::vector<InflatedObstacle> inflated_;
  std::vector<BoundaryPrimitive> primitives_;
  std::vector<SegmentShape> query_segments_;  // segments + arc chords
  std::vector<std::string> warnings_;
  double arc_tolerance_ = 1e-3;
  int components_ = 1;
};

/// Throws std::runtime_error when the resulting free space is empty.
FreeSpace build_free_space(const Environment& env, double arc_tolerance = 1e-3);

}  // namespace refgov
