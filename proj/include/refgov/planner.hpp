#pragma once

#include <vector>

#include "refgov/environment.hpp"
#include "refgov/geometry.hpp"

namespace refgov {

/// Piecewise-linear reference path parametrized by normalized arc length
/// alpha in [0, 1]; P(1) is the goal.
class ReferencePath {
 public:
  /// Throws std::invalid_argument for fewer than 2 waypoints or zero length.
  explicit ReferencePath(std::vector<Vec2> waypoints);

  const std::vector<Vec2>& waypoints() const { return waypoints_; }
  double total_length() const { return cumulative_.back(); }
  const Vec2& goal() const { return waypoints_.back(); }

  Vec2 point_at(double alpha) const;
  /// Arc length accumulated up to waypoint `index`.
  double length_at(size_t index) const { return cumulative_.at(index); }
  /// Min distance from q to the path and the alpha where it is attained.
  std::pair<double, double> closest(const Vec2& q) const;  // {distance, alpha}

 private:
  std::vector<Vec2> waypoints_;
  std::vector<double> cumulative_;  // arc length at each waypoint
};

struct PathGoal {
  double alpha;
  Vec2 point;
};

/// Farthest path point inside the clearance ball B(g, d(g, boundary)): the
/// max alpha with |P(alpha) - g| <= d(g, dF), found by scanning segments from
/// last to first and solving the segment-sphere quadratic. Falls back to the
/// closest path point when no alpha qualifies.
PathGoal projected_path_goal(const ReferencePath& path, const Vec2& g, const FreeSpace& fs);

/// Move-to-projected-path-goal field -k_path (g - P*(g)).
Vec2 reference_field(const ReferencePath& path, const Vec2& g, const FreeSpace& fs, double path_gain);

/// Planner domain membership d(g, P) <= d(g, dF).
bool in_planner_domain(const ReferencePath& path, const Vec2& g, const FreeSpace& fs, double slack = 0.0);

}  // namespace refgov
