#include "refgov/planner.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace refgov {

ReferencePath::ReferencePath(std::vector<Vec2> waypoints) : waypoints_(std::move(waypoints)) {
  if (waypoints_.size() < 2) throw std::invalid_argument("ReferencePath: needs at least 2 waypoints");
  cumulative_.resize(waypoints_.size());
  cumulative_[0] = 0.0;
  for (size_t i = 1; i < waypoints_.size(); ++i)
    cumulative_[i] = cumulative_[i - 1] + (waypoints_[i] - waypoints_[i - 1]).norm();
  if (cumulative_.back() <= 0.0) throw std::invalid_argument("ReferencePath: degenerate (zero length)");
}

Vec2 ReferencePath::point_at(double alpha) const {
  const double s = std::clamp(alpha, 0.0, 1.0) * total_length();
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), s);
  size_t k = static_cast<size_t>(std::distance(cumulative_.begin(), it));
  if (k == 0) return waypoints_.front();
  if (k >= waypoints_.size()) return waypoints_.back();
  const double seg_len = cumulative_[k] - cumulative_[k - 1];
  const double t = seg_len > 0.0 ? (s - cumulative_[k - 1]) / seg_len : 0.0;
  return waypoints_[k - 1] + t * (waypoints_[k] - waypoints_[k - 1]);
}

std::pair<double, double> ReferencePath::closest(const Vec2& q) const {
  double best = std::numeric_limits<double>::infinity();
  double best_alpha = 0.0;
  for (size_t i = 0; i + 1 < waypoints_.size(); ++i) {
    const Vec2& a = waypoints_[i];
    const Vec2& b = waypoints_[i + 1];
    const Vec2 ab = b - a;
    const double denom = ab.squaredNorm();
    const double t = denom > 0.0 ? std::clamp((q - a).dot(ab) / denom, 0.0, 1.0) : 0.0;
    const double d = (q - (a + t * ab)).norm();
    if (d <= best) {
      best = d;
      best_alpha = (cumulative_[i] + t * std::sqrt(denom)) / total_length();
    }
  }
  return {best, best_alpha};
}

PathGoal projected_path_goal(const ReferencePath& path, const Vec2& g, const FreeSpace& fs) {
  const double radius = fs.point_boundary_distance(g);
  const auto& wp = path.waypoints();
  const double total = path.total_length();
  // Scan segments from last to first; within a segment the qualifying alphas
  // form an interval, so the max is the interval's upper end.
  for (size_t i = wp.size() - 1; i-- > 0;) {
    const Vec2& a = wp[i];
    const Vec2& b = wp[i + 1];
    const Vec2 e = b - a;
    const double ee = e.squaredNorm();
    const Vec2 ag = a - g;
    if (ee == 0.0) {
      if (ag.norm() <= radius) return PathGoal{path.length_at(i) / total, a};
      continue;
    }
    const double bq = ag.dot(e);
    const double cq = ag.squaredNorm() - radius * radius;
    const double disc = bq * bq - ee * cq;
    if (disc < 0.0) continue;
    const double sq = std::sqrt(disc);
    const double t_low = (-bq - sq) / ee;
    const double t_high = (-bq + sq) / ee;
    if (t_low > 1.0 || t_high < 0.0) continue;
    const double t = std::min(t_high, 1.0);
    if (t < 0.0) continue;
    const double alpha = (path.length_at(i) + t * std::sqrt(ee)) / total;
    return PathGoal{alpha, a + t * e};
  }
  const auto [dist, alpha] = path.closest(g);
  (void)dist;
  return PathGoal{alpha, path.point_at(alpha)};
}

Vec2 reference_field(const ReferencePath& path, const Vec2& g, const FreeSpace& fs, double path_gain) {
  if (path_gain <= 0.0) throw std::invalid_argument("reference_field: gain must be positive");
  const PathGoal target = projected_path_goal(path, g, fs);
  return -path_gain * (g - target.point);
}

bool in_planner_domain(const ReferencePath& path, const Vec2& g, const FreeSpace& fs, double slack) {
  return path.closest(g).first <= fs.point_boundary_distance(g) + slack;
}

}  // namespace refgov
