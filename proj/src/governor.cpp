#include "refgov/governor.hpp"

#include <stdexcept>

namespace refgov {

double safety_level(const FreeSpace& fs, const MotionRange& range, const Vec2& robot_pos) {
  if (!fs.contains(robot_pos)) return 0.0;
  if (fs.point_boundary_distance(robot_pos) <= 0.0) return 0.0;
  return fs.set_boundary_distance(range.as_convex_set());
}

Vec2 governor_velocity(double delta, const Vec2& ref_vel, double governor_gain) {
  if (governor_gain <= 0.0) throw std::invalid_argument("governor_velocity: gain must be positive");
  const double n = ref_vel.norm();
  if (delta <= 0.0 || n == 0.0) return Vec2::Zero();
  return (governor_gain * std::min(delta, n) / n) * ref_vel;
}

Vec2 governor_velocity_projection(double delta, const Vec2& ref_vel, double governor_gain) {
  if (governor_gain <= 0.0) throw std::invalid_argument("governor_velocity: gain must be positive");
  if (delta <= 0.0) return Vec2::Zero();
  return governor_gain * project_to_ball(ref_vel, Ball{Vec2::Zero(), delta});
}

Vec2 governor_velocity_shifted_projection(double delta, const Vec2& ref_vel, double governor_gain,
                                          const Vec2& governor_pos) {
  if (governor_gain <= 0.0) throw std::invalid_argument("governor_velocity: gain must be positive");
  if (delta <= 0.0) return Vec2::Zero();
  const Vec2 proj = project_to_ball(governor_pos + ref_vel, Ball{governor_pos, delta});
  return -governor_gain * (governor_pos - proj);
}

}  // namespace refgov
