#pragma once

#include "refgov/environment.hpp"
#include "refgov/prediction.hpp"

namespace refgov {

/// Safety level: min distance between the predicted motion range and the
/// free-space boundary, 0 when the robot position is outside the free space
/// or exactly on its boundary.
double safety_level(const FreeSpace& fs, const MotionRange& range, const Vec2& robot_pos);

/// Governor velocity k_g * min(delta, |r|) * r/|r|; zero when delta <= 0 or
/// r = 0. The three equivalent forms are exposed for cross-checking.
Vec2 governor_velocity(double delta, const Vec2& ref_vel, double governor_gain);
Vec2 governor_velocity_projection(double delta, const Vec2& ref_vel, double governor_gain);
Vec2 governor_velocity_shifted_projection(double delta, const Vec2& ref_vel, double governor_gain,
                                          const Vec2& governor_pos);

}  // namespace refgov
