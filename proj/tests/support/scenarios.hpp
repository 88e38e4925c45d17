#pragma once

#include <cmath>

#include "refgov/simulator.hpp"

namespace refgov::testing {

// Annulus corridor: disk workspace R=3, centered disk obstacle r=1, robot
// radius 0.25, reference path on the radius-2 centerline over 300 degrees.
inline Scenario corridor_scenario(int order, PredictionMethod method) {
  Scenario sc;
  sc.name = "corridor";
  sc.environment.workspace = make_disk_region({0, 0}, 3.0);
  sc.environment.obstacles.push_back(make_disk_region({0, 0}, 1.0));
  sc.environment.robot_radius = 0.25;
  for (int k = 0; k <= 30; ++k) {
    const double th = M_PI / 180.0 * (-150.0 + 10.0 * k);
    sc.waypoints.push_back(Vec2(2.0 * std::cos(th), 2.0 * std::sin(th)));
  }
  sc.roots.clear();
  for (int i = 0; i < order; ++i)
    sc.roots.push_back(order == 1 ? -1.0 : -2.0 + 1.0 * i / (order - 1));
  sc.method = method;
  sc.initial_state = RobotState::zero_motion(sc.waypoints.front(), order);
  sc.initial_governor = sc.waypoints.front();
  return sc;
}

}  // namespace refgov::testing
