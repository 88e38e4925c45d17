#pragma once

#include <functional>
#include <random>

#include <Eigen/Dense>

#include "refgov/control.hpp"

namespace refgov::testing {

// Classic fixed-step RK4, independent of the adaptive integrator under test.
inline Eigen::VectorXd rk4_integrate(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& f,
                                     Eigen::VectorXd y, double t_end, double h) {
  double t = 0.0;
  while (t < t_end) {
    const double step = std::min(h, t_end - t);
    const Eigen::VectorXd k1 = f(y);
    const Eigen::VectorXd k2 = f(y + 0.5 * step * k1);
    const Eigen::VectorXd k3 = f(y + 0.5 * step * k2);
    const Eigen::VectorXd k4 = f(y + step * k3);
    y += (step / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    t += step;
  }
  return y;
}

// Flattened PhD closed loop towards a fixed goal.
inline std::function<Eigen::VectorXd(const Eigen::VectorXd&)> closed_loop_rhs(const PhdController& ctrl,
                                                                              const Vec2& goal) {
  return [&ctrl, goal](const Eigen::VectorXd& y) {
    const RobotState state = RobotState::unflatten(y, ctrl.order());
    return closed_loop_derivative(ctrl, state, goal).flatten();
  };
}

inline Vec2 random_vec2(std::mt19937& rng, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  return Vec2(u(rng), u(rng));
}

inline RobotState random_state(std::mt19937& rng, int order, double lo, double hi) {
  RobotState s;
  s.derivatives.resize(static_cast<size_t>(order));
  for (int i = 0; i < order; ++i) s.derivatives[i] = random_vec2(rng, lo, hi);
  return s;
}

// Random compact convex set around `center` with extent in [0.05, 0.6]. The
// size cap keeps sets generated in disjoint boxes free of strict containment,
// so boundary sampling sees the true minimum distance.
inline ConvexSet random_convex_set(std::mt19937& rng, const Vec2& center) {
  std::uniform_real_distribution<double> size(0.05, 0.6);
  std::uniform_int_distribution<int> kind(0, 4);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
  switch (kind(rng)) {
    case 0:
      return ConvexSet::point(center);
    case 1: {
      const double r = size(rng), th = angle(rng);
      const Vec2 d(r * std::cos(th), r * std::sin(th));
      return ConvexSet::segment(center - d, center + d);
    }
    case 2:
      return ConvexSet::disk(center, size(rng));
    case 3: {
      // shape eigenvalues in (0, 1], scale caps the extent at 0.6
      const double a = size(rng) / 0.6, b = size(rng) / 0.6, th = angle(rng);
      Mat2 rot;
      rot << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
      const Mat2 q = rot * Eigen::DiagonalMatrix<double, 2>(a, b) * rot.transpose();
      const double lam_max = std::max(a, b);
      return ConvexSet::ellipse(center, q, 0.6 / std::sqrt(lam_max) * std::uniform_real_distribution<double>(0.1, 1.0)(rng));
    }
    default: {
      std::uniform_int_distribution<int> count(1, 6);
      const int m = count(rng);
      std::vector<Vec2> verts;
      const double r = size(rng);
      for (int i = 0; i < m; ++i) {
        const double th = angle(rng);
        verts.push_back(center + std::uniform_real_distribution<double>(0.2, 1.0)(rng) * r *
                                     Vec2(std::cos(th), std::sin(th)));
      }
      return ConvexSet::polytope(std::move(verts));
    }
  }
}

}  // namespace refgov::testing
