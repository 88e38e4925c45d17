#pragma once

#include <complex>
#include <vector>

#include "refgov/geometry.hpp"

namespace refgov {

/// Stacked robot state [p^(0), ..., p^(n-1)] of an n-th order planar robot.
struct RobotState {
  std::vector<Vec2> derivatives;

  int order() const { return static_cast<int>(derivatives.size()); }
  const Vec2& position() const { return derivatives.front(); }

  static RobotState zero_motion(const Vec2& position, int order);

  /// Column [p0x p0y p1x p1y ...].
  Eigen::VectorXd flatten() const;
  static RobotState unflatten(const Eigen::VectorXd& y, int order);

  /// |x - g~| where g~ is the zero-motion state at the goal.
  double error_norm(const Vec2& goal) const;
  bool is_zero_motion(double tol = 0.0) const;
};

/// Gains k_0..k_{n-1} such that lambda^n + sum k_i lambda^i = prod (lambda - root_i).
/// All roots must have negative real part; complex roots must come in
/// conjugate pairs.
Eigen::VectorXd gains_from_roots(const std::vector<std::complex<double>>& roots);
Eigen::VectorXd gains_from_roots(const std::vector<double>& roots);

/// Companion matrix: superdiagonal ones, last row -(k_0..k_{n-1}).
Eigen::MatrixXd companion_matrix(const Eigen::VectorXd& gains);

/// Proportional higher-order derivative feedback controller, fixed at
/// construction. Orders 1..8.
class PhdController {
 public:
  static PhdController from_roots(const std::vector<double>& roots);
  static PhdController from_roots(const std::vector<std::complex<double>>& roots);

  int order() const { return order_; }
  const std::vector<std::complex<double>>& roots() const { return roots_; }
  const Eigen::VectorXd& gains() const { return gains_; }
  const Eigen::MatrixXd& companion() const { return companion_; }
  /// All characteristic roots real and negative.
  bool non_overshooting() const { return non_overshooting_; }
  std::vector<double> real_roots() const;

  /// Closed-loop state matrix A (x) I_2 of the planar stacked dynamics.
  Eigen::MatrixXd state_space_matrix() const;

 private:
  PhdController() = default;
  int order_ = 0;
  std::vector<std::complex<double>> roots_;
  Eigen::VectorXd gains_;
  Eigen::MatrixXd companion_;
  bool non_overshooting_ = false;
};

/// Time derivative of the stacked state under PhD control towards `goal`:
/// (p^(1), ..., p^(n-1), -sum k_i p^(i) + k_0 goal).
RobotState closed_loop_derivative(const PhdController& ctrl, const RobotState& state, const Vec2& goal);

Eigen::MatrixXd kronecker(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

}  // namespace refgov
