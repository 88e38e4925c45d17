#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "refgov/control.hpp"
#include "refgov/geometry.hpp"

namespace refgov {

/// Position-coordinate projection of a Lyapunov ellipsoid:
/// {center + scale * shape^{1/2} u : |u| <= 1}.
struct ProjectedEllipsoid {
  Vec2 center;
  Mat2 shape;
  double scale;
};

/// Convex hull of the n+1 prediction vertices.
struct SimplexRange {
  std::vector<Vec2> vertices;
};

/// Convex set guaranteed to contain the future position trajectory of the
/// closed loop towards a fixed goal.
struct MotionRange {
  std::variant<ProjectedEllipsoid, SimplexRange> region;

  ConvexSet as_convex_set() const;
  /// Upper bound on max_{y in range} |y - c|; exact for simplexes and for
  /// ellipsoids when c is the center.
  double extent_from(const Vec2& c) const;
  /// Euclidean distance from p to the range (0 inside).
  double distance_to(const Vec2& p) const;
  bool contains(const Vec2& p, double inflation) const { return distance_to(p) <= inflation; }
  /// sup over pairs of points (exact for both variants).
  double diameter() const;
};

/// Solution P of the closed-loop Lyapunov equation together with the
/// bounding-ball constant. For C = I the n x n Kronecker factor is kept and
/// P = Pn (x) I_2.
class LyapunovCertificate {
 public:
  int order() const { return order_; }
  bool kronecker_form() const { return kron_; }
  const Eigen::MatrixXd& factor() const { return pn_; }  // Pn when kronecker_form()
  Eigen::MatrixXd full() const;                          // P, 2n x 2n
  const Eigen::MatrixXd& decay() const { return c_; }
  double beta() const { return beta_; }
  const Mat2& projected_shape() const { return shape_; }

  /// |x - g~|_P.
  double weighted_error_norm(const RobotState& state, const Vec2& goal) const;

 private:
  friend LyapunovCertificate solve_lyapunov(const PhdController& ctrl);
  friend LyapunovCertificate solve_lyapunov(const PhdController& ctrl, const Eigen::MatrixXd& c);

  int order_ = 0;
  bool kron_ = false;
  Eigen::MatrixXd pn_;    // n x n factor (kron) or 2n x 2n full P
  Eigen::MatrixXd c_;
  Mat2 shape_;            // I^T P^{-1} I
  double beta_ = 0.0;
};

/// Solves Abar^T P + P Abar = -C^T C for the stacked planar dynamics.
/// The default uses C = I and the Kronecker shortcut. Throws when the
/// resulting P is not positive definite or the residual exceeds 1e-8.
LyapunovCertificate solve_lyapunov(const PhdController& ctrl);
LyapunovCertificate solve_lyapunov(const PhdController& ctrl, const Eigen::MatrixXd& c);

/// Projected Lyapunov ellipsoid centered at the goal.
MotionRange lyapunov_range(const LyapunovCertificate& cert, const RobotState& state, const Vec2& goal);

double lyapunov_beta(const LyapunovCertificate& cert);

/// Coefficients h_0..h_{n-1} of the characteristic polynomial with one
/// instance of the slowest root removed, plus the bounding-ball constant
/// beta = sqrt(n) max(h) / h_0.
struct VandermondeCoefficients {
  Eigen::VectorXd h;
  double beta;

  int order() const { return static_cast<int>(h.size()); }
};

/// Requires real negative roots (non-overshooting control). Repeated roots
/// are perturbed by 1e-9 before the excluded-root product is formed.
VandermondeCoefficients vandermonde_coefficients(const std::vector<double>& roots);

/// Simplex hull of {goal, p0, p0 + (h1/h0) p1, ..., sum (h_i/h0) p_i}.
MotionRange vandermonde_range(const VandermondeCoefficients& coeffs, const RobotState& state, const Vec2& goal);

/// Ball(goal, beta |x - g~|) containing the motion range.
Ball range_bounding_ball(const MotionRange& range, double beta, const RobotState& state, const Vec2& goal);

}  // namespace refgov
