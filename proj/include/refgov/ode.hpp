#pragma once

#include <functional>

#include <Eigen/Dense>

namespace refgov {

struct OdeSettings {
  double rel_tol = 1e-3;
  double abs_tol = 1e-6;
  double initial_step = 1e-3;
  double max_step = 0.05;
};

enum class OdeOutcome { reached_end, stopped_by_observer, step_underflow };

/// Right-hand side f(t, y, stage) -> dy/dt. The stage index (0..6 within one
/// Dormand-Prince step) lets callers cache stage-invariant work.
using OdeRhs = std::function<Eigen::VectorXd(double, const Eigen::VectorXd&, int)>;

/// Called after each accepted step; return false to stop integration.
using OdeObserver = std::function<bool(double, const Eigen::VectorXd&)>;

struct OdeResult {
  OdeOutcome outcome;
  double t_end;
  Eigen::VectorXd y_end;
};

/// Adaptive Dormand-Prince RK4(5) from t0 to t1.
OdeResult integrate_dormand_prince(const OdeRhs& rhs, double t0, const Eigen::VectorXd& y0, double t1,
                                   const OdeSettings& settings, const OdeObserver& observer);

/// One explicit Dormand-Prince step of size h (no error control).
Eigen::VectorXd dormand_prince_step(const OdeRhs& rhs, double t, const Eigen::VectorXd& y, double h);

}  // namespace refgov
