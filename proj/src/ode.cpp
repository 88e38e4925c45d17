#include "refgov/ode.hpp"

#include <algorithm>
#include <cmath>

namespace refgov {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0, a64 = 49.0 / 176.0,
                 a65 = -5103.0 / 18656.0;
constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0, b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
// b - b* (5th minus embedded 4th order weights).
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0, e5 = -17253.0 / 339200.0,
                 e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;

struct StepResult {
  Eigen::VectorXd y_new;
  Eigen::VectorXd err;
  Eigen::VectorXd k7;  // FSAL derivative at (t+h, y_new)
};

StepResult dp_step(const OdeRhs& rhs, double t, const Eigen::VectorXd& y, double h, const Eigen::VectorXd& k1) {
  const Eigen::VectorXd k2 = rhs(t + c2 * h, y + h * (a21 * k1), 1);
  const Eigen::VectorXd k3 = rhs(t + c3 * h, y + h * (a31 * k1 + a32 * k2), 2);
  const Eigen::VectorXd k4 = rhs(t + c4 * h, y + h * (a41 * k1 + a42 * k2 + a43 * k3), 3);
  const Eigen::VectorXd k5 = rhs(t + c5 * h, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4), 4);
  const Eigen::VectorXd k6 = rhs(t + h, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5), 5);
  StepResult out;
  out.y_new = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
  out.k7 = rhs(t + h, out.y_new, 6);
  out.err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * out.k7);
  return out;
}

double error_norm(const Eigen::VectorXd& err, const Eigen::VectorXd& y0, const Eigen::VectorXd& y1,
                  const OdeSettings& s) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < err.size(); ++i) {
    const double scale = s.abs_tol + s.rel_tol * std::max(std::abs(y0[i]), std::abs(y1[i]));
    const double q = err[i] / scale;
    acc += q * q;
  }
  return std::sqrt(acc / static_cast<double>(err.size()));
}

}  // namespace

Eigen::VectorXd dormand_prince_step(const OdeRhs& rhs, double t, const Eigen::VectorXd& y, double h) {
  const Eigen::VectorXd k1 = rhs(t, y, 0);
  return dp_step(rhs, t, y, h, k1).y_new;
}

OdeResult integrate_dormand_prince(const OdeRhs& rhs, double t0, const Eigen::VectorXd& y0, double t1,
                                   const OdeSettings& settings, const OdeObserver& observer) {
  double t = t0;
  Eigen::VectorXd y = y0;
  double h = std::min(settings.initial_step, settings.max_step);
  Eigen::VectorXd k1 = rhs(t, y, 0);

  while (t < t1) {
    h = std::min(h, t1 - t);
    if (h < 1e-12 * std::max(1.0, std::abs(t))) return {OdeOutcome::step_underflow, t, y};

    const StepResult step = dp_step(rhs, t, y, h, k1);
    const double err = error_norm(step.err, y, step.y_new, settings);
    if (err <= 1.0) {
      t += h;
      y = step.y_new;
      k1 = step.k7;  // first-same-as-last
      if (!observer(t, y)) return {OdeOutcome::stopped_by_observer, t, y};
      const double factor = err > 0.0 ? 0.9 * std::pow(err, -0.2) : 5.0;
      h = std::min(settings.max_step, h * std::clamp(factor, 0.2, 5.0));
    } else {
      h *= std::clamp(0.9 * std::pow(err, -0.2), 0.1, 0.9);
    }
  }
  return {OdeOutcome::reached_end, t, y};
}

}  // namespace refgov
