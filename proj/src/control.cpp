#include "refgov/control.hpp"

#include <cmath>
#include <stdexcept>

namespace refgov {

namespace {
constexpr int kMaxOrder = 8;
}

RobotState RobotState::zero_motion(const Vec2& position, int order) {
  if (order < 1) throw std::invalid_argument("RobotState: order must be >= 1");
  RobotState s;
  s.derivatives.assign(static_cast<size_t>(order), Vec2::Zero());
  s.derivatives[0] = position;
  return s;
}

Eigen::VectorXd RobotState::flatten() const {
  Eigen::VectorXd y(2 * order());
  for (int i = 0; i < order(); ++i) y.segment<2>(2 * i) = derivatives[i];
  return y;
}

RobotState RobotState::unflatten(const Eigen::VectorXd& y, int order) {
  if (y.size() != 2 * order) throw std::invalid_argument("RobotState::unflatten: size mismatch");
  RobotState s;
  s.derivatives.resize(static_cast<size_t>(order));
  for (int i = 0; i < order; ++i) s.derivatives[i] = y.segment<2>(2 * i);
  return s;
}

double RobotState::error_norm(const Vec2& goal) const {
  double acc = (derivatives[0] - goal).squaredNorm();
  for (int i = 1; i < order(); ++i) acc += derivatives[i].squaredNorm();
  return std::sqrt(acc);
}

bool RobotState::is_zero_motion(double tol) const {
  for (int i = 1; i < order(); ++i)
    if (derivatives[i].norm() > tol) return false;
  return true;
}

Eigen::VectorXd gains_from_roots(const std::vector<std::complex<double>>& roots) {
  const int n = static_cast<int>(roots.size());
  if (n < 1 || n > kMaxOrder) throw std::invalid_argument("gains_from_roots: order must be in 1..8");
  for (const auto& r : roots)
    if (r.real() >= 0.0) throw std::invalid_argument("gains_from_roots: roots must have negative real part");

  // Expand prod (lambda - root_i); coeffs[i] multiplies lambda^i.
  std::vector<std::complex<double>> coeffs{1.0};
  for (const auto& r : roots) {
    std::vector<std::complex<double>> next(coeffs.size() + 1, 0.0);
    for (size_t i = 0; i < coeffs.size(); ++i) {
      next[i + 1] += coeffs[i];
      next[i] -= coeffs[i] * r;
    }
    coeffs = std::move(next);
  }
  Eigen::VectorXd gains(n);
  for (int i = 0; i < n; ++i) {
    if (std::abs(coeffs[i].imag()) > 1e-9 * std::max(1.0, std::abs(coeffs[i].real())))
      throw std::invalid_argument("gains_from_roots: complex roots must come in conjugate pairs");
    gains[i] = coeffs[i].real();
  }
  return gains;
}

Eigen::VectorXd gains_from_roots(const std::vector<double>& roots) {
  std::vector<std::complex<double>> c(roots.begin(), roots.end());
  return gains_from_roots(c);
}

Eigen::MatrixXd companion_matrix(const Eigen::VectorXd& gains) {
  const int n = static_cast<int>(gains.size());
  if (n < 1) throw std::invalid_argument("companion_matrix: empty gain list");
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i + 1 < n; ++i) a(i, i + 1) = 1.0;
  for (int i = 0; i < n; ++i) a(n - 1, i) = -gains[i];
  return a;
}

PhdController PhdController::from_roots(const std::vector<std::complex<double>>& roots) {
  PhdController ctrl;
  ctrl.order_ = static_cast<int>(roots.size());
  ctrl.roots_ = roots;
  ctrl.gains_ = gains_from_roots(roots);
  ctrl.companion_ = companion_matrix(ctrl.gains_);
  ctrl.non_overshooting_ = true;
  for (const auto& r : roots)
    if (r.imag() != 0.0 || r.real() >= 0.0) ctrl.non_overshooting_ = false;
  return ctrl;
}

PhdController PhdController::from_roots(const std::vector<double>& roots) {
  std::vector<std::complex<double>> c(roots.begin(), roots.end());
  return from_roots(c);
}

std::vector<double> PhdController::real_roots() const {
  std::vector<double> out;
  out.reserve(roots_.size());
  for (const auto& r : roots_) {
    if (r.imag() != 0.0) throw std::logic_error("PhdController::real_roots: controller has complex roots");
    out.push_back(r.real());
  }
  return out;
}

Eigen::MatrixXd PhdController::state_space_matrix() const {
  return kronecker(companion_, Eigen::MatrixXd::Identity(2, 2));
}

RobotState closed_loop_derivative(const PhdController& ctrl, const RobotState& state, const Vec2& goal) {
  const int n = ctrl.order();
  if (state.order() != n) throw std::invalid_argument("closed_loop_derivative: state order mismatch");
  RobotState d;
  d.derivatives.resize(static_cast<size_t>(n));
  for (int i = 0; i + 1 < n; ++i) d.derivatives[i] = state.derivatives[i + 1];
  Vec2 top = ctrl.gains()[0] * goal;
  for (int i = 0; i < n; ++i) top -= ctrl.gains()[i] * state.derivatives[i];
  d.derivatives[n - 1] = top;
  return d;
}

Eigen::MatrixXd kronecker(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

}  // namespace refgov
