#include "refgov/prediction.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace refgov {

namespace {

// Solve A^T X + X A = -Q by vectorization; sizes here are at most 16 x 16.
Eigen::MatrixXd solve_sylvester_symmetric(const Eigen::MatrixXd& a, const Eigen::MatrixXd& q) {
  const Eigen::Index n = a.rows();
  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(n, n);
  const Eigen::MatrixXd lhs = kronecker(eye, a.transpose()) + kronecker(a.transpose(), eye);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(lhs);
  if (!lu.isInvertible()) throw std::runtime_error("solve_lyapunov: singular vectorized system");
  Eigen::VectorXd rhs(n * n);
  for (Eigen::Index j = 0; j < n; ++j) rhs.segment(j * n, n) = -q.col(j);
  const Eigen::VectorXd vec = lu.solve(rhs);
  Eigen::MatrixXd x(n, n);
  for (Eigen::Index j = 0; j < n; ++j) x.col(j) = vec.segment(j * n, n);
  return 0.5 * (x + x.transpose());
}

void check_positive_definite(const Eigen::MatrixXd& p, const char* what) {
  Eigen::LLT<Eigen::MatrixXd> llt(p);
  if (llt.info() != Eigen::Success) throw std::runtime_error(std::string(what) + ": P not positive definite");
}

double spectral_norm_sym(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace

ConvexSet MotionRange::as_convex_set() const {
  if (const auto* e = std::get_if<ProjectedEllipsoid>(&region))
    return ConvexSet::ellipse(e->center, e->shape, e->scale);
  return ConvexSet::polytope(std::get<SimplexRange>(region).vertices);
}

double MotionRange::extent_from(const Vec2& c) const {
  if (const auto* e = std::get_if<ProjectedEllipsoid>(&region)) {
    Eigen::SelfAdjointEigenSolver<Mat2> es(e->shape);
    const double smax = std::sqrt(std::max(es.eigenvalues().maxCoeff(), 0.0));
    return (e->center - c).norm() + e->scale * smax;
  }
  double best = 0.0;
  for (const Vec2& v : std::get<SimplexRange>(region).vertices) best = std::max(best, (v - c).norm());
  return best;
}

double MotionRange::distance_to(const Vec2& p) const {
  if (const auto* e = std::get_if<ProjectedEllipsoid>(&region)) {
    if (e->scale <= 0.0) return (p - e->center).norm();
    return convex_distance(ConvexSet::point(p), as_convex_set());
  }
  return point_convex_polygon_distance(p, convex_hull(std::get<SimplexRange>(region).vertices));
}

double MotionRange::diameter() const {
  if (const auto* e = std::get_if<ProjectedEllipsoid>(&region)) {
    Eigen::SelfAdjointEigenSolver<Mat2> es(e->shape);
    return 2.0 * e->scale * std::sqrt(std::max(es.eigenvalues().maxCoeff(), 0.0));
  }
  const auto& vs = std::get<SimplexRange>(region).vertices;
  double best = 0.0;
  for (size_t i = 0; i < vs.size(); ++i)
    for (size_t j = i + 1; j < vs.size(); ++j) best = std::max(best, (vs[i] - vs[j]).norm());
  return best;
}

Eigen::MatrixXd LyapunovCertificate::full() const {
  if (!kron_) return pn_;
  return kronecker(pn_, Eigen::MatrixXd::Identity(2, 2));
}

double LyapunovCertificate::weighted_error_norm(const RobotState& state, const Vec2& goal) const {
  if (state.order() != order_) throw std::invalid_argument("LyapunovCertificate: state order mismatch");
  if (kron_) {
    double acc = 0.0;
    for (int i = 0; i < order_; ++i) {
      const Vec2 di = state.derivatives[i] - (i == 0 ? goal : Vec2(Vec2::Zero()));
      for (int j = 0; j < order_; ++j) {
        const Vec2 dj = state.derivatives[j] - (j == 0 ? goal : Vec2(Vec2::Zero()));
        acc += pn_(i, j) * di.dot(dj);
      }
    }
    return std::sqrt(std::max(acc, 0.0));
  }
  Eigen::VectorXd err = state.flatten();
  err.segment<2>(0) -= goal;
  return std::sqrt(std::max(err.dot(pn_ * err), 0.0));
}

LyapunovCertificate solve_lyapunov(const PhdController& ctrl) {
  return solve_lyapunov(ctrl, Eigen::MatrixXd::Identity(2 * ctrl.order(), 2 * ctrl.order()));
}

LyapunovCertificate solve_lyapunov(const PhdController& ctrl, const Eigen::MatrixXd& c) {
  const int n = ctrl.order();
  if (c.cols() != 2 * n) throw std::invalid_argument("solve_lyapunov: decay matrix must have 2n columns");
  for (const auto& r : ctrl.roots())
    if (r.real() >= 0.0) throw std::invalid_argument("solve_lyapunov: controller not Hurwitz");

  LyapunovCertificate cert;
  cert.order_ = n;
  cert.c_ = c;
  const bool identity_c = c.rows() == 2 * n && c.isIdentity(0.0);
  if (identity_c) {
    cert.kron_ = true;
    cert.pn_ = solve_sylvester_symmetric(ctrl.companion(), Eigen::MatrixXd::Identity(n, n));
    check_positive_definite(cert.pn_, "solve_lyapunov");
    const Eigen::MatrixXd pn_inv = cert.pn_.inverse();
    cert.shape_ = pn_inv(0, 0) * Mat2::Identity();
    cert.beta_ = std::sqrt(pn_inv(0, 0) * spectral_norm_sym(cert.pn_));
    const Eigen::MatrixXd resid = ctrl.companion().transpose() * cert.pn_ + cert.pn_ * ctrl.companion() +
                                  Eigen::MatrixXd::Identity(n, n);
    if (resid.norm() >= 1e-8) throw std::runtime_error("solve_lyapunov: residual exceeds 1e-8");
    return cert;
  }

  const Eigen::MatrixXd abar = ctrl.state_space_matrix();
  cert.kron_ = false;
  cert.pn_ = solve_sylvester_symmetric(abar, c.transpose() * c);
  check_positive_definite(cert.pn_, "solve_lyapunov");
  const Eigen::MatrixXd p_inv = cert.pn_.inverse();
  cert.shape_ = p_inv.topLeftCorner<2, 2>();
  cert.beta_ = std::sqrt(spectral_norm_sym(cert.shape_) * spectral_norm_sym(cert.pn_));
  const Eigen::MatrixXd resid = abar.transpose() * cert.pn_ + cert.pn_ * abar + c.transpose() * c;
  if (resid.norm() >= 1e-8) throw std::runtime_error("solve_lyapunov: residual exceeds 1e-8");
  return cert;
}

MotionRange lyapunov_range(const LyapunovCertificate& cert, const RobotState& state, const Vec2& goal) {
  const double scale = cert.weighted_error_norm(state, goal);
  return MotionRange{ProjectedEllipsoid{goal, cert.projected_shape(), scale}};
}

double lyapunov_beta(const LyapunovCertificate& cert) { return cert.beta(); }

VandermondeCoefficients vandermonde_coefficients(const std::vector<double>& roots) {
  const int n = static_cast<int>(roots.size());
  if (n < 1 || n > 8) throw std::invalid_argument("vandermonde_coefficients: order must be in 1..8");
  for (double r : roots)
    if (!(r < 0.0)) throw std::invalid_argument("vandermonde_coefficients: roots must be real negative");

  // Nudge exact duplicates apart so the excluded-root product is unambiguous.
  std::vector<double> work = roots;
  std::sort(work.begin(), work.end());
  for (size_t i = 1; i < work.size(); ++i)
    if (work[i] - work[i - 1] < 1e-9) work[i] = work[i - 1] + 1e-9;

  const auto max_it = std::max_element(work.begin(), work.end());
  std::vector<double> reduced;
  for (auto it = work.begin(); it != work.end(); ++it)
    if (it != max_it) reduced.push_back(*it);

  std::vector<double> coeffs{1.0};
  for (double r : reduced) {
    std::vector<double> next(coeffs.size() + 1, 0.0);
    for (size_t i = 0; i < coeffs.size(); ++i) {
      next[i + 1] += coeffs[i];
      next[i] -= coeffs[i] * r;
    }
    coeffs = std::move(next);
  }

  VandermondeCoefficients out;
  out.h = Eigen::Map<Eigen::VectorXd>(coeffs.data(), static_cast<Eigen::Index>(coeffs.size()));
  for (int i = 0; i < out.h.size(); ++i)
    if (!(out.h[i] > 0.0)) throw std::runtime_error("vandermonde_coefficients: non-positive coefficient");
  out.beta = std::sqrt(static_cast<double>(n)) * out.h.maxCoeff() / out.h[0];
  return out;
}

MotionRange vandermonde_range(const VandermondeCoefficients& coeffs, const RobotState& state, const Vec2& goal) {
  const int n = coeffs.order();
  if (state.order() != n) throw std::invalid_argument("vandermonde_range: state order mismatch");
  SimplexRange simplex;
  simplex.vertices.reserve(static_cast<size_t>(n) + 1);
  simplex.vertices.push_back(goal);
  Vec2 acc = Vec2::Zero();
  for (int k = 0; k < n; ++k) {
    acc += (coeffs.h[k] / coeffs.h[0]) * state.derivatives[k];
    simplex.vertices.push_back(acc);
  }
  return MotionRange{std::move(simplex)};
}

Ball range_bounding_ball(const MotionRange& range, double beta, const RobotState& state, const Vec2& goal) {
  (void)range;
  return Ball{goal, beta * state.error_norm(goal)};
}

}  // namespace refgov
