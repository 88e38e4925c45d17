#include "refgov/simulator.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace refgov {

namespace {

Eigen::VectorXd pack(const RobotState& state, const Vec2& governor) {
  Eigen::VectorXd y(2 * state.order() + 2);
  y.head(2 * state.order()) = state.flatten();
  y.tail<2>() = governor;
  return y;
}

void unpack(const Eigen::VectorXd& y, int order, RobotState& state, Vec2& governor) {
  state = RobotState::unflatten(y.head(2 * order), order);
  governor = y.tail<2>();
}

}  // namespace

SimulationModel::SimulationModel(const Scenario& scenario)
    : scenario_(scenario),
      fs_(build_free_space(scenario.environment, scenario.arc_tolerance)),
      path_(scenario.waypoints),
      ctrl_(PhdController::from_roots(scenario.roots)) {
  if (scenario_.initial_state.order() != ctrl_.order())
    throw std::invalid_argument("Scenario: initial state order does not match the controller order");
  if (scenario_.governor_gain < 0.0) throw std::invalid_argument("Scenario: governor gain must be >= 0");
  if (scenario_.path_gain <= 0.0) throw std::invalid_argument("Scenario: path gain must be positive");
  if (scenario_.horizon <= 0.0) throw std::invalid_argument("Scenario: horizon must be positive");
  if (scenario_.method == PredictionMethod::lyapunov) {
    cert_ = solve_lyapunov(ctrl_);
    beta_ = cert_->beta();
  } else {
    coeffs_ = vandermonde_coefficients(scenario.roots);
    beta_ = coeffs_->beta;
  }
}

MotionRange SimulationModel::predict(const RobotState& state, const Vec2& governor) const {
  if (cert_) return lyapunov_range(*cert_, state, governor);
  return vandermonde_range(*coeffs_, state, governor);
}

double SimulationModel::safety(const RobotState& state, const Vec2& governor) const {
  return safety_level(fs_, predict(state, governor), state.position());
}

std::pair<RobotState, Vec2> SimulationModel::system_derivative(const RobotState& state, const Vec2& governor) const {
  RobotState dstate = closed_loop_derivative(ctrl_, state, governor);
  Vec2 dgov = Vec2::Zero();
  if (scenario_.governor_gain > 0.0) {
    const double delta = safety(state, governor);
    const Vec2 field = reference_field(path_, governor, fs_, scenario_.path_gain);
    dgov = governor_velocity(delta, field, scenario_.governor_gain);
  }
  return {std::move(dstate), dgov};
}

std::vector<std::string> SimulationModel::validate() const {
  std::vector<std::string> problems;
  for (size_t i = 0; i < path_.waypoints().size(); ++i) {
    const Vec2& w = path_.waypoints()[i];
    if (!fs_.contains(w) || fs_.point_boundary_distance(w) <= 0.0) {
      std::ostringstream msg;
      msg << "waypoint " << i << " is not strictly inside the free space";
      problems.push_back(msg.str());
    }
  }
  if (!fs_.contains(scenario_.initial_governor) || !in_planner_domain(path_, scenario_.initial_governor, fs_))
    problems.push_back("initial governor position is outside the planner domain");
  const double delta0 = safety(scenario_.initial_state, scenario_.initial_governor);
  if (delta0 <= 0.0) {
    std::ostringstream msg;
    msg << "initial safety level is " << delta0 << " (must be positive)";
    problems.push_back(msg.str());
  }
  return problems;
}

bool SimulationModel::converged(const RobotState& state, const Vec2& governor) const {
  const Vec2& goal = path_.goal();
  if ((state.position() - goal).norm() >= kPositionTol) return false;
  if ((governor - goal).norm() >= kPositionTol) return false;
  for (int i = 1; i < state.order(); ++i)
    if (state.derivatives[i].norm() >= kMotionTol) return false;
  return true;
}

TraceSample SimulationModel::make_sample(double t, const RobotState& state, const Vec2& governor) const {
  TraceSample s;
  s.t = t;
  s.state = state;
  s.governor = governor;
  const MotionRange range = predict(state, governor);
  s.safety = safety_level(fs_, range, state.position());
  s.ref_speed = reference_field(path_, governor, fs_, scenario_.path_gain).norm();
  s.path_alpha = projected_path_goal(path_, governor, fs_).alpha;
  s.range_extent = range.extent_from(governor);
  s.bounding_radius = beta_ * state.error_norm(governor);
  return s;
}

Trace SimulationModel::run() const {
  const auto problems = validate();
  if (!problems.empty()) {
    std::ostringstream msg;
    msg << "scenario rejected:";
    for (const auto& p : problems) msg << " " << p << ";";
    throw std::runtime_error(msg.str());
  }

  const int n = ctrl_.order();
  Trace trace;

  // Per-step safety cache: refreshed on the stages that begin a step (0, and
  // 6 which is first-same-as-last for the next step).
  struct SafetyCache {
    bool valid = false;
    double delta = 0.0;
  } cache;
  const OdeRhs rhs = [&](double, const Eigen::VectorXd& y, int stage) -> Eigen::VectorXd {
    RobotState state;
    Vec2 governor;
    unpack(y, n, state, governor);
    Vec2 dgov = Vec2::Zero();
    if (scenario_.governor_gain > 0.0) {
      double delta;
      if (scenario_.cache_safety_per_step && stage != 0 && stage != 6 && cache.valid) {
        delta = cache.delta;
      } else {
        delta = safety(state, governor);
        cache.valid = true;
        cache.delta = delta;
      }
      const Vec2 field = reference_field(path_, governor, fs_, scenario_.path_gain);
      dgov = governor_velocity(delta, field, scenario_.governor_gain);
    }
    const RobotState dstate = closed_loop_derivative(ctrl_, state, governor);
    Eigen::VectorXd dy(2 * n + 2);
    dy.head(2 * n) = dstate.flatten();
    dy.tail<2>() = dgov;
    return dy;
  };

  RobotState state = scenario_.initial_state;
  Vec2 governor = scenario_.initial_governor;
  Eigen::VectorXd y = pack(state, governor);
  trace.samples.push_back(make_sample(0.0, state, governor));

  if (converged(state, governor)) {
    trace.status = RunStatus::converged;
  } else {
    double t_prev = 0.0;
    Eigen::VectorXd y_prev = y;
    bool hit_convergence = false;
    const OdeObserver observer = [&](double t, const Eigen::VectorXd& yt) {
      RobotState st;
      Vec2 gv;
      unpack(yt, n, st, gv);
      if (converged(st, gv)) {
        // Refine the crossing so the recorded travel time does not depend on
        // the accepted step size: bisect on a single explicit step from the
        // previous sample.
        double lo = 0.0, hi = t - t_prev;
        for (int it = 0; it < 40 && (hi - lo) > 1e-10 * std::max(1.0, hi); ++it) {
          const double mid = 0.5 * (lo + hi);
          const Eigen::VectorXd ym = dormand_prince_step(rhs, t_prev, y_prev, mid);
          RobotState sm;
          Vec2 gm;
          unpack(ym, n, sm, gm);
          if (converged(sm, gm)) hi = mid;
          else lo = mid;
        }
        const Eigen::VectorXd yf = dormand_prince_step(rhs, t_prev, y_prev, hi);
        RobotState sf;
        Vec2 gf;
        unpack(yf, n, sf, gf);
        trace.samples.push_back(make_sample(t_prev + hi, sf, gf));
        hit_convergence = true;
        return false;
      }
      trace.samples.push_back(make_sample(t, st, gv));
      t_prev = t;
      y_prev = yt;
      return true;
    };

    const OdeResult result =
        integrate_dormand_prince(rhs, 0.0, y, scenario_.horizon, scenario_.integrator, observer);
    if (hit_convergence) {
      trace.status = RunStatus::converged;
    } else if (result.outcome == OdeOutcome::reached_end) {
      trace.status = RunStatus::horizon;
      trace.message = "horizon reached before convergence";
    } else if (result.outcome == OdeOutcome::step_underflow) {
      trace.status = RunStatus::error;
      std::ostringstream msg;
      msg << "integrator step underflow at t=" << result.t_end;
      trace.message = msg.str();
    } else {
      trace.status = RunStatus::error;
      trace.message = "integration stopped unexpectedly";
    }
  }

  trace.travel_time = trace.samples.back().t;
  trace.min_clearance = std::numeric_limits<double>::infinity();
  trace.path_length = 0.0;
  for (size_t i = 0; i < trace.samples.size(); ++i) {
    const Vec2& p = trace.samples[i].state.position();
    trace.min_clearance = std::min(trace.min_clearance, fs_.point_boundary_distance(p));
    if (i > 0) trace.path_length += (p - trace.samples[i - 1].state.position()).norm();
  }
  return trace;
}

Trace run(const Scenario& scenario) { return SimulationModel(scenario).run(); }

std::vector<std::string> validate_scenario(const Scenario& scenario) {
  return SimulationModel(scenario).validate();
}

const char* to_string(RunStatus status) {
  switch (status) {
    case RunStatus::converged: return "converged";
    case RunStatus::horizon: return "horizon";
    default: return "error";
  }
}

const char* to_string(PredictionMethod method) {
  return method == PredictionMethod::lyapunov ? "lyapunov" : "vandermonde";
}

}  // namespace refgov
