#pragma once

#include <optional>
#include <string>
#include <vector>

#include "refgov/environment.hpp"
#include "refgov/governor.hpp"
#include "refgov/ode.hpp"
#include "refgov/planner.hpp"
#include "refgov/prediction.hpp"

namespace refgov {

enum class PredictionMethod { lyapunov, vandermonde };

// Zero-motion convergence thresholds (meters / derivative units).
constexpr double kPositionTol = 1e-2;
constexpr double kMotionTol = 1e-2;

struct Scenario {
  std::string name = "scenario";
  Environment environment;
  std::vector<Vec2> waypoints;
  std::vector<double> roots;  // controller order = roots.size()
  PredictionMethod method = PredictionMethod::vandermonde;
  double governor_gain = 4.0;  // 0 freezes the governor
  double path_gain = 1.0;
  RobotState initial_state;
  Vec2 initial_governor = Vec2::Zero();
  OdeSettings integrator;
  double horizon = 120.0;
  double arc_tolerance = 1e-3;
  bool cache_safety_per_step = false;

  int order() const { return static_cast<int>(roots.size()); }
};

enum class RunStatus { converged, horizon, error };

struct TraceSample {
  double t;
  RobotState state;
  Vec2 governor;
  double safety;        // Delta
  double ref_speed;     // |reference field|
  double path_alpha;    // projected path goal parameter
  double range_extent;  // max distance of the range from the governor
  double bounding_radius;
};

struct Trace {
  std::vector<TraceSample> samples;
  RunStatus status = RunStatus::error;
  std::string message;
  double travel_time = 0.0;    // last sample timestamp
  double min_clearance = 0.0;  // min over samples of d(p(t), dF)
  double path_length = 0.0;    // robot arc length
};

/// Scenario with its derived objects (free space, path, controller,
/// prediction certificate) built once. Immutable after construction.
class SimulationModel {
 public:
  explicit SimulationModel(const Scenario& scenario);

  const Scenario& scenario() const { return scenario_; }
  const FreeSpace& free_space() const { return fs_; }
  const ReferencePath& path() const { return path_; }
  const PhdController& controller() const { return ctrl_; }
  double beta() const { return beta_; }

  MotionRange predict(const RobotState& state, const Vec2& governor) const;
  double safety(const RobotState& state, const Vec2& governor) const;

  /// Coupled dynamics: robot part under PhD control towards the governor,
  /// governor part throttled by the safety level.
  std::pair<RobotState, Vec2> system_derivative(const RobotState& state, const Vec2& governor) const;

  /// Hard precondition violations (empty when the scenario is runnable).
  std::vector<std::string> validate() const;

  Trace run() const;

 private:
  bool converged(const RobotState& state, const Vec2& governor) const;
  TraceSample make_sample(double t, const RobotState& state, const Vec2& governor) const;

  Scenario scenario_;
  FreeSpace fs_;
  ReferencePath path_;
  PhdController ctrl_;
  std::optional<LyapunovCertificate> cert_;
  std::optional<VandermondeCoefficients> coeffs_;
  double beta_ = 0.0;
};

Trace run(const Scenario& scenario);
std::vector<std::string> validate_scenario(const Scenario& scenario);

const char* to_string(RunStatus status);
const char* to_string(PredictionMethod method);

}  // namespace refgov
