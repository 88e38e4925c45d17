#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "refgov/scenario_io.hpp"

namespace py = pybind11;
using namespace refgov;

namespace {

RobotState state_from_rows(const std::vector<Vec2>& rows) {
  RobotState s;
  s.derivatives = rows;
  if (s.derivatives.empty()) throw std::invalid_argument("robot state needs at least one derivative row");
  return s;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Reference-governor feedback motion planning for high-order robots";

  py::register_exception<ScenarioError>(m, "ScenarioError");

  // --- geometry -----------------------------------------------------------
  py::class_<Ball>(m, "Ball")
      .def(py::init([](const Vec2& center, double radius) { return Ball{center, radius}; }), py::arg("center"),
           py::arg("radius"))
      .def_readonly("center", &Ball::center)
      .def_readonly("radius", &Ball::radius);

  py::class_<ConvexSet>(m, "ConvexSet")
      .def_static("point", &ConvexSet::point, py::arg("p"))
      .def_static("segment", &ConvexSet::segment, py::arg("a"), py::arg("b"))
      .def_static("disk", &ConvexSet::disk, py::arg("center"), py::arg("radius"))
      .def_static("ellipse", &ConvexSet::ellipse, py::arg("center"), py::arg("shape"), py::arg("scale"))
      .def_static("polytope", &ConvexSet::polytope, py::arg("vertices"))
      .def("translated", &ConvexSet::translated, py::arg("offset"));

  m.def("project_to_ball", &project_to_ball, py::arg("point"), py::arg("ball"));
  m.def("support_point", &support_point, py::arg("set"), py::arg("direction"));
  m.def("convex_distance", &convex_distance, py::arg("a"), py::arg("b"));
  m.def("brute_force_distance", &brute_force_distance, py::arg("a"), py::arg("b"), py::arg("samples"));
  m.def("matrix_sqrt_psd", &matrix_sqrt_psd, py::arg("matrix"));

  // --- environment ----------------------------------------------------------
  py::class_<Environment>(m, "Environment")
      .def(py::init([](py::dict workspace, py::list obstacles, double robot_radius) {
             Environment env;
             auto region = [](py::handle h) -> ConvexRegion {
               py::dict d = h.cast<py::dict>();
               const std::string type = d["type"].cast<std::string>();
               if (type == "disk") return make_disk_region(d["center"].cast<Vec2>(), d["radius"].cast<double>());
               if (type == "polygon") return make_polygon_region(d["vertices"].cast<std::vector<Vec2>>());
               throw std::invalid_argument("region type must be disk or polygon");
             };
             env.workspace = region(workspace);
             for (py::handle ob : obstacles) env.obstacles.push_back(region(ob));
             env.robot_radius = robot_radius;
             return env;
           }),
           py::arg("workspace"), py::arg("obstacles") = py::list(), py::arg("robot_radius") = 0.0);

  py::class_<FreeSpace>(m, "FreeSpace")
      .def("contains", &FreeSpace::contains, py::arg("p"))
      .def("point_boundary_distance", &FreeSpace::point_boundary_distance, py::arg("p"))
      .def("set_boundary_distance", &FreeSpace::set_boundary_distance, py::arg("set"))
      .def_property_readonly("warnings", &FreeSpace::warnings)
      .def_property_readonly("connected_components", &FreeSpace::connected_components);

  m.def("build_free_space", &build_free_space, py::arg("environment"), py::arg("arc_tolerance") = 1e-3);

  // --- control --------------------------------------------------------------
  py::class_<RobotState>(m, "RobotState")
      .def(py::init(&state_from_rows), py::arg("derivatives"))
      .def_static("zero_motion", &RobotState::zero_motion, py::arg("position"), py::arg("order"))
      .def_readonly("derivatives", &RobotState::derivatives)
      .def_property_readonly("order", &RobotState::order)
      .def_property_readonly("position", [](const RobotState& s) { return s.position(); })
      .def("error_norm", &RobotState::error_norm, py::arg("goal"));

  py::class_<PhdController>(m, "PhdController")
      .def_static("from_roots",
                  [](const std::vector<double>& roots) { return PhdController::from_roots(roots); },
                  py::arg("roots"))
      .def_property_readonly("order", &PhdController::order)
      .def_property_readonly("gains", &PhdController::gains)
      .def_property_readonly("companion", &PhdController::companion)
      .def_property_readonly("non_overshooting", &PhdController::non_overshooting);

  m.def("gains_from_roots",
        [](const std::vector<double>& roots) { return gains_from_roots(roots); }, py::arg("roots"));
  m.def("companion_matrix", &companion_matrix, py::arg("gains"));
  m.def("closed_loop_derivative", &closed_loop_derivative, py::arg("controller"), py::arg("state"),
        py::arg("goal"));

  // --- prediction -------------------------------------------------------------
  py::class_<MotionRange>(m, "MotionRange")
      .def("as_convex_set", &MotionRange::as_convex_set)
      .def("contains", &MotionRange::contains, py::arg("p"), py::arg("inflation") = 0.0)
      .def("distance_to", &MotionRange::distance_to, py::arg("p"))
      .def_property_readonly("diameter", &MotionRange::diameter)
      .def_property_readonly("vertices", [](const MotionRange& r) -> py::object {
        if (const auto* s = std::get_if<SimplexRange>(&r.region)) return py::cast(s->vertices);
        return py::none();
      })
      .def_property_readonly("ellipsoid", [](const MotionRange& r) -> py::object {
        if (const auto* e = std::get_if<ProjectedEllipsoid>(&r.region))
          return py::make_tuple(e->center, e->shape, e->scale);
        return py::none();
      });

  py::class_<LyapunovCertificate>(m, "LyapunovCertificate")
      .def_property_readonly("beta", &LyapunovCertificate::beta)
      .def_property_readonly("order", &LyapunovCertificate::order)
      .def_property_readonly("kronecker_form", &LyapunovCertificate::kronecker_form)
      .def_property_readonly("factor", &LyapunovCertificate::factor)
      .def("full", &LyapunovCertificate::full)
      .def("weighted_error_norm", &LyapunovCertificate::weighted_error_norm, py::arg("state"), py::arg("goal"));

  m.def("solve_lyapunov", [](const PhdController& ctrl) { return solve_lyapunov(ctrl); }, py::arg("controller"));
  m.def("solve_lyapunov",
        [](const PhdController& ctrl, const Eigen::MatrixXd& c) { return solve_lyapunov(ctrl, c); },
        py::arg("controller"), py::arg("decay"));
  m.def("lyapunov_range", &lyapunov_range, py::arg("certificate"), py::arg("state"), py::arg("goal"));
  m.def("lyapunov_beta", &lyapunov_beta, py::arg("certificate"));

  py::class_<VandermondeCoefficients>(m, "VandermondeCoefficients")
      .def_readonly("h", &VandermondeCoefficients::h)
      .def_readonly("beta", &VandermondeCoefficients::beta);
  m.def("vandermonde_coefficients", &vandermonde_coefficients, py::arg("roots"));
  m.def("vandermonde_range", &vandermonde_range, py::arg("coefficients"), py::arg("state"), py::arg("goal"));
  m.def("range_bounding_ball", &range_bounding_ball, py::arg("range"), py::arg("beta"), py::arg("state"),
        py::arg("goal"));

  // --- governor & planner ---------------------------------------------------
  m.def("safety_level", &safety_level, py::arg("free_space"), py::arg("range"), py::arg("robot_pos"));
  m.def("governor_velocity", &governor_velocity, py::arg("delta"), py::arg("ref_vel"), py::arg("gain"));

  py::class_<ReferencePath>(m, "ReferencePath")
      .def(py::init<std::vector<Vec2>>(), py::arg("waypoints"))
      .def_property_readonly("total_length", &ReferencePath::total_length)
      .def_property_readonly("goal", &ReferencePath::goal)
      .def("point_at", &ReferencePath::point_at, py::arg("alpha"));

  m.def("projected_path_goal",
        [](const ReferencePath& path, const Vec2& g, const FreeSpace& fs) {
          const PathGoal pg = projected_path_goal(path, g, fs);
          return py::make_tuple(pg.alpha, pg.point);
        },
        py::arg("path"), py::arg("governor"), py::arg("free_space"));
  m.def("reference_field", &reference_field, py::arg("path"), py::arg("governor"), py::arg("free_space"),
        py::arg("gain"));

  // --- simulation -------------------------------------------------------------
  py::enum_<RunStatus>(m, "RunStatus")
      .value("converged", RunStatus::converged)
      .value("horizon", RunStatus::horizon)
      .value("error", RunStatus::error);

  py::class_<TraceSample>(m, "TraceSample")
      .def_readonly("t", &TraceSample::t)
      .def_readonly("state", &TraceSample::state)
      .def_readonly("governor", &TraceSample::governor)
      .def_readonly("safety", &TraceSample::safety)
      .def_readonly("ref_speed", &TraceSample::ref_speed)
      .def_readonly("path_alpha", &TraceSample::path_alpha);

  py::class_<Trace>(m, "Trace")
      .def_readonly("samples", &Trace::samples)
      .def_readonly("status", &Trace::status)
      .def_readonly("travel_time", &Trace::travel_time)
      .def_readonly("min_clearance", &Trace::min_clearance)
      .def_readonly("path_length", &Trace::path_length);

  py::class_<Scenario>(m, "Scenario")
      .def_readonly("name", &Scenario::name)
      .def_readwrite("roots", &Scenario::roots)
      .def_readwrite("governor_gain", &Scenario::governor_gain)
      .def_readwrite("path_gain", &Scenario::path_gain)
      .def_readwrite("horizon", &Scenario::horizon)
      .def_property_readonly("order", &Scenario::order);

  py::class_<SimulationModel>(m, "SimulationModel")
      .def(py::init<const Scenario&>(), py::arg("scenario"))
      .def("predict", &SimulationModel::predict, py::arg("state"), py::arg("governor"))
      .def("safety", &SimulationModel::safety, py::arg("state"), py::arg("governor"))
      .def("validate", &SimulationModel::validate)
      .def("run", &SimulationModel::run)
      .def_property_readonly("beta", &SimulationModel::beta);

  m.def("parse_scenario", &parse_scenario, py::arg("text"));
  m.def("serialize_scenario", &serialize_scenario, py::arg("scenario"));
  m.def("run_scenario", [](const Scenario& sc) { return run(sc); }, py::arg("scenario"));
  m.def("trace_to_csv", &trace_to_csv, py::arg("trace"));
  m.def("trace_summary_json", &trace_summary_json, py::arg("trace"));
  m.def(
      "trace_to_svg",
      [](const SimulationModel& model, const Trace& trace, double snapshot_interval) {
        return trace_to_svg(model, trace, SvgOptions{snapshot_interval});
      },
      py::arg("model"), py::arg("trace"), py::arg("snapshot_interval") = 0.0);

  m.attr("__version__") = "0.1.0";
}
