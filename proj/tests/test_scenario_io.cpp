#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "refgov/scenario_io.hpp"
#include "support/scenarios.hpp"

using namespace refgov;

namespace {

const char* kMinimalScenario = R"({
  "version": 1,
  "environment": {
    "workspace": {"type": "disk", "center": [0, 0], "radius": 3.0},
    "obstacles": [{"type": "disk", "center": [0, 0], "radius": 1.0}],
    "robot_radius": 0.25
  },
  "path": [[2, 0], [0, 2], [-2, 0]],
  "control": {"order": 2, "roots": [-2, -1]},
  "prediction": "vandermonde"
})";

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("a minimal scenario parses with the published defaults") {
  const Scenario sc = parse_scenario(kMinimalScenario);
  CHECK(sc.governor_gain == 4.0);
  CHECK(sc.path_gain == 1.0);
  CHECK(sc.integrator.rel_tol == 1e-3);
  CHECK(sc.integrator.abs_tol == 1e-6);
  CHECK(sc.horizon == 120.0);
  CHECK(sc.order() == 2);
  CHECK(sc.method == PredictionMethod::vandermonde);
  // Initial state defaults to zero motion at the path start.
  CHECK((sc.initial_state.position() - Vec2(2, 0)).norm() == 0.0);
  CHECK(sc.initial_state.is_zero_motion());
  CHECK((sc.initial_governor - Vec2(2, 0)).norm() == 0.0);
}

TEST_CASE("diagnostics name the offending field") {
  std::string no_order = kMinimalScenario;
  const auto pos = no_order.find("\"order\": 2,");
  REQUIRE(pos != std::string::npos);
  no_order.replace(pos, 11, "");
  try {
    parse_scenario(no_order);
    FAIL("expected ScenarioError");
  } catch (const ScenarioError& e) {
    CHECK(std::string(e.what()).find("order") != std::string::npos);
  }

  CHECK_THROWS_AS(parse_scenario("{not json"), ScenarioError);
  CHECK_THROWS_AS(parse_scenario("{\"version\": 7}"), ScenarioError);

  std::string bad_method = kMinimalScenario;
  const auto mpos = bad_method.find("vandermonde");
  bad_method.replace(mpos, 11, "magic");
  try {
    parse_scenario(bad_method);
    FAIL("expected ScenarioError");
  } catch (const ScenarioError& e) {
    CHECK(std::string(e.what()).find("prediction") != std::string::npos);
  }
}

TEST_CASE("physically impossible starts are rejected with the computed safety level") {
  std::string doomed = kMinimalScenario;
  const auto pos = doomed.find("\"path\": [[2, 0], [0, 2], [-2, 0]]");
  REQUIRE(pos != std::string::npos);
  doomed.replace(pos, 33, "\"path\": [[1.25, 0], [0, 2], [-2, 0]]");  // start on the inner wall
  try {
    parse_scenario(doomed);
    FAIL("expected ScenarioError");
  } catch (const ScenarioError& e) {
    CHECK(std::string(e.what()).find("safety level") != std::string::npos);
  }
}

TEST_CASE("root interval shorthand expands to uniform spacing") {
  const std::vector<double> r3 = expand_root_interval(-2.0, -1.0, 3);
  REQUIRE(r3.size() == 3);
  CHECK(r3[0] == doctest::Approx(-2.0));
  CHECK(r3[1] == doctest::Approx(-1.5));
  CHECK(r3[2] == doctest::Approx(-1.0));
  CHECK(expand_root_interval(-2.0, -1.0, 1) == std::vector<double>{-1.0});
  CHECK_THROWS_AS(expand_root_interval(-1.0, 1.0, 2), ScenarioError);

  std::string interval = kMinimalScenario;
  const auto pos = interval.find("\"roots\": [-2, -1]");
  interval.replace(pos, 17, "\"root_interval\": [-2, -1]");
  std::string with_order3 = interval;
  const auto opos = with_order3.find("\"order\": 2");
  with_order3.replace(opos, 10, "\"order\": 3");
  const Scenario sc = parse_scenario(with_order3);
  REQUIRE(sc.roots.size() == 3);
  CHECK(sc.roots[1] == doctest::Approx(-1.5));
}

TEST_CASE("parse-serialize-parse round-trips identically") {
  const std::string once = serialize_scenario(parse_scenario(kMinimalScenario));
  const std::string twice = serialize_scenario(parse_scenario(once));
  CHECK(once == twice);
}

TEST_CASE("csv output carries the documented header and is deterministic") {
  Scenario sc = refgov::testing::corridor_scenario(2, PredictionMethod::vandermonde);
  sc.initial_state = RobotState::zero_motion(sc.waypoints.back(), 2);
  sc.initial_governor = sc.waypoints.back();
  const SimulationModel model(sc);
  const Trace trace = model.run();

  const std::string csv = trace_to_csv(trace);
  CHECK(csv.rfind("t,p0x,p0y,p1x,p1y,gx,gy,delta,ref_speed\n", 0) == 0);
  // Converged at the start: exactly one data row.
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 2);
  CHECK(trace_to_csv(trace) == csv);

  const std::string summary = trace_summary_json(trace);
  CHECK(summary.find("\"status\": \"converged\"") != std::string::npos);
  CHECK(summary.find("\"travel_time\": 0.0") != std::string::npos);
}

TEST_CASE("svg output is structurally sound") {
  const Scenario sc = refgov::testing::corridor_scenario(2, PredictionMethod::vandermonde);
  const SimulationModel model(sc);
  const Trace trace = model.run();
  SvgOptions options;
  options.snapshot_interval = 2.0;
  const std::string svg = trace_to_svg(model, trace, options);

  CHECK(svg.rfind("<?xml", 0) == 0);
  CHECK(svg.find("<svg xmlns=\"http://www.w3.org/2000/svg\"") != std::string::npos);
  size_t polylines = 0;
  for (size_t pos = svg.find("<polyline"); pos != std::string::npos; pos = svg.find("<polyline", pos + 1))
    ++polylines;
  CHECK(polylines == 3);  // reference path, robot, governor
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK(trace_to_svg(model, trace, options) == svg);
}

TEST_CASE("emit_outputs writes the requested artifacts and fails loudly otherwise") {
  const Scenario sc = refgov::testing::corridor_scenario(2, PredictionMethod::vandermonde);
  const SimulationModel model(sc);
  const Trace trace = model.run();
  const std::string dir = (std::filesystem::temp_directory_path() / "refgov_io_test").string();
  std::filesystem::remove_all(dir);
  const auto written = emit_outputs(model, trace, dir, "corridor", OutputFormats{true, true, true});
  REQUIRE(written.size() == 3);
  for (const std::string& path : written) CHECK(std::filesystem::file_size(path) > 0);

  // Determinism at the byte level across repeated emissions.
  const std::string before = slurp(written[0]);
  emit_outputs(model, trace, dir, "corridor", OutputFormats{true, true, true});
  CHECK(slurp(written[0]) == before);

  CHECK_THROWS(emit_outputs(model, trace, "/dev/null/nope", "x", OutputFormats{true, false, false}));
}
