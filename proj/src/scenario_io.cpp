#include "refgov/scenario_io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace refgov {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& field, const std::string& what) {
  throw ScenarioError("scenario field \"" + field + "\": " + what);
}

const json& require(const json& j, const std::string& scope, const char* key) {
  if (!j.is_object()) fail(scope, "expected an object");
  const auto it = j.find(key);
  if (it == j.end()) fail(scope.empty() ? key : scope + "." + key, "missing");
  return *it;
}

double as_number(const json& j, const std::string& field) {
  if (!j.is_number()) fail(field, "expected a number");
  return j.get<double>();
}

int as_int(const json& j, const std::string& field) {
  if (!j.is_number_integer()) fail(field, "expected an integer");
  return j.get<int>();
}

Vec2 as_vec2(const json& j, const std::string& field) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    fail(field, "expected [x, y]");
  return Vec2(j[0].get<double>(), j[1].get<double>());
}

ConvexRegion parse_region(const json& j, const std::string& field) {
  const json& type_j = require(j, field, "type");
  if (!type_j.is_string()) fail(field + ".type", "expected a string");
  const std::string type = type_j.get<std::string>();
  try {
    if (type == "disk") {
      return make_disk_region(as_vec2(require(j, field, "center"), field + ".center"),
                              as_number(require(j, field, "radius"), field + ".radius"));
    }
    if (type == "polygon") {
      const json& verts = require(j, field, "vertices");
      if (!verts.is_array()) fail(field + ".vertices", "expected an array of points");
      std::vector<Vec2> points;
      for (size_t i = 0; i < verts.size(); ++i)
        points.push_back(as_vec2(verts[i], field + ".vertices[" + std::to_string(i) + "]"));
      return make_polygon_region(std::move(points));
    }
  } catch (const std::invalid_argument& e) {
    fail(field, e.what());
  }
  fail(field + ".type", "expected \"disk\" or \"polygon\"");
}

json region_to_json(const ConvexRegion& region) {
  json j;
  if (const auto* d = std::get_if<DiskRegion>(&region)) {
    j["type"] = "disk";
    j["center"] = {d->center.x(), d->center.y()};
    j["radius"] = d->radius;
  } else {
    j["type"] = "polygon";
    json verts = json::array();
    for (const Vec2& v : std::get<PolygonRegion>(region).vertices) verts.push_back({v.x(), v.y()});
    j["vertices"] = std::move(verts);
  }
  return j;
}

std::string format_double(double v, const char* fmt) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), fmt, v);
  return buf;
}

}  // namespace

std::vector<double> expand_root_interval(double lo, double hi, int order) {
  if (!(lo <= hi) || hi >= 0.0) throw ScenarioError("scenario field \"control.root_interval\": expected [lo, hi] with lo <= hi < 0");
  if (order < 1 || order > 8) throw ScenarioError("scenario field \"control.order\": expected 1..8");
  std::vector<double> roots;
  if (order == 1) {
    roots.push_back(hi);
  } else {
    for (int i = 0; i < order; ++i) roots.push_back(lo + (hi - lo) * i / (order - 1));
  }
  return roots;
}

Scenario parse_scenario(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ScenarioError(std::string("invalid JSON: ") + e.what());
  }

  const int version = as_int(require(doc, "", "version"), "version");
  if (version != 1) fail("version", "unsupported version (expected 1)");

  Scenario sc;
  if (doc.contains("name")) {
    if (!doc["name"].is_string()) fail("name", "expected a string");
    sc.name = doc["name"].get<std::string>();
  }

  const json& env = require(doc, "", "environment");
  sc.environment.workspace = parse_region(require(env, "environment", "workspace"), "environment.workspace");
  if (env.contains("obstacles")) {
    if (!env["obstacles"].is_array()) fail("environment.obstacles", "expected an array");
    for (size_t i = 0; i < env["obstacles"].size(); ++i)
      sc.environment.obstacles.push_back(
          parse_region(env["obstacles"][i], "environment.obstacles[" + std::to_string(i) + "]"));
  }
  sc.environment.robot_radius = as_number(require(env, "environment", "robot_radius"), "environment.robot_radius");
  if (sc.environment.robot_radius < 0.0) fail("environment.robot_radius", "must be >= 0");

  const json& path = require(doc, "", "path");
  if (!path.is_array() || path.size() < 2) fail("path", "expected at least 2 waypoints");
  for (size_t i = 0; i < path.size(); ++i)
    sc.waypoints.push_back(as_vec2(path[i], "path[" + std::to_string(i) + "]"));

  const json& control = require(doc, "", "control");
  const int order = as_int(require(control, "control", "order"), "control.order");
  if (order < 1 || order > 8) fail("control.order", "expected 1..8");
  if (control.contains("roots")) {
    const json& roots = control["roots"];
    if (!roots.is_array()) fail("control.roots", "expected an array of numbers");
    if (static_cast<int>(roots.size()) != order) fail("control.roots", "count must equal control.order");
    for (size_t i = 0; i < roots.size(); ++i)
      sc.roots.push_back(as_number(roots[i], "control.roots[" + std::to_string(i) + "]"));
  } else if (control.contains("root_interval")) {
    const Vec2 iv = as_vec2(control["root_interval"], "control.root_interval");
    sc.roots = expand_root_interval(iv.x(), iv.y(), order);
  } else {
    fail("control.roots", "missing (provide \"roots\" or \"root_interval\")");
  }
  for (double r : sc.roots)
    if (r >= 0.0) fail("control.roots", "roots must be negative");

  const json& pred = require(doc, "", "prediction");
  if (!pred.is_string()) fail("prediction", "expected \"lyapunov\" or \"vandermonde\"");
  const std::string method = pred.get<std::string>();
  if (method == "lyapunov") sc.method = PredictionMethod::lyapunov;
  else if (method == "vandermonde") sc.method = PredictionMethod::vandermonde;
  else fail("prediction", "expected \"lyapunov\" or \"vandermonde\"");

  if (doc.contains("gains")) {
    const json& gains = doc["gains"];
    if (gains.contains("governor")) sc.governor_gain = as_number(gains["governor"], "gains.governor");
    if (gains.contains("path")) sc.path_gain = as_number(gains["path"], "gains.path");
  }
  if (sc.governor_gain < 0.0) fail("gains.governor", "must be >= 0");
  if (sc.path_gain <= 0.0) fail("gains.path", "must be positive");

  if (doc.contains("initial")) {
    const json& initial = doc["initial"];
    if (initial.contains("robot")) {
      const json& robot = initial["robot"];
      if (robot.is_array() && robot.size() == 2 && robot[0].is_number()) {
        sc.initial_state = RobotState::zero_motion(as_vec2(robot, "initial.robot"), order);
      } else if (robot.is_array()) {
        if (static_cast<int>(robot.size()) != order)
          fail("initial.robot", "expected [x, y] or one [x, y] row per derivative (control.order rows)");
        sc.initial_state.derivatives.clear();
        for (size_t i = 0; i < robot.size(); ++i)
          sc.initial_state.derivatives.push_back(as_vec2(robot[i], "initial.robot[" + std::to_string(i) + "]"));
      } else {
        fail("initial.robot", "expected [x, y] or an array of rows");
      }
    } else {
      sc.initial_state = RobotState::zero_motion(sc.waypoints.front(), order);
    }
    sc.initial_governor = initial.contains("governor")
                              ? as_vec2(initial["governor"], "initial.governor")
                              : sc.initial_state.position();
  } else {
    sc.initial_state = RobotState::zero_motion(sc.waypoints.front(), order);
    sc.initial_governor = sc.waypoints.front();
  }

  if (doc.contains("integrator")) {
    const json& integ = doc["integrator"];
    if (integ.contains("rel_tol")) sc.integrator.rel_tol = as_number(integ["rel_tol"], "integrator.rel_tol");
    if (integ.contains("abs_tol")) sc.integrator.abs_tol = as_number(integ["abs_tol"], "integrator.abs_tol");
    if (integ.contains("max_step")) sc.integrator.max_step = as_number(integ["max_step"], "integrator.max_step");
    if (sc.integrator.rel_tol <= 0.0) fail("integrator.rel_tol", "must be positive");
    if (sc.integrator.abs_tol <= 0.0) fail("integrator.abs_tol", "must be positive");
    if (sc.integrator.max_step <= 0.0) fail("integrator.max_step", "must be positive");
  }
  if (doc.contains("horizon")) sc.horizon = as_number(doc["horizon"], "horizon");
  if (sc.horizon <= 0.0) fail("horizon", "must be positive");
  if (doc.contains("arc_tolerance")) sc.arc_tolerance = as_number(doc["arc_tolerance"], "arc_tolerance");
  if (sc.arc_tolerance <= 0.0) fail("arc_tolerance", "must be positive");

  // Physical validation: a scenario that cannot start is a parse-time error.
  std::vector<std::string> problems;
  try {
    problems = validate_scenario(sc);
  } catch (const std::exception& e) {
    throw ScenarioError(std::string("scenario invalid: ") + e.what());
  }
  if (!problems.empty()) {
    std::string msg = "scenario invalid:";
    for (const auto& p : problems) msg += " " + p + ";";
    throw ScenarioError(msg);
  }
  return sc;
}

std::string serialize_scenario(const Scenario& sc) {
  json doc;
  doc["version"] = 1;
  doc["name"] = sc.name;
  doc["environment"]["workspace"] = region_to_json(sc.environment.workspace);
  json obstacles = json::array();
  for (const ConvexRegion& ob : sc.environment.obstacles) obstacles.push_back(region_to_json(ob));
  doc["environment"]["obstacles"] = std::move(obstacles);
  doc["environment"]["robot_radius"] = sc.environment.robot_radius;
  json path = json::array();
  for (const Vec2& w : sc.waypoints) path.push_back({w.x(), w.y()});
  doc["path"] = std::move(path);
  doc["control"]["order"] = sc.order();
  doc["control"]["roots"] = sc.roots;
  doc["prediction"] = to_string(sc.method);
  doc["gains"]["governor"] = sc.governor_gain;
  doc["gains"]["path"] = sc.path_gain;
  json robot = json::array();
  for (const Vec2& d : sc.initial_state.derivatives) robot.push_back({d.x(), d.y()});
  doc["initial"]["robot"] = std::move(robot);
  doc["initial"]["governor"] = {sc.initial_governor.x(), sc.initial_governor.y()};
  doc["integrator"]["rel_tol"] = sc.integrator.rel_tol;
  doc["integrator"]["abs_tol"] = sc.integrator.abs_tol;
  doc["integrator"]["max_step"] = sc.integrator.max_step;
  doc["horizon"] = sc.horizon;
  doc["arc_tolerance"] = sc.arc_tolerance;
  return doc.dump(2) + "\n";
}

std::string trace_to_csv(const Trace& trace) {
  std::ostringstream out;
  const int n = trace.samples.front().state.order();
  out << "t";
  for (int i = 0; i < n; ++i) out << ",p" << i << "x,p" << i << "y";
  out << ",gx,gy,delta,ref_speed\n";
  for (const TraceSample& s : trace.samples) {
    out << format_double(s.t, "%.12g");
    for (int i = 0; i < n; ++i)
      out << "," << format_double(s.state.derivatives[i].x(), "%.12g") << ","
          << format_double(s.state.derivatives[i].y(), "%.12g");
    out << "," << format_double(s.governor.x(), "%.12g") << "," << format_double(s.governor.y(), "%.12g") << ","
        << format_double(s.safety, "%.12g") << "," << format_double(s.ref_speed, "%.12g") << "\n";
  }
  return out.str();
}

std::string trace_summary_json(const Trace& trace) {
  json j;
  j["travel_time"] = trace.travel_time;
  j["min_clearance"] = trace.min_clearance;
  j["path_length"] = trace.path_length;
  j["status"] = to_string(trace.status);
  return j.dump(2) + "\n";
}

namespace {

std::string svg_num(double v) { return format_double(v, "%.6g"); }

void svg_region(std::ostringstream& out, const ConvexRegion& region, const std::string& style) {
  if (const auto* d = std::get_if<DiskRegion>(&region)) {
    out << "<circle cx=\"" << svg_num(d->center.x()) << "\" cy=\"" << svg_num(d->center.y()) << "\" r=\""
        << svg_num(d->radius) << "\" " << style << "/>\n";
  } else {
    out << "<polygon points=\"";
    for (const Vec2& v : std::get<PolygonRegion>(region).vertices)
      out << svg_num(v.x()) << "," << svg_num(v.y()) << " ";
    out << "\" " << style << "/>\n";
  }
}

// Dilated region outline: offset edges joined by corner arcs.
void svg_inflated_region(std::ostringstream& out, const ConvexRegion& region, double rho, const std::string& style) {
  if (rho <= 0.0) {
    svg_region(out, region, style);
    return;
  }
  if (const auto* d = std::get_if<DiskRegion>(&region)) {
    out << "<circle cx=\"" << svg_num(d->center.x()) << "\" cy=\"" << svg_num(d->center.y()) << "\" r=\""
        << svg_num(d->radius + rho) << "\" " << style << "/>\n";
    return;
  }
  const auto& poly = std::get<PolygonRegion>(region).vertices;
  const size_t m = poly.size();
  std::ostringstream d;
  for (size_t i = 0; i < m; ++i) {
    const Vec2& a = poly[i];
    const Vec2& b = poly[(i + 1) % m];
    const Vec2 outward = Vec2((b - a).y(), -(b - a).x()).normalized();
    const Vec2 p0 = a + rho * outward;
    const Vec2 p1 = b + rho * outward;
    d << (i == 0 ? "M " : "L ") << svg_num(p0.x()) << " " << svg_num(p0.y()) << " ";
    d << "L " << svg_num(p1.x()) << " " << svg_num(p1.y()) << " ";
    const Vec2& c = poly[(i + 2) % m];
    const Vec2 outward_next = Vec2((c - b).y(), -(c - b).x()).normalized();
    const Vec2 p2 = b + rho * outward_next;
    d << "A " << svg_num(rho) << " " << svg_num(rho) << " 0 0 1 " << svg_num(p2.x()) << " " << svg_num(p2.y())
      << " ";
  }
  d << "Z";
  out << "<path d=\"" << d.str() << "\" " << style << "/>\n";
}

void svg_polyline(std::ostringstream& out, const std::vector<Vec2>& points, const std::string& stroke,
                  double width) {
  out << "<polyline fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\"" << svg_num(width) << "\" points=\"";
  for (const Vec2& p : points) out << svg_num(p.x()) << "," << svg_num(p.y()) << " ";
  out << "\"/>\n";
}

}  // namespace

std::string trace_to_svg(const SimulationModel& model, const Trace& trace, const SvgOptions& options) {
  const Scenario& sc = model.scenario();
  Vec2 lo, hi;
  if (const auto* d = std::get_if<DiskRegion>(&sc.environment.workspace)) {
    lo = d->center - Vec2(d->radius, d->radius);
    hi = d->center + Vec2(d->radius, d->radius);
  } else {
    const auto& poly = std::get<PolygonRegion>(sc.environment.workspace).vertices;
    lo = hi = poly[0];
    for (const Vec2& v : poly) {
      lo = lo.cwiseMin(v);
      hi = hi.cwiseMax(v);
    }
  }
  const double margin = 0.05 * (hi - lo).maxCoeff() + 0.1;
  lo -= Vec2(margin, margin);
  hi += Vec2(margin, margin);
  const double stroke = 0.004 * (hi - lo).maxCoeff();

  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << svg_num(lo.x()) << " " << svg_num(-hi.y()) << " "
      << svg_num(hi.x() - lo.x()) << " " << svg_num(hi.y() - lo.y()) << "\">\n";
  out << "<g transform=\"matrix(1 0 0 -1 0 0)\">\n";

  // Workspace: gray body with the eroded interior painted back white, so the
  // configuration-space wall inflation shows as a gray band.
  svg_region(out, sc.environment.workspace, "fill=\"#b0b0b0\" stroke=\"black\" stroke-width=\"" +
                                                svg_num(2.0 * stroke) + "\"");
  svg_region(out, model.free_space().eroded_workspace(), "fill=\"white\" stroke=\"none\"");
  for (const InflatedObstacle& ob : model.free_space().inflated_obstacles()) {
    svg_inflated_region(out, ob.base, ob.inflation, "fill=\"#b0b0b0\" stroke=\"none\"");
    svg_region(out, ob.base, "fill=\"black\" stroke=\"none\"");
  }

  // Prediction-set snapshots, drawn under the trajectories.
  if (options.snapshot_interval > 0.0) {
    double next = 0.0;
    for (const TraceSample& s : trace.samples) {
      if (s.t + 1e-12 < next) continue;
      next = s.t + options.snapshot_interval;
      const MotionRange range = model.predict(s.state, s.governor);
      const std::string style = sc.method == PredictionMethod::lyapunov
                                    ? "fill=\"none\" stroke=\"#e0c020\" stroke-width=\"" + svg_num(stroke) + "\""
                                    : "fill=\"none\" stroke=\"#ff8c00\" stroke-width=\"" + svg_num(stroke) + "\"";
      if (const auto* e = std::get_if<ProjectedEllipsoid>(&range.region)) {
        const Mat2& q = e->shape;
        if (std::abs(q(0, 1)) < 1e-12 && std::abs(q(0, 0) - q(1, 1)) < 1e-12) {
          out << "<circle cx=\"" << svg_num(e->center.x()) << "\" cy=\"" << svg_num(e->center.y()) << "\" r=\""
              << svg_num(e->scale * std::sqrt(std::max(q(0, 0), 0.0))) << "\" " << style << "/>\n";
        } else {
          out << "<polygon points=\"";
          for (const Vec2& p : boundary_samples(range.as_convex_set(), 64))
            out << svg_num(p.x()) << "," << svg_num(p.y()) << " ";
          out << "\" " << style << "/>\n";
        }
      } else {
        out << "<polygon points=\"";
        for (const Vec2& p : convex_hull(std::get<SimplexRange>(range.region).vertices))
          out << svg_num(p.x()) << "," << svg_num(p.y()) << " ";
        out << "\" " << style << "/>\n";
      }
    }
  }

  // Reference path (red), robot (blue), governor (green).
  svg_polyline(out, model.path().waypoints(), "red", stroke);
  std::vector<Vec2> robot_pts, governor_pts;
  robot_pts.reserve(trace.samples.size());
  governor_pts.reserve(trace.samples.size());
  for (const TraceSample& s : trace.samples) {
    robot_pts.push_back(s.state.position());
    governor_pts.push_back(s.governor);
  }
  svg_polyline(out, robot_pts, "blue", stroke);
  svg_polyline(out, governor_pts, "green", stroke);

  // Start and goal markers.
  out << "<circle cx=\"" << svg_num(model.path().waypoints().front().x()) << "\" cy=\""
      << svg_num(model.path().waypoints().front().y()) << "\" r=\"" << svg_num(3.0 * stroke)
      << "\" fill=\"blue\"/>\n";
  out << "<circle cx=\"" << svg_num(model.path().goal().x()) << "\" cy=\"" << svg_num(model.path().goal().y())
      << "\" r=\"" << svg_num(3.0 * stroke) << "\" fill=\"red\"/>\n";

  out << "</g>\n</svg>\n";
  return out.str();
}

std::vector<std::string> emit_outputs(const SimulationModel& model, const Trace& trace, const std::string& out_dir,
                                      const std::string& stem, const OutputFormats& formats,
                                      const SvgOptions& svg_options) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw std::runtime_error("emit_outputs: cannot create directory " + out_dir + ": " + ec.message());

  std::vector<std::string> written;
  const auto write_file = [&](const std::string& name, const std::string& content) {
    const std::string full = (fs::path(out_dir) / name).string();
    std::ofstream f(full, std::ios::binary);
    if (!f) throw std::runtime_error("emit_outputs: cannot open " + full + " for writing");
    f << content;
    if (!f) throw std::runtime_error("emit_outputs: write failed for " + full);
    written.push_back(full);
  };

  if (formats.csv) write_file(stem + ".csv", trace_to_csv(trace));
  if (formats.json) write_file(stem + ".summary.json", trace_summary_json(trace));
  if (formats.svg) write_file(stem + ".svg", trace_to_svg(model, trace, svg_options));
  return written;
}

}  // namespace refgov
