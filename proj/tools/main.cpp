#include <algorithm>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "refgov/scenario_io.hpp"

namespace {

using namespace refgov;

struct CommonOptions {
  std::string out_dir = "out";
  std::string formats = "csv,json,svg";
  double tol_rel = 0.0;   // 0 = keep scenario value
  double tol_abs = 0.0;
  double horizon = 0.0;
  double snapshots = 0.0;
  unsigned seed = 0;
};

void add_common(CLI::App* cmd, CommonOptions& opt) {
  cmd->add_option("--out", opt.out_dir, "Output directory");
  cmd->add_option("--format", opt.formats, "Comma-separated outputs: csv,json,svg");
  cmd->add_option("--tol-rel", opt.tol_rel, "Override integrator relative tolerance");
  cmd->add_option("--tol-abs", opt.tol_abs, "Override integrator absolute tolerance");
  cmd->add_option("--horizon", opt.horizon, "Override simulation horizon [s]");
  cmd->add_option("--snapshots", opt.snapshots, "Prediction-set snapshot interval in the SVG [s], 0 = off");
  cmd->add_option("--seed", opt.seed, "Seed for randomized starts (sweep --random-starts)");
}

OutputFormats parse_formats(const std::string& list) {
  OutputFormats f{false, false, false};
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item == "csv") f.csv = true;
    else if (item == "json") f.json = true;
    else if (item == "svg") f.svg = true;
    else throw CLI::ValidationError("--format", "unknown format \"" + item + "\"");
  }
  return f;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Scenario load_scenario(const std::string& path, const CommonOptions& opt) {
  Scenario sc = parse_scenario(read_file(path));
  if (opt.tol_rel > 0.0) sc.integrator.rel_tol = opt.tol_rel;
  if (opt.tol_abs > 0.0) sc.integrator.abs_tol = opt.tol_abs;
  if (opt.horizon > 0.0) sc.horizon = opt.horizon;
  if (sc.name == "scenario") sc.name = std::filesystem::path(path).stem().string();
  return sc;
}

int status_code(RunStatus status) {
  switch (status) {
    case RunStatus::converged: return 0;
    case RunStatus::horizon: return 2;
    default: return 1;
  }
}

struct RunOutcome {
  std::string name;
  RunStatus status;
  double travel_time = 0.0;
  double min_clearance = 0.0;
  std::string error;
};

RunOutcome run_one(const std::string& path, const CommonOptions& opt, bool write) {
  RunOutcome outcome;
  outcome.name = std::filesystem::path(path).stem().string();
  try {
    const Scenario sc = load_scenario(path, opt);
    SimulationModel model(sc);
    const Trace trace = model.run();
    outcome.status = trace.status;
    outcome.travel_time = trace.travel_time;
    outcome.min_clearance = trace.min_clearance;
    if (write) emit_outputs(model, trace, opt.out_dir, sc.name, parse_formats(opt.formats), {opt.snapshots});
  } catch (const std::exception& e) {
    outcome.status = RunStatus::error;
    outcome.error = e.what();
  }
  return outcome;
}

void print_outcome(const RunOutcome& o) {
  if (!o.error.empty()) {
    std::cout << o.name << ": error: " << o.error << "\n";
    return;
  }
  std::cout << o.name << ": " << to_string(o.status) << "  travel_time=" << o.travel_time
            << " s  min_clearance=" << o.min_clearance << " m\n";
}

int cmd_run(const std::string& path, const CommonOptions& opt) {
  const RunOutcome outcome = run_one(path, opt, true);
  print_outcome(outcome);
  return status_code(outcome.status);
}

int cmd_batch(const std::string& dir, const CommonOptions& opt, bool parallel) {
  std::vector<std::string> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir))
    if (entry.path().extension() == ".json") files.push_back(entry.path().string());
  std::sort(files.begin(), files.end());
  if (files.empty()) {
    std::cerr << "batch: no .json scenarios in " << dir << "\n";
    return 1;
  }
  std::vector<RunOutcome> outcomes(files.size());
  if (parallel) {
    std::vector<std::future<RunOutcome>> futures;
    futures.reserve(files.size());
    for (const auto& f : files)
      futures.push_back(std::async(std::launch::async, [&, f] { return run_one(f, opt, true); }));
    for (size_t i = 0; i < futures.size(); ++i) outcomes[i] = futures[i].get();
  } else {
    for (size_t i = 0; i < files.size(); ++i) outcomes[i] = run_one(files[i], opt, true);
  }
  int worst = 0;
  for (const RunOutcome& o : outcomes) {
    print_outcome(o);
    const int code = status_code(o.status);
    if (code == 1 || (code == 2 && worst == 0)) worst = code;
  }
  return worst;
}

int cmd_validate(const std::string& path) {
  try {
    const Scenario sc = parse_scenario(read_file(path));
    const FreeSpace fs = build_free_space(sc.environment, sc.arc_tolerance);
    for (const std::string& w : fs.warnings()) std::cout << "warning: " << w << "\n";
    std::cout << path << ": valid\n";
    return 0;
  } catch (const std::exception& e) {
    std::cout << path << ": invalid: " << e.what() << "\n";
    return 1;
  }
}

int cmd_sweep(const std::string& path, const CommonOptions& opt, const std::string& orders_spec,
              const std::string& methods_spec, int random_starts) {
  std::vector<int> orders;
  {
    std::stringstream ss(orders_spec);
    std::string item;
    while (std::getline(ss, item, ',')) orders.push_back(std::stoi(item));
  }
  std::vector<PredictionMethod> methods;
  {
    std::stringstream ss(methods_spec);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (item == "lyapunov") methods.push_back(PredictionMethod::lyapunov);
      else if (item == "vandermonde") methods.push_back(PredictionMethod::vandermonde);
      else throw CLI::ValidationError("--methods", "unknown method \"" + item + "\"");
    }
  }

  const Scenario base = load_scenario(path, opt);
  if (base.roots.empty()) return 1;
  const double root_lo = *std::min_element(base.roots.begin(), base.roots.end());
  const double root_hi = *std::max_element(base.roots.begin(), base.roots.end());

  std::mt19937 rng(opt.seed);
  std::ostringstream csv;
  csv << "order,method,start,status,travel_time,min_clearance\n";
  printf("%-6s %-12s %-6s %-10s %12s %14s\n", "order", "method", "start", "status", "travel_time",
         "min_clearance");
  int exit_code = 0;
  for (int order : orders) {
    for (PredictionMethod method : methods) {
      Scenario sc = base;
      sc.roots = expand_root_interval(root_lo, root_hi, order);
      sc.method = method;
      sc.initial_state = RobotState::zero_motion(base.initial_state.position(), order);
      sc.initial_governor = base.initial_governor;
      const SimulationModel probe(sc);
      const int starts = std::max(1, random_starts);
      for (int s = 0; s < starts; ++s) {
        if (random_starts > 0) {
          // Random zero-motion start inside the planner domain.
          std::uniform_real_distribution<double> ux(0.0, 1.0);
          bool placed = false;
          for (int tries = 0; tries < 1000 && !placed; ++tries) {
            const double alpha = ux(rng);
            const Vec2 on_path = probe.path().point_at(alpha);
            const double clearance = probe.free_space().point_boundary_distance(on_path);
            const double angle = 2.0 * M_PI * ux(rng);
            const double rad = 0.5 * clearance * ux(rng);
            const Vec2 p = on_path + rad * Vec2(std::cos(angle), std::sin(angle));
            sc.initial_state = RobotState::zero_motion(p, order);
            sc.initial_governor = p;
            placed = probe.free_space().contains(p) && in_planner_domain(probe.path(), p, probe.free_space()) &&
                     probe.safety(sc.initial_state, p) > 0.0;
          }
          if (!placed) continue;
        }
        RunOutcome outcome;
        outcome.name = sc.name;
        try {
          SimulationModel model(sc);
          const Trace trace = model.run();
          outcome.status = trace.status;
          outcome.travel_time = trace.travel_time;
          outcome.min_clearance = trace.min_clearance;
        } catch (const std::exception& e) {
          outcome.status = RunStatus::error;
          outcome.error = e.what();
        }
        printf("%-6d %-12s %-6d %-10s %12.4f %14.6f\n", order, to_string(method), s, to_string(outcome.status),
               outcome.travel_time, outcome.min_clearance);
        csv << order << "," << to_string(method) << "," << s << "," << to_string(outcome.status) << ","
            << outcome.travel_time << "," << outcome.min_clearance << "\n";
        const int code = status_code(outcome.status);
        if (code == 1 || (code == 2 && exit_code == 0)) exit_code = code;
      }
    }
  }
  std::error_code ec;
  std::filesystem::create_directories(opt.out_dir, ec);
  if (!ec) {
    std::ofstream f(std::filesystem::path(opt.out_dir) / (base.name + ".sweep.csv"));
    f << csv.str();
  }
  return exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reference-governor feedback motion planning simulator"};
  app.require_subcommand(1);

  CommonOptions opt;
  std::string scenario_path, batch_dir;
  bool parallel = false;
  std::string orders_spec = "2,3,4";
  std::string methods_spec = "lyapunov,vandermonde";
  int random_starts = 0;

  CLI::App* run_cmd = app.add_subcommand("run", "Simulate one scenario and write its artifacts");
  run_cmd->add_option("scenario", scenario_path, "Scenario JSON file")->required();
  add_common(run_cmd, opt);

  CLI::App* batch_cmd = app.add_subcommand("batch", "Run every scenario in a directory");
  batch_cmd->add_option("dir", batch_dir, "Directory with scenario JSON files")->required();
  batch_cmd->add_flag("--parallel", parallel, "Run scenarios concurrently");
  add_common(batch_cmd, opt);

  CLI::App* validate_cmd = app.add_subcommand("validate", "Check a scenario without simulating");
  validate_cmd->add_option("scenario", scenario_path, "Scenario JSON file")->required();

  CLI::App* sweep_cmd = app.add_subcommand("sweep", "Vary order and prediction method over a base scenario");
  sweep_cmd->add_option("scenario", scenario_path, "Base scenario JSON file")->required();
  sweep_cmd->add_option("--orders", orders_spec, "Comma-separated controller orders");
  sweep_cmd->add_option("--methods", methods_spec, "Comma-separated prediction methods");
  sweep_cmd->add_option("--random-starts", random_starts, "Random zero-motion starts per configuration");
  add_common(sweep_cmd, opt);

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) return cmd_run(scenario_path, opt);
    if (batch_cmd->parsed()) return cmd_batch(batch_dir, opt, parallel);
    if (validate_cmd->parsed()) return cmd_validate(scenario_path);
    if (sweep_cmd->parsed()) return cmd_sweep(scenario_path, opt, orders_spec, methods_spec, random_starts);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
