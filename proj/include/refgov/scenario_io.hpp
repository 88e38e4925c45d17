#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "refgov/simulator.hpp"

namespace refgov {

/// Raised on schema or physical violations; the message names the offending
/// field and the violated constraint.
class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parse a versioned JSON scenario document. A "root_interval" [a, b] with
/// order n expands to n uniformly spaced roots. Defaults: governor gain 4,
/// path gain 1, integrator tolerances 1e-3/1e-6, horizon 120 s.
Scenario parse_scenario(const std::string& text);

/// Canonical JSON form; parse(serialize(parse(text))) round-trips.
std::string serialize_scenario(const Scenario& scenario);

std::vector<double> expand_root_interval(double lo, double hi, int order);

struct OutputFormats {
  bool csv = true;
  bool json = true;
  bool svg = true;
};

struct SvgOptions {
  /// Draw prediction-set snapshots every `snapshot_interval` seconds of
  /// simulated time (0 disables them).
  double snapshot_interval = 0.0;
};

std::string trace_to_csv(const Trace& trace);
std::string trace_summary_json(const Trace& trace);
std::string trace_to_svg(const SimulationModel& model, const Trace& trace, const SvgOptions& options = {});

/// Write the selected artifacts as <out_dir>/<stem>.csv|.summary.json|.svg.
/// Returns the written paths. Throws on unwritable destinations.
std::vector<std::string> emit_outputs(const SimulationModel& model, const Trace& trace,
                                      const std::string& out_dir, const std::string& stem,
                                      const OutputFormats& formats, const SvgOptions& svg_options = {});

}  // namespace refgov
