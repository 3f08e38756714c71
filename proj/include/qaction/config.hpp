#pragma once

#include <map>
#include <optional>
#include <string>

#include "qaction/potential.hpp"
#include "qaction/quantize.hpp"

namespace qaction {

/// Flat dotted-key run configuration. Unknown keys are errors; every field
/// is validated before any computation starts.
struct RunConfig {
  std::string potential_spec;  // "builtin:<name>" or "expr:<source>"
  std::map<std::string, double> params;
  std::optional<int> l;
  double mass = 1.0;
  double hbar = 1.0;
  std::string engine = "riccati";  // riccati | tmatrix | both
  int n_min = 0;
  int n_max = 8;
  std::string format = "table";  // csv | json | table
  std::string out;               // empty = stdout
  double tol_j = 1e-10;
  double ode_tol = 1e-10;
  double tol_root = 1e-12;
  double decay_budget = 20.0;
  int layer_count = 0;
  int scan_points = 10000;
  double origin_epsilon = 1e-8;
  double e_min = NAN, e_max = NAN;  // scan grid
  int scan_count = 33;
  int wavefunction_samples = 8193;
};

RunConfig parse_config_text(const std::string& text);
RunConfig parse_config_file(const std::string& path);

Potential make_potential(const RunConfig& cfg);

/// Engine override: empty string keeps the config's engine.
QuantizeOptions make_quantize_options(const RunConfig& cfg,
                                      const std::string& engine_override = "");

/// Deterministic config echo for report metadata (sorted key=value lines).
std::vector<std::string> config_echo(const RunConfig& cfg);

}  // namespace qaction
