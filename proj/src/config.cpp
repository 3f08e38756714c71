#include "qaction/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "qaction/errors.hpp"

namespace qaction {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  std::size_t b = s.find_last_not_of(" \t\r");
  if (a == std::string::npos) return "";
  return s.substr(a, b - a + 1);
}

double to_real(const std::string& key, const std::string& val) {
  char* end = nullptr;
  double v = std::strtod(val.c_str(), &end);
  if (end == val.c_str() || *end != '\0')
    throw ConfigError("key '" + key + "': expected a real number, got '" +
                      val + "'");
  return v;
}

int to_int(const std::string& key, const std::string& val) {
  double v = to_real(key, val);
  if (v != std::floor(v))
    throw ConfigError("key '" + key + "': expected an integer, got '" + val +
                      "'");
  return static_cast<int>(v);
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string s = trim(line);
    if (s.empty() || s[0] == '#') continue;
    auto eq = s.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(line_no) +
                        ": expected key = value");
    std::string key = trim(s.substr(0, eq));
    std::string val = trim(s.substr(eq + 1));
    if (key.empty()) throw ConfigError("line " + std::to_string(line_no) +
                                       ": empty key");

    if (key == "potential") {
      cfg.potential_spec = val;
    } else if (key.rfind("params.", 0) == 0) {
      std::string name = key.substr(7);
      if (name.empty()) throw ConfigError("key 'params.': missing name");
      cfg.params[name] = to_real(key, val);
    } else if (key == "l") {
      int l = to_int(key, val);
      if (l < 0) throw ConfigError("key 'l': must be nonnegative");
      cfg.l = l;
    } else if (key == "mass") {
      cfg.mass = to_real(key, val);
      if (cfg.mass <= 0) throw ConfigError("key 'mass': must be positive");
    } else if (key == "hbar") {
      cfg.hbar = to_real(key, val);
      if (cfg.hbar <= 0) throw ConfigError("key 'hbar': must be positive");
    } else if (key == "engine") {
      if (val != "riccati" && val != "tmatrix" && val != "both")
        throw ConfigError("key 'engine': must be riccati, tmatrix, or both");
      cfg.engine = val;
    } else if (key == "n_min") {
      cfg.n_min = to_int(key, val);
    } else if (key == "n_max") {
      cfg.n_max = to_int(key, val);
    } else if (key == "format") {
      if (val != "csv" && val != "json" && val != "table")
        throw ConfigError("key 'format': must be csv, json, or table");
      cfg.format = val;
    } else if (key == "out") {
      cfg.out = val;
    } else if (key == "tol_j") {
      cfg.tol_j = to_real(key, val);
    } else if (key == "ode_tol") {
      cfg.ode_tol = to_real(key, val);
    } else if (key == "tol_root") {
      cfg.tol_root = to_real(key, val);
    } else if (key == "decay_budget") {
      cfg.decay_budget = to_real(key, val);
    } else if (key == "layer_count") {
      cfg.layer_count = to_int(key, val);
    } else if (key == "scan_points") {
      cfg.scan_points = to_int(key, val);
    } else if (key == "origin_epsilon") {
      cfg.origin_epsilon = to_real(key, val);
    } else if (key == "e_min") {
      cfg.e_min = to_real(key, val);
    } else if (key == "e_max") {
      cfg.e_max = to_real(key, val);
    } else if (key == "scan_count") {
      cfg.scan_count = to_int(key, val);
    } else if (key == "wavefunction_samples") {
      cfg.wavefunction_samples = to_int(key, val);
    } else {
      throw ConfigError("unknown key '" + key + "'");
    }
  }
  if (cfg.n_min < 0 || cfg.n_max < cfg.n_min)
    throw ConfigError("invalid n range [" + std::to_string(cfg.n_min) + ", " +
                      std::to_string(cfg.n_max) + "]");
  return cfg;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

Potential make_potential(const RunConfig& cfg) {
  const std::string& spec = cfg.potential_spec;
  if (spec.empty()) throw ConfigError("key 'potential' is required");
  if (spec.rfind("builtin:", 0) == 0)
    return builtin(spec.substr(8), cfg.params, cfg.l, cfg.mass, cfg.hbar);
  if (spec.rfind("expr:", 0) == 0)
    return from_expression(spec.substr(5), cfg.params, cfg.l, cfg.mass,
                           cfg.hbar);
  throw ConfigError("key 'potential': expected builtin:<name> or "
                    "expr:<source>");
}

QuantizeOptions make_quantize_options(const RunConfig& cfg,
                                      const std::string& engine_override) {
  QuantizeOptions opts;
  std::string engine = engine_override.empty() ? cfg.engine : engine_override;
  opts.engine = engine == "tmatrix" ? Engine::tmatrix : Engine::riccati;
  opts.tol_j = cfg.tol_j;
  opts.ode_tol = cfg.ode_tol;
  opts.layer_count = cfg.layer_count;
  opts.e_max = cfg.e_max;
  opts.wavefunction_samples = cfg.wavefunction_samples;
  opts.disc.decay_budget = cfg.decay_budget;
  opts.disc.scan_points = cfg.scan_points;
  opts.disc.tol_root = cfg.tol_root;
  opts.disc.origin_epsilon = cfg.origin_epsilon;
  return opts;
}

std::vector<std::string> config_echo(const RunConfig& cfg) {
  std::vector<std::string> lines;
  lines.push_back("potential=" + cfg.potential_spec);
  for (const auto& [k, v] : cfg.params)
    lines.push_back("params." + k + "=" + fmt17(v));
  if (cfg.l) lines.push_back("l=" + std::to_string(*cfg.l));
  lines.push_back("mass=" + fmt17(cfg.mass));
  lines.push_back("hbar=" + fmt17(cfg.hbar));
  lines.push_back("engine=" + cfg.engine);
  lines.push_back("n_min=" + std::to_string(cfg.n_min));
  lines.push_back("n_max=" + std::to_string(cfg.n_max));
  lines.push_back("tol_j=" + fmt17(cfg.tol_j));
  lines.push_back("decay_budget=" + fmt17(cfg.decay_budget));
  lines.push_back("origin_epsilon=" + fmt17(cfg.origin_epsilon));
  return lines;
}

}  // namespace qaction
