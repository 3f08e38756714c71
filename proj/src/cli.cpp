#include "qaction/cli.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "qaction/config.hpp"
#include "qaction/errors.hpp"
#include "qaction/oracles.hpp"
#include "qaction/report.hpp"

namespace qaction {

namespace {

constexpr const char* kVersion = "qaction 1.0.0";

struct CommonFlags {
  std::string config_path;
  std::string engine;   // override
  std::string out;      // override
  std::string format;   // override
  double tol_j = NAN;
  int layers = -1;
};

void add_common(CLI::App* cmd, CommonFlags* flags, bool config_required) {
  auto* opt = cmd->add_option("--config", flags->config_path,
                              "run configuration file");
  if (config_required) opt->required();
  cmd->add_option("--engine", flags->engine, "riccati | tmatrix | both");
  cmd->add_option("--out", flags->out, "output path (default stdout)");
  cmd->add_option("--format", flags->format, "csv | json | table");
  cmd->add_option("--tol-j", flags->tol_j, "quantization residual tolerance");
  cmd->add_option("--layers", flags->layers, "transfer-matrix base layers");
}

RunConfig load_config(const CommonFlags& flags) {
  RunConfig cfg = flags.config_path.empty()
                      ? RunConfig{}
                      : parse_config_file(flags.config_path);
  if (!flags.engine.empty()) {
    if (flags.engine != "riccati" && flags.engine != "tmatrix" &&
        flags.engine != "both")
      throw ConfigError("--engine: must be riccati, tmatrix, or both");
    cfg.engine = flags.engine;
  }
  if (!flags.format.empty()) {
    if (flags.format != "csv" && flags.format != "json" &&
        flags.format != "table")
      throw ConfigError("--format: must be csv, json, or table");
    cfg.format = flags.format;
  }
  if (!flags.out.empty()) cfg.out = flags.out;
  if (!std::isnan(flags.tol_j)) cfg.tol_j = flags.tol_j;
  if (flags.layers >= 0) cfg.layer_count = flags.layers;
  return cfg;
}

void emit(const Report& report, const RunConfig& cfg, std::ostream& out) {
  std::string text = render(report, cfg.format);
  if (cfg.out.empty()) {
    out << text;
    return;
  }
  std::ofstream f(cfg.out, std::ios::binary);
  if (!f) throw ConfigError("cannot open output file: " + cfg.out);
  f << text;
}

std::string oracle_value(const Potential& p, int n, double* value) {
  try {
    if (has_analytic_spectrum(p)) {
      *value = analytic_eigenvalue(p, n);
      return "analytic";
    }
    *value = numerov_eigenvalue(p, n);
    return "numerov";
  } catch (const Error&) {
    *value = NAN;
    return "none";
  }
}

// ---------------------------------------------------------------------------

int cmd_solve(const RunConfig& cfg, std::ostream& out) {
  Potential p = make_potential(cfg);
  const bool both = cfg.engine == "both";

  Report report;
  report.command = "solve";
  report.meta = config_echo(cfg);
  report.meta.push_back(std::string("tool=") + kVersion);
  report.columns = {"n",     "e_present", "e_oracle",  "abs_diff",
                    "delta", "node_count", "engine",    "j_residual",
                    "converged"};
  if (both) {
    report.columns.push_back("e_tmatrix");
    report.columns.push_back("engine_diff");
  }

  auto t0 = std::chrono::steady_clock::now();
  int failures = 0;
  for (int n = cfg.n_min; n <= cfg.n_max; ++n) {
    std::vector<std::string> row;
    try {
      QuantizeOptions opts = make_quantize_options(cfg, both ? "riccati" : "");
      Eigensolution sol = solve_eigenvalue(p, n, opts);
      double oracle = NAN;
      std::string oracle_kind = oracle_value(p, n, &oracle);
      double diff = std::isnan(oracle) ? NAN : std::fabs(sol.e - oracle);
      row = {std::to_string(sol.n_paper), fmt17(sol.e),  fmt17(oracle),
             fmt17(diff),                 fmt17(sol.delta),
             std::to_string(sol.node_count), sol.engine,
             fmt17(sol.j_residual),       sol.converged ? "true" : "false"};
      if (both) {
        QuantizeOptions tm = make_quantize_options(cfg, "tmatrix");
        Eigensolution sol_tm = solve_eigenvalue(p, n, tm);
        row.push_back(fmt17(sol_tm.e));
        row.push_back(fmt17(std::fabs(sol_tm.e - sol.e)));
      }
      if (!sol.converged) ++failures;
    } catch (const Error& e) {
      ++failures;
      row = {std::to_string(n + p.paper_n_offset), "nan", "nan", "nan",
             "nan", "-1", cfg.engine, "nan", std::string("error: ") + e.what()};
      if (both) {
        row.push_back("nan");
        row.push_back("nan");
      }
    }
    report.rows.push_back(std::move(row));
  }
  report.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  emit(report, cfg, out);
  return failures == 0 ? 0 : 2;
}

int cmd_scan(const RunConfig& cfg, std::ostream& out) {
  if (std::isnan(cfg.e_min) || std::isnan(cfg.e_max))
    throw ConfigError("scan requires e_min and e_max");
  if (cfg.scan_count < 2) throw ConfigError("scan_count must be at least 2");
  Potential p = make_potential(cfg);

  std::vector<double> grid(cfg.scan_count);
  for (int i = 0; i < cfg.scan_count; ++i)
    grid[i] = cfg.e_min +
              (cfg.e_max - cfg.e_min) * i / double(cfg.scan_count - 1);

  auto t0 = std::chrono::steady_clock::now();
  QuantizeOptions opts = make_quantize_options(
      cfg, cfg.engine == "both" ? "riccati" : cfg.engine);
  ActionCurve curve = action_curve(p, grid, opts);

  Report report;
  report.command = "scan";
  report.meta = config_echo(cfg);
  report.meta.push_back(std::string("tool=") + kVersion);
  report.meta.push_back(std::string("monotone=") +
                        (curve.monotone ? "true" : "false"));
  report.columns = {"e", "j"};
  for (const auto& [e, j] : curve.samples)
    report.rows.push_back({fmt17(e), fmt17(j)});
  report.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  emit(report, cfg, out);
  return 0;
}

int cmd_wavefunction(const RunConfig& cfg, int level, std::ostream& out) {
  Potential p = make_potential(cfg);
  QuantizeOptions opts = make_quantize_options(
      cfg, cfg.engine == "both" ? "riccati" : cfg.engine);
  opts.want_wavefunction = true;

  auto t0 = std::chrono::steady_clock::now();
  Eigensolution sol = solve_eigenvalue(p, level, opts);
  if (!sol.wavefunction)
    throw NonConvergence("wavefunction: level did not converge");

  Report report;
  report.command = "wavefunction";
  report.meta = config_echo(cfg);
  report.meta.push_back(std::string("tool=") + kVersion);
  report.meta.push_back("n=" + std::to_string(sol.n));
  report.meta.push_back("energy=" + fmt17(sol.e));
  report.meta.push_back("node_count=" +
                        std::to_string(sol.wavefunction->node_count));
  report.columns = {"x", "psi"};
  for (std::size_t i = 0; i < sol.wavefunction->x.size(); ++i)
    report.rows.push_back(
        {fmt17(sol.wavefunction->x[i]), fmt17(sol.wavefunction->psi[i])});
  report.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  emit(report, cfg, out);
  return 0;
}

int cmd_bench(const RunConfig& cfg_in, const std::string& table,
              std::ostream& out) {
  auto fixtures = load_fixtures();
  const TableFixture& fixture = find_fixture(fixtures, table);

  RunConfig cfg = cfg_in;
  double tolerance;
  if (table == "table1") {
    cfg.potential_spec = "builtin:woods_saxon";
    cfg.l = 1;
    tolerance = 5e-8;
  } else if (table == "table2") {
    cfg.potential_spec = "builtin:double_oscillator";
    cfg.l.reset();
    tolerance = 5e-6;
  } else {
    throw ConfigError("bench: no benchmark wiring for fixture '" + table +
                      "'");
  }
  Potential p = make_potential(cfg);

  Report report;
  report.command = "bench";
  report.meta.push_back("table=" + table);
  report.meta.push_back("potential=" + fixture.potential_desc);
  report.meta.push_back("tolerance=" + fmt17(tolerance));
  report.meta.push_back(std::string("tool=") + kVersion);
  report.columns = {"n", "e_published", "e_computed", "abs_diff", "status"};

  auto t0 = std::chrono::steady_clock::now();
  QuantizeOptions opts = make_quantize_options(
      cfg, cfg.engine == "both" ? "riccati" : cfg.engine);
  bool all_pass = true;
  for (const TableRow& row : fixture.rows) {
    std::string status;
    double e = NAN, diff = NAN;
    try {
      Eigensolution sol = solve_eigenvalue(p, row.n, opts);
      e = sol.e;
      diff = std::fabs(e - row.present);
      status = diff <= tolerance ? "pass" : "FAIL";
    } catch (const Error& err) {
      status = std::string("error: ") + err.what();
    }
    if (status != "pass") all_pass = false;
    report.rows.push_back({std::to_string(row.n), row.present_str, fmt17(e),
                           fmt17(diff), status});
  }
  report.meta.push_back(std::string("result=") +
                        (all_pass ? "pass" : "fail"));
  report.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  emit(report, cfg, out);
  return all_pass ? 0 : 2;
}

int cmd_compare(const RunConfig& cfg, std::ostream& out) {
  Potential p = make_potential(cfg);
  const bool radial = p.angular_momentum_l.has_value();

  Report report;
  report.command = "compare";
  report.meta = config_echo(cfg);
  report.meta.push_back(std::string("tool=") + kVersion);
  report.columns = {"n", "e_present", "e_wkb", "e_langer", "e_oracle"};

  auto t0 = std::chrono::steady_clock::now();
  int failures = 0;
  QuantizeOptions opts = make_quantize_options(
      cfg, cfg.engine == "both" ? "riccati" : cfg.engine);
  for (int n = cfg.n_min; n <= cfg.n_max; ++n) {
    std::vector<std::string> row{std::to_string(n)};
    try {
      row.push_back(fmt17(solve_eigenvalue(p, n, opts).e));
    } catch (const Error&) {
      row.push_back("nan");
      ++failures;
    }
    try {
      row.push_back(fmt17(wkb_eigenvalue(p, n, false, opts.disc)));
    } catch (const Error&) {
      row.push_back("nan");
    }
    if (radial) {
      try {
        row.push_back(fmt17(wkb_eigenvalue(p, n, true, opts.disc)));
      } catch (const Error&) {
        row.push_back("nan");
      }
    } else {
      row.push_back("");
    }
    double oracle = NAN;
    oracle_value(p, n, &oracle);
    row.push_back(fmt17(oracle));
    report.rows.push_back(std::move(row));
  }
  report.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  emit(report, cfg, out);
  return failures == 0 ? 0 : 2;
}

}  // namespace

int cli_run(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Bound-state eigenvalue solver via the phase-accumulation "
               "quantization condition"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  CommonFlags solve_flags, scan_flags, wf_flags, bench_flags, cmp_flags;
  int wf_level = 0;
  std::string bench_table;

  auto* solve = app.add_subcommand("solve", "solve a bound-state spectrum");
  add_common(solve, &solve_flags, true);
  auto* scan = app.add_subcommand("scan", "sample the action curve J(E)");
  add_common(scan, &scan_flags, true);
  auto* wf = app.add_subcommand("wavefunction",
                                "emit one reconstructed wavefunction");
  add_common(wf, &wf_flags, true);
  wf->add_option("--level", wf_level, "quantum number n (default 0)");
  auto* bench = app.add_subcommand("bench", "reproduce a published table");
  add_common(bench, &bench_flags, false);
  bench->add_option("table", bench_table, "table id (table1 | table2)")
      ->required();
  auto* cmp = app.add_subcommand(
      "compare", "present method vs WKB and Langer-corrected WKB");
  add_common(cmp, &cmp_flags, true);

  std::vector<const char*> argv;
  argv.push_back("qaction");
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << "\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }

  try {
    if (solve->parsed()) return cmd_solve(load_config(solve_flags), out);
    if (scan->parsed()) return cmd_scan(load_config(scan_flags), out);
    if (wf->parsed())
      return cmd_wavefunction(load_config(wf_flags), wf_level, out);
    if (bench->parsed())
      return cmd_bench(load_config(bench_flags), bench_table, out);
    if (cmp->parsed()) return cmd_compare(load_config(cmp_flags), out);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const FixtureError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}

}  // namespace qaction
