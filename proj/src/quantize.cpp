#include "qaction/quantize.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "qaction/errors.hpp"
#include "qaction/rootfind.hpp"
#include "qaction/tmatrix.hpp"

namespace qaction {

namespace {

constexpr double kPi = 3.141592653589793;

PhaseFlowOptions phase_opts(const QuantizeOptions& opts) {
  PhaseFlowOptions pf;
  pf.tol = std::fmin(opts.ode_tol, std::fmax(opts.tol_j * 1e-2, 1e-13));
  return pf;
}

// Cached tmatrix grid geometry; kappa_sq is rebuilt per energy from v_mid.
struct TmGrid {
  double x_c = 0, x_d = 0;
  int n = 0;
  std::vector<double> v_mid;

  Discretization at(const Potential& p, double e) const {
    Discretization d;
    d.x_c = x_c;
    d.x_d = x_d;
    d.layer_count = n;
    d.e = e;
    d.kappa_sq.resize(n);
    const double f = 2.0 * p.mass / (p.hbar * p.hbar);
    for (int j = 0; j < n; ++j) d.kappa_sq[j] = f * (e - v_mid[j]);
    return d;
  }
};

TmGrid make_grid(const PotentialScan& scan, double e_ref, int n) {
  const Potential& p = scan.potential();
  Truncation tr = scan.truncate(e_ref);
  TmGrid g;
  g.x_c = tr.x_c;
  g.x_d = tr.x_d;
  g.n = n + (n % 2);  // even counts keep symmetric kinks on boundaries
  g.v_mid.resize(g.n);
  double h = (g.x_d - g.x_c) / g.n;
  for (int j = 0; j < g.n; ++j) g.v_mid[j] = p.eval(g.x_c + (j + 0.5) * h);
  return g;
}

int auto_layer_count(const PotentialScan& scan, double e_ref) {
  Truncation tr = scan.truncate(e_ref);
  double span = tr.x_d - tr.x_c;
  // Sample kappa across the allowed region; the wall-divergent values near a
  // Coulomb origin must not set the layer budget.
  AllowedSpan allowed = scan.allowed_span(e_ref);
  double kmax = 0;
  for (int i = 0; i < 17; ++i) {
    double x = allowed.lo + (allowed.hi - allowed.lo) * (i + 0.5) / 17.0;
    kmax = std::fmax(kmax, scan.potential().kappa_sq(x, e_ref));
  }
  kmax = std::sqrt(std::fmax(kmax, 1e-12));
  int n = static_cast<int>(std::ceil(span * kmax * 10.0));
  return std::clamp(n, 12288, 200000);
}

// Polynomial extrapolation to u = 0 through (u_k, v_k).
double neville_zero(std::vector<double> u, std::vector<double> v) {
  const int n = static_cast<int>(u.size());
  for (int j = 1; j < n; ++j)
    for (int i = n - 1; i >= j; --i)
      v[i] = ((0 - u[i - j]) * v[i] - (0 - u[i]) * v[i - 1]) / (u[i] - u[i - j]);
  return v[n - 1];
}

// Search anchor: an energy safely below the ground state plus the fixed
// matching point used for every J evaluation of one solve. Potentials whose
// minimum is a singular wall value (Coulomb origins) get the floor by
// probing downward until J drops below 1 instead of trusting v_min.
struct Anchor {
  double e_floor = 0;
  double x_m = 0;
};

Anchor make_anchor(const PotentialScan& scan) {
  const Potential& p = scan.potential();
  double vmin = scan.v_min();
  if (!p.singular_origin && vmin > -1e6) {
    double e = vmin + 1e-7 * std::fmax(1.0, std::fabs(vmin));
    return {e, scan.matching_point(e)};
  }
  double d = p.confining() ? 0.0 : p.dissociation_limit;
  double depth = std::fmax(1.0, std::fabs(d));
  PhaseFlowOptions pf;
  pf.tol = 1e-8;  // floor probing only needs coarse J values
  for (int k = 0; k < 60; ++k) {
    double e = d - depth;
    AllowedSpan span = scan.allowed_span(e);
    double probe = 0.5 * (span.lo + span.hi);
    if (matched_action(scan, e, probe, pf).j < 0.9)
      return {e, scan.matching_point(e)};
    depth *= 2;
  }
  throw NoSuchBoundState("anchor: no energy below the ground state found");
}

struct Solver {
  const Potential* p;
  QuantizeOptions opts;
  std::shared_ptr<PotentialScan> scan;
  double x_m = 0;
  double e_lo = 0;

  explicit Solver(const Potential& pot, const QuantizeOptions& o)
      : p(&pot), opts(o) {
    scan = std::make_shared<PotentialScan>(pot, o.disc);
    Anchor anchor = make_anchor(*scan);
    e_lo = anchor.e_floor;
    x_m = anchor.x_m;
  }

  double j_riccati(double e) const {
    return matched_action(*scan, e, x_m, phase_opts(opts)).j;
  }

  // Upper search bound: growth for confining potentials, threshold otherwise.
  double search_hi(int n_target) const {
    if (!std::isnan(opts.e_max)) return opts.e_max;
    double vmin = scan->v_min();
    if (p->confining()) {
      double e_hi = vmin + std::fmax(1.0, std::fabs(vmin));
      for (int k = 0; k < 200; ++k) {
        if (j_riccati(e_hi) > n_target + 1.25) return e_hi;
        e_hi = vmin + 2.0 * (e_hi - vmin);
      }
      throw NoSuchBoundState("search: J(E) never reached the target");
    }
    double d = scan->dissociation();
    double e_hi = d - 1e-6 * std::fmax(1.0, std::fabs(d));
    if (e_hi <= e_lo)
      throw NoSuchBoundState("search: no room below the continuum threshold");
    return e_hi;
  }

  Bracket bracket_level(int n, double e_hi,
                        const std::function<double(double)>& j_of_e) const {
    const double target = n + 1;
    double a = e_lo, fa = j_of_e(a) - target;
    if (fa >= 0)
      throw NoSuchBoundState("bracket: J already above target at the bottom");
    double b = e_hi, fb = j_of_e(b) - target;
    if (fb < 0)
      throw NoSuchBoundState("bracket: potential holds fewer bound states");
    // Coarse subdivision narrows the bracket before refinement.
    int pieces = std::max(8, opts.coarse_points / 4);
    for (int i = 1; i < pieces; ++i) {
      double x = a + (b - a) * static_cast<double>(i) / pieces;
      double fx = j_of_e(x) - target;
      if (fx < 0) {
        a = x;
        fa = fx;
      } else {
        b = x;
        fb = fx;
        break;
      }
    }
    return {a, b, fa, fb};
  }

  double refine(const std::function<double(double)>& j_of_e, int n,
                Bracket br) const {
    auto g = [&](double e) { return j_of_e(e) - (n + 1); };
    return solve_bracketed(g, br, 1e-15, opts.tol_j, 240);
  }

  double solve_riccati(int n) const {
    auto j = [&](double e) { return j_riccati(e); };
    double e_hi = search_hi(n);
    Bracket br = bracket_level(n, e_hi, j);
    return refine(j, n, br);
  }

  double solve_tmatrix(int n, double e_ref_hint) const {
    // Levels of the layer ladder; sqrt(h) expansion at singular origins
    // needs the longer ladder.
    const bool sqrt_edge = p->singular_origin;
    const int levels = sqrt_edge ? 5 : 3;
    int n0 = opts.layer_count > 0 ? opts.layer_count
                                  : auto_layer_count(*scan, e_ref_hint);

    std::vector<double> us, es;
    double e_prev = e_ref_hint;
    for (int k = 0; k < levels; ++k) {
      int layers = n0 * (1 << (sqrt_edge ? 2 * k : k));
      TmGrid grid = make_grid(*scan, std::fmax(e_ref_hint, e_prev), layers);
      auto j = [&](double e) {
        Discretization d = grid.at(*p, e);
        return discrete_action(*p, d, x_m);
      };
      // Bracket around the previous estimate, expanding as needed.
      double w = 1e-4 * std::fmax(1.0, std::fabs(e_prev));
      double a = e_prev - w, b = e_prev + w;
      double fa = j(a) - (n + 1), fb = j(b) - (n + 1);
      for (int grow = 0; grow < 60 && (fa >= 0 || fb < 0); ++grow) {
        w *= 3;
        if (fa >= 0) a = e_prev - w, fa = j(a) - (n + 1);
        if (fb < 0) b = e_prev + w, fb = j(b) - (n + 1);
        if (a < scan->v_min())
          a = scan->v_min() + 1e-9, fa = j(a) - (n + 1);
      }
      if (fa >= 0 || fb < 0)
        throw NonConvergence("tmatrix: failed to bracket level n=" +
                             std::to_string(n));
      double e_k = refine(j, n, {a, b, fa, fb});
      double h = (grid.x_d - grid.x_c) / grid.n;
      us.push_back(sqrt_edge ? std::sqrt(h) : h * h);
      es.push_back(e_k);
      e_prev = e_k;
    }
    return neville_zero(us, es);
  }
};

Eigensolution finish_solution(const Potential& p, const PotentialScan& scan,
                              double x_m, double e_star, int n,
                              const QuantizeOptions& opts, double h_used) {
  Eigensolution sol;
  sol.n = n;
  sol.n_paper = n + p.paper_n_offset;
  sol.e = e_star;
  sol.engine = engine_name(opts.engine);
  sol.ode_tol_used = phase_opts(opts).tol;
  sol.h_used = h_used;

  PhaseFlowOptions pf = phase_opts(opts);
  pf.record = opts.want_wavefunction;
  MatchedPhase matched = matched_action(scan, e_star, x_m, pf);
  sol.j_residual = std::fabs(matched.j - (n + 1));
  sol.node_count = static_cast<int>(std::lround(matched.j)) - 1;
  sol.converged = sol.j_residual <= std::fmax(opts.tol_j * 100, 1e-8) ||
                  (opts.engine == Engine::tmatrix && sol.j_residual < 1e-4);
  if (!sol.converged)
    sol.message = "quantization residual " + std::to_string(sol.j_residual);

  double ik = kappa_integral(scan, e_star);
  sol.delta_integral = matched.span_phase - ik;
  sol.delta = (sol.n_paper + 1) * kPi - ik;

  if (!p.confining()) {
    double d = p.dissociation_limit;
    sol.shallow = std::fabs(d - e_star) < 1e-6 * std::fmax(1.0, std::fabs(d));
  }
  if (opts.want_wavefunction && sol.converged) {
    std::vector<double> xs = default_samples(matched, opts.wavefunction_samples);
    sol.wavefunction = std::make_shared<WavefunctionTable>(
        reconstruct_wavefunction(scan, matched, xs, pf));
  }
  return sol;
}

}  // namespace

const char* engine_name(Engine e) {
  return e == Engine::riccati ? "riccati" : "tmatrix";
}

double action(const Potential& p, double energy, const QuantizeOptions& opts) {
  PotentialScan scan(p, opts.disc);
  double x_m = scan.matching_point(energy);
  if (opts.engine == Engine::tmatrix) {
    int n0 = opts.layer_count > 0 ? opts.layer_count
                                  : auto_layer_count(scan, energy);
    TmGrid grid = make_grid(scan, energy, n0);
    return discrete_action(p, grid.at(p, energy), x_m);
  }
  return matched_action(scan, energy, x_m, phase_opts(opts)).j;
}

ActionCurve action_curve(const Potential& p, const std::vector<double>& grid,
                         const QuantizeOptions& opts) {
  ActionCurve curve;
  curve.engine = engine_name(opts.engine);
  curve.tol = opts.tol_j;
  if (grid.empty()) return curve;

  PotentialScan scan(p, opts.disc);
  double e_ref = *std::min_element(grid.begin(), grid.end());
  double x_m = scan.matching_point(e_ref);

  for (double e : grid) {
    double j;
    if (opts.engine == Engine::tmatrix) {
      int n0 = opts.layer_count > 0 ? opts.layer_count
                                    : auto_layer_count(scan, e);
      TmGrid g = make_grid(scan, e, n0);
      j = discrete_action(p, g.at(p, e), x_m);
    } else {
      j = matched_action(scan, e, x_m, phase_opts(opts)).j;
    }
    curve.samples.emplace_back(e, j);
  }
  for (std::size_t i = 1; i < curve.samples.size(); ++i) {
    if (curve.samples[i].first > curve.samples[i - 1].first &&
        curve.samples[i].second <= curve.samples[i - 1].second - 1e-9)
      curve.monotone = false;
  }
  if (!curve.monotone)
    throw MonotonicityViolation("action_curve: J(E) decreased beyond noise");
  return curve;
}

namespace {

// One complete solve at the scan's current origin regularization.
double solve_at_epsilon(const Potential& p, int n, const QuantizeOptions& opts,
                        double* h_used) {
  Solver solver(p, opts);
  double e_riccati = solver.solve_riccati(n);
  if (opts.engine == Engine::riccati) {
    if (h_used) *h_used = 0;
    return e_riccati;
  }
  double e_tm = solver.solve_tmatrix(n, e_riccati);
  if (h_used) {
    int n0 = opts.layer_count > 0 ? opts.layer_count
                                  : auto_layer_count(*solver.scan, e_riccati);
    Truncation tr = solver.scan->truncate(e_riccati);
    int levels = p.singular_origin ? 5 : 3;
    int finest = n0 * (1 << (p.singular_origin ? 2 * (levels - 1) : levels - 1));
    *h_used = (tr.x_d - tr.x_c) / finest;
  }
  return e_tm;
}

}  // namespace

Eigensolution solve_eigenvalue(const Potential& p, int n,
                               const QuantizeOptions& opts) {
  if (n < 0) throw InvalidParam("solve_eigenvalue: n must be nonnegative");

  double h_used = 0;
  double e_star;
  if (p.singular_origin) {
    // Hard wall at epsilon; Richardson in epsilon removes the O(eps) shift.
    QuantizeOptions o1 = opts;
    QuantizeOptions o2 = opts;
    o2.disc.origin_epsilon = opts.disc.origin_epsilon / 10.0;
    double e1 = solve_at_epsilon(p, n, o1, &h_used);
    double e2 = solve_at_epsilon(p, n, o2, nullptr);
    e_star = (10.0 * e2 - e1) / 9.0;
  } else {
    e_star = solve_at_epsilon(p, n, opts, &h_used);
  }

  PotentialScan scan(p, opts.disc);
  Anchor anchor = make_anchor(scan);
  return finish_solution(p, scan, anchor.x_m, e_star, n, opts, h_used);
}

SpectrumResult solve_spectrum(const Potential& p, int n_max,
                              const QuantizeOptions& opts) {
  SpectrumResult result;
  for (int n = 0; n <= n_max; ++n) {
    try {
      result.levels.push_back(solve_eigenvalue(p, n, opts));
    } catch (const Error& err) {
      result.failures.emplace_back(n, err.what());
    }
  }
  return result;
}

}  // namespace qaction
