#include "qaction/phaseflow.hpp"

#include <algorithm>
#include <cmath>

#include "qaction/errors.hpp"
#include "qaction/ode.hpp"
#include "qaction/quadrature.hpp"

namespace qaction {

namespace {

constexpr double kHalfPi = 1.5707963267948966;
constexpr double kPi = 3.141592653589793;

// State components: y[0] = phi (fixed-scale Pruefer angle, P = s*tan(phi)),
// y[1] = ln R with psi = R*cos(phi), psi' = -s*R*sin(phi).
//   phi'  = (kappa^2 cos^2 phi + s^2 sin^2 phi)/s
//   lnR'  = ((kappa^2 - s^2)/s) sin(phi) cos(phi)
// This is the Riccati flow dP/dx = kappa^2 + P^2 in a pole-free chart; the
// angle arctan(P/kappa) used by the quantization bookkeeping is recovered
// pointwise from phi and the local kappa.
struct PhaseRhs {
  const Potential* p;
  double e;
  double s;

  void operator()(double x, const std::array<double, 2>& y,
                  std::array<double, 2>& dy) const {
    double ks = p->kappa_sq(x, e);
    double c = std::cos(y[0]), sn = std::sin(y[0]);
    dy[0] = (ks * c * c + s * s * sn * sn) / s;
    dy[1] = ((ks - s * s) / s) * sn * c;
  }
};

double clamped_tan(double s, double phi) {
  // Principal part of phi, then P = s*tan; clamp the pole neighborhood.
  double k = std::floor((phi + kHalfPi) / kPi);
  double frac = phi - k * kPi;
  double t = std::tan(frac);
  double v = s * t;
  if (!std::isfinite(v)) v = std::copysign(1e300, t);
  return v;
}

int bands_crossed_up(double phi_start, double phi_end) {
  // Poles of P passed while phi increases.
  return static_cast<int>(std::floor((phi_end + kHalfPi) / kPi) -
                          std::floor((phi_start + kHalfPi) / kPi));
}

struct SweepSpec {
  double x_from = 0, x_to = 0;
  double phi0 = 0;
  double h_max = INFINITY;   // step cap inside the allowed span
  double span_lo = -INFINITY, span_hi = INFINITY;  // where the cap applies
};

RiccatiTrace run_sweep(const Potential& p, double energy, double scale,
                       const SweepSpec& spec, const PhaseFlowOptions& opts,
                       bool record) {
  RiccatiTrace tr;
  tr.e = energy;
  tr.scale = scale;
  tr.x_start = spec.x_from;
  tr.x_end = spec.x_to;
  tr.phi_start = spec.phi0;

  DormandPrince<2> ode;
  ode.rtol = opts.tol;
  ode.atol = 0.1 * opts.tol;

  PhaseRhs rhs{&p, energy, scale};
  std::array<double, 2> y{spec.phi0, 0.0};

  // Split at derivative kinks and at the allowed-span edges; the step cap
  // applies only between the turning points, tails may stride freely.
  std::vector<double> cuts;
  double a = spec.x_from, b = spec.x_to;
  auto add_cut = [&](double c) {
    if ((c > a && c < b) || (c > b && c < a)) cuts.push_back(c);
  };
  for (double c : p.breakpoints) add_cut(c);
  if (std::isfinite(spec.span_lo)) add_cut(spec.span_lo);
  if (std::isfinite(spec.span_hi)) add_cut(spec.span_hi);
  std::sort(cuts.begin(), cuts.end());
  if (a > b) std::reverse(cuts.begin(), cuts.end());
  cuts.push_back(b);

  // Points carry the raw angle during the sweep; it is rebased below so the
  // recorded phase is zero at the leftmost end and grows with x.
  if (record) tr.points.push_back({a, clamped_tan(scale, y[0]), y[0], y[1]});
  auto observer = [&](double x, const std::array<double, 2>& st) {
    if (!record) return;
    tr.points.push_back({x, clamped_tan(scale, st[0]), st[0], st[1]});
  };

  double x = a;
  for (double target : cuts) {
    if (target != x) {
      double seg_mid = 0.5 * (x + target);
      bool inside = seg_mid >= spec.span_lo && seg_mid <= spec.span_hi;
      ode.h_max = inside ? spec.h_max : INFINITY;
      ode.integrate(rhs, x, target, y, observer);
    }
    x = target;
  }

  tr.phi_end = y[0];
  tr.lnr_end = y[1];
  tr.poles = (b >= a) ? bands_crossed_up(spec.phi0, y[0])
                      : bands_crossed_up(y[0], spec.phi0);
  if (record) {
    double base = (b >= a) ? spec.phi0 : y[0];
    for (auto& pt : tr.points) pt.phase -= base;
  }
  return tr;
}

struct Boundary {
  double phi0 = 0;
  bool wall = false;
};

// Initial angle at a sweep start: the decaying-tail log-derivative mapped
// into the phi chart, or the exact wall limit.
Boundary start_condition(const Potential& p, double energy, double x,
                         double scale, bool left_end) {
  Boundary b;
  bool wall = left_end ? p.has_left_wall() : p.has_right_wall();
  if (wall) {
    b.phi0 = left_end ? -kHalfPi : kHalfPi;
    b.wall = true;
    return b;
  }
  double ks = p.kappa_sq(x, energy);
  double alpha = ks < 0 ? std::sqrt(-ks) : 0.0;
  double p0 = left_end ? -alpha : alpha;
  b.phi0 = std::atan(p0 / scale);
  return b;
}

}  // namespace

RiccatiTrace integrate_phase(const Potential& p, double energy,
                             const Discretization& d,
                             const PhaseFlowOptions& opts) {
  if (!(opts.tol > 0) || opts.tol > 1e-4)
    throw InvalidParam("integrate_phase: tol must be in (0, 1e-4]");
  double scale = 1.0;
  if (!d.turning_points.empty()) {
    double lo = d.turning_points.front(), hi = d.turning_points.back();
    double ks_best = 0;
    for (int i = 0; i <= 16; ++i) {
      double x = lo + (hi - lo) * i / 16.0;
      ks_best = std::fmax(ks_best, p.kappa_sq(x, energy));
    }
    scale = std::sqrt(std::fmax(ks_best, 1e-12));
  } else {
    scale = std::sqrt(std::fmax(p.kappa_sq(0.5 * (d.x_c + d.x_d), energy), 1e-12));
  }

  SweepSpec spec;
  spec.x_from = d.x_d;
  spec.x_to = d.x_c;
  Boundary init = start_condition(p, energy, d.x_d, scale, /*left_end=*/false);
  spec.phi0 = init.phi0;
  if (!d.turning_points.empty()) {
    spec.span_lo = d.turning_points.front();
    spec.span_hi = d.turning_points.back();
  } else {
    spec.span_lo = d.x_c;
    spec.span_hi = d.x_d;
  }
  double span = spec.span_hi - spec.span_lo;
  spec.h_max = std::fmax(span * opts.h_max_frac, 1e-12);
  return run_sweep(p, energy, scale, spec, opts, /*record=*/true);
}

MatchedPhase matched_action(const PotentialScan& scan, double energy,
                            double x_match, const PhaseFlowOptions& opts) {
  const Potential& p = scan.potential();
  MatchedPhase m;
  m.e = energy;

  AllowedSpan span = scan.allowed_span(energy);
  Truncation tr = scan.truncate(energy);
  m.x_l = span.lo;
  m.x_r = span.hi;
  m.x_c = tr.x_c;
  m.x_d = tr.x_d;
  m.x_m = x_match;

  double ks_m = p.kappa_sq(x_match, energy);
  if (ks_m <= 0)
    throw NoTurningPoints("matched_action: matching point is not classically "
                          "allowed at this energy");
  m.kappa_m = std::sqrt(ks_m);

  // The matching point sits inside the allowed region at every usable
  // energy, so its kappa is a well-conditioned Pruefer scale.
  double scale = m.kappa_m;
  double h_max = std::fmax((span.hi - span.lo) * opts.h_max_frac, 1e-12);

  SweepSpec right;
  right.x_from = tr.x_d;
  right.x_to = x_match;
  right.phi0 = start_condition(p, energy, tr.x_d, scale, false).phi0;
  right.h_max = h_max;
  right.span_lo = span.lo;
  right.span_hi = span.hi;
  m.right = run_sweep(p, energy, scale, right, opts, opts.record);

  SweepSpec left;
  left.x_from = tr.x_c;
  left.x_to = x_match;
  left.phi0 = start_condition(p, energy, tr.x_c, scale, true).phi0;
  left.h_max = h_max;
  left.span_lo = span.lo;
  left.span_hi = span.hi;
  m.left = run_sweep(p, energy, scale, left, opts, opts.record);

  // Band indices at the matching point.
  int k_left = static_cast<int>(std::floor((m.left.phi_end + kHalfPi) / kPi));
  int k_right = -static_cast<int>(std::floor((m.right.phi_end + kHalfPi) / kPi));
  double p_left = clamped_tan(scale, m.left.phi_end);
  double p_right = clamped_tan(scale, m.right.phi_end);

  double jpi = (k_left + k_right) * kPi + kPi + std::atan(p_left / m.kappa_m) -
               std::atan(p_right / m.kappa_m);
  m.span_phase = jpi;
  m.j = jpi / kPi;
  m.poles = k_left + k_right;
  return m;
}

double kappa_integral(const PotentialScan& scan, double energy,
                      double rel_tol) {
  const Potential& p = scan.potential();
  AllowedSpan span = scan.allowed_span(energy);
  auto kappa = [&](double x) {
    double ks = p.kappa_sq(x, energy);
    return ks > 0 ? std::sqrt(ks) : 0.0;
  };
  bool sing_left = !span.wall_lo || p.singular_origin;
  bool sing_right = !span.wall_hi;
  return integrate_sqrt_endpoints(kappa, span.lo, span.hi, sing_left,
                                  sing_right, p.breakpoints, rel_tol, 1e-14);
}

double delta_integral(const MatchedPhase& matched, const PotentialScan& scan,
                      double rel_tol) {
  return matched.span_phase - kappa_integral(scan, matched.e, rel_tol);
}

WavefunctionTable reconstruct_wavefunction(const PotentialScan& scan,
                                           const MatchedPhase& matched,
                                           const std::vector<double>& samples,
                                           const PhaseFlowOptions& opts) {
  const Potential& p = scan.potential();
  const double e = matched.e;
  double nearest = std::fabs(matched.j - std::lround(matched.j));
  if (nearest > 1e-5)
    throw NotAnEigenvalue("reconstruct_wavefunction: |J - round(J)| = " +
                          std::to_string(nearest));

  double scale = matched.right.scale;
  DormandPrince<2> ode;
  ode.rtol = opts.tol;
  ode.atol = 0.1 * opts.tol;
  ode.h_max = std::fmax((matched.x_r - matched.x_l) * opts.h_max_frac, 1e-12);
  PhaseRhs rhs{&p, e, scale};

  // Evaluate (phi, lnR) at each sample by stepping through them in sweep
  // order; left sweep covers x < x_m, right sweep covers x >= x_m.
  std::vector<double> phi(samples.size()), lnr(samples.size());

  {  // left sweep upward
    std::array<double, 2> y{
        start_condition(p, e, matched.x_c, scale, true).phi0, 0.0};
    double x = matched.x_c;
    for (std::size_t i = 0; i < samples.size(); ++i) {
      double t = samples[i];
      if (t >= matched.x_m) break;
      if (t < matched.x_c) { phi[i] = y[0]; lnr[i] = -1e30; continue; }
      if (t > x) ode.integrate(rhs, x, t, y);
      x = std::fmax(x, t);
      phi[i] = y[0];
      lnr[i] = y[1];
    }
  }
  double lnc_left, sign_left;
  {  // right sweep downward, then match amplitudes at x_m
    std::array<double, 2> y{
        start_condition(p, e, matched.x_d, scale, false).phi0, 0.0};
    double x = matched.x_d;
    for (std::size_t i = samples.size(); i-- > 0;) {
      double t = samples[i];
      if (t < matched.x_m) break;
      if (t > matched.x_d) { phi[i] = y[0]; lnr[i] = -1e30; continue; }
      if (t < x) ode.integrate(rhs, x, t, y);
      x = std::fmin(x, t);
      phi[i] = y[0];
      lnr[i] = y[1];
    }
    // Continue the right sweep to x_m for the matching factor.
    if (x > matched.x_m) ode.integrate(rhs, x, matched.x_m, y);

    double phi_r = y[0], lnr_r = y[1];
    double phi_l = matched.left.phi_end, lnr_l = matched.left.lnr_end;
    double cr = std::cos(phi_r), cl = std::cos(phi_l);
    double sr = std::sin(phi_r), sl = std::sin(phi_l);
    // psi = R cos(phi); match by value, or by derivative at a node.
    if (std::fabs(cl) > std::fabs(sl)) {
      sign_left = std::copysign(1.0, (cr / cl));
      lnc_left = lnr_r - lnr_l + std::log(std::fabs(cr / cl));
    } else {
      sign_left = std::copysign(1.0, (sr / sl));
      lnc_left = lnr_r - lnr_l + std::log(std::fabs(sr / sl));
    }
  }

  // Assemble with a common log offset to stay in range.
  double ln_max = -1e300;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    double base = samples[i] < matched.x_m ? lnr[i] + lnc_left : lnr[i];
    ln_max = std::fmax(ln_max, base);
  }
  WavefunctionTable table;
  table.x = samples;
  table.psi.resize(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    bool left = samples[i] < matched.x_m;
    double base = left ? lnr[i] + lnc_left : lnr[i];
    double amp = std::exp(base - ln_max);
    table.psi[i] = (left ? sign_left : 1.0) * amp * std::cos(phi[i]);
  }

  // Normalize: composite Simpson on uniform samples, trapezoid otherwise.
  double norm_sq = 0;
  std::size_t n = samples.size();
  bool uniform = true;
  double h0 = n > 1 ? samples[1] - samples[0] : 1;
  for (std::size_t i = 1; i + 1 < n; ++i)
    if (std::fabs((samples[i + 1] - samples[i]) - h0) > 1e-9 * std::fabs(h0))
      uniform = false;
  if (uniform && n >= 3 && n % 2 == 1) {
    for (std::size_t i = 0; i < n; ++i) {
      double w = (i == 0 || i == n - 1) ? 1 : (i % 2 == 1 ? 4 : 2);
      norm_sq += w * table.psi[i] * table.psi[i];
    }
    norm_sq *= h0 / 3;
  } else {
    for (std::size_t i = 0; i + 1 < n; ++i)
      norm_sq += 0.5 * (table.psi[i] * table.psi[i] +
                        table.psi[i + 1] * table.psi[i + 1]) *
                 (samples[i + 1] - samples[i]);
  }
  double inv = 1.0 / std::sqrt(norm_sq);
  for (double& v : table.psi) v *= inv;
  table.norm_constant = inv * std::exp(-ln_max);

  // Count strict sign changes with a small hysteresis threshold.
  double peak = 0;
  for (double v : table.psi) peak = std::fmax(peak, std::fabs(v));
  double tau = 1e-9 * peak;
  int nodes = 0;
  int last_sign = 0;
  for (double v : table.psi) {
    int s = v > tau ? 1 : (v < -tau ? -1 : 0);
    if (s != 0) {
      if (last_sign != 0 && s != last_sign) ++nodes;
      last_sign = s;
    }
  }
  table.node_count = nodes;
  return table;
}

std::vector<double> default_samples(const MatchedPhase& matched, int count) {
  std::vector<double> xs(count);
  for (int i = 0; i < count; ++i)
    xs[i] = matched.x_c + (matched.x_d - matched.x_c) * i / (count - 1.0);
  return xs;
}

}  // namespace qaction
