#include "qaction/discretize.hpp"

#include <algorithm>
#include <cmath>

#include "qaction/errors.hpp"
#include "qaction/quadrature.hpp"
#include "qaction/rootfind.hpp"

namespace qaction {

namespace {

bool is_radial_like(const Potential& p) {
  return p.domain_kind != DomainKind::full_line;
}

double safe_v(const Potential& p, double x) {
  try {
    return p.eval(x);
  } catch (const DomainError&) {
    return std::numeric_limits<double>::infinity();
  }
}

}  // namespace

std::vector<double> locate_turning_points(const Potential& p, double energy,
                                          double bracket_lo, double bracket_hi,
                                          const DiscretizeOptions& opts) {
  if (!(bracket_hi > bracket_lo))
    throw BracketTooNarrow("locate_turning_points: empty bracket");

  const bool log_grid = is_radial_like(p) && bracket_lo > 0;
  auto grid_x = [&](int i, int n) {
    double t = static_cast<double>(i) / (n - 1);
    if (log_grid)
      return bracket_lo * std::pow(bracket_hi / bracket_lo, t);
    return bracket_lo + (bracket_hi - bracket_lo) * t;
  };

  auto f = [&](double x) { return safe_v(p, x) - energy; };

  const int n = std::max(16, opts.scan_points);
  std::vector<double> roots;
  double x_prev = grid_x(0, n);
  double f_prev = f(x_prev);
  bool any_below = f_prev < 0;
  for (int i = 1; i < n; ++i) {
    double x = grid_x(i, n);
    double fx = f(x);
    if (fx < 0) any_below = true;
    bool crossed = (f_prev < 0 && fx >= 0) || (f_prev > 0 && fx <= 0);
    if (crossed && std::isfinite(f_prev) && std::isfinite(fx)) {
      double r = bisect(f, x_prev, x, opts.tol_root);
      if (roots.empty() || r - roots.back() > 1e-9 * (bracket_hi - bracket_lo))
        roots.push_back(r);
    }
    x_prev = x;
    f_prev = fx;
  }
  if (!any_below && roots.empty())
    throw NoTurningPoints("locate_turning_points: E is below the potential "
                          "minimum inside the bracket");
  std::sort(roots.begin(), roots.end());
  return roots;
}

// ---------------------------------------------------------------------------
// PotentialScan
// ---------------------------------------------------------------------------

PotentialScan::PotentialScan(const Potential& p, const DiscretizeOptions& opts)
    : p_(&p), opts_(opts) {
  // Left scan edge.
  if (p.has_left_wall()) {
    scan_lo_ = *p.wall_left;
    if (p.singular_origin) scan_lo_ += opts.origin_epsilon;
  } else if (is_radial_like(p)) {
    scan_lo_ = 1e-12;
  } else {
    scan_lo_ = -16.0;
  }

  // Right scan edge: a wall, or grown until V exceeds the interior minimum
  // by a sizable margin (per-energy calls extend further as needed).
  if (p.has_right_wall()) {
    scan_hi_ = *p.wall_right;
  } else {
    double hi = is_radial_like(p) ? 16.0 : 16.0;
    for (int k = 0; k < 40; ++k) {
      double v_end = safe_v(p, hi);
      double v_mid = safe_v(p, 0.5 * (scan_lo_ + hi));
      if (std::isfinite(v_end) && v_end > v_mid + 1.0) break;
      if (std::isfinite(v_end) && !p.confining() &&
          std::fabs(v_end - p.dissociation_limit) <
              1e-6 * std::fmax(1.0, std::fabs(p.dissociation_limit)))
        break;
      hi *= 2;
    }
    scan_hi_ = hi;
    if (!p.has_left_wall() && !is_radial_like(p)) scan_lo_ = -hi;
  }

  // Coarse sampling for the global minimum.
  const int n = std::max(64, opts.scan_points);
  const bool log_grid = is_radial_like(p) && scan_lo_ > 0;
  grid_x_.reserve(n);
  grid_v_.reserve(n);
  v_min_ = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    double t = static_cast<double>(i) / (n - 1);
    double x = log_grid ? scan_lo_ * std::pow(scan_hi_ / scan_lo_, t)
                        : scan_lo_ + (scan_hi_ - scan_lo_) * t;
    double v = safe_v(p, x);
    grid_x_.push_back(x);
    grid_v_.push_back(v);
    if (v < v_min_) {
      v_min_ = v;
      x_min_ = x;
    }
  }
  // Parabolic refinement of the minimum between the neighboring grid points.
  auto it = std::min_element(grid_v_.begin(), grid_v_.end());
  std::size_t i = static_cast<std::size_t>(it - grid_v_.begin());
  if (i > 0 && i + 1 < grid_x_.size()) {
    double a = grid_x_[i - 1], b = grid_x_[i + 1];
    for (int k = 0; k < 120; ++k) {
      double m1 = a + (b - a) / 3, m2 = b - (b - a) / 3;
      if (safe_v(p, m1) < safe_v(p, m2))
        b = m2;
      else
        a = m1;
    }
    x_min_ = 0.5 * (a + b);
    double v = safe_v(p, x_min_);
    if (v < v_min_) v_min_ = v;
  }
}

std::vector<double> PotentialScan::turning_points(double energy) const {
  const Potential& p = *p_;
  if (energy <= v_min_)
    throw NoTurningPoints("turning_points: E at or below the minimum");

  double lo = scan_lo_;
  double hi = scan_hi_;
  // Extend the window until the potential exceeds E on soft sides.
  if (!p.has_right_wall()) {
    for (int k = 0; k < 60 && safe_v(p, hi) < energy; ++k) hi *= 2;
    if (safe_v(p, hi) < energy)
      throw UnboundedDirection("turning_points: V never exceeds E on the right");
  }
  if (!p.has_left_wall() && !is_radial_like(p)) {
    for (int k = 0; k < 60 && safe_v(p, lo) < energy; ++k) lo *= 2;
    if (safe_v(p, lo) < energy)
      throw UnboundedDirection("turning_points: V never exceeds E on the left");
  }
  std::vector<double> tps;
  bool coarse_any_below = true;
  try {
    tps = locate_turning_points(p, energy, lo, hi, opts_);
  } catch (const NoTurningPoints&) {
    coarse_any_below = false;
  }
  if (!tps.empty()) return tps;

  // Wall-bounded domains can be classically allowed end to end.
  if (p.has_left_wall() && p.has_right_wall() && coarse_any_below) return tps;

  // Just above the minimum the allowed sliver can fall between scan points;
  // zoom around the refined minimum until the crossings resolve.
  double w = 0.25 * (hi - lo);
  for (int k = 0; k < 60; ++k) {
    double a = std::fmax(lo, x_min_ - w);
    double b = std::fmin(hi, x_min_ + w);
    if (b > a && safe_v(p, x_min_) < energy) {
      try {
        std::vector<double> zoom =
            locate_turning_points(p, energy, a, b, opts_);
        if (!zoom.empty()) return zoom;
      } catch (const NoTurningPoints&) {
      }
    }
    w *= 0.25;
    if (w < 1e-300) break;
  }
  throw NoTurningPoints("turning_points: no crossings found (tangency or "
                        "sub-resolution well)");
}

AllowedSpan PotentialScan::allowed_span(double energy) const {
  const Potential& p = *p_;
  AllowedSpan span;
  std::vector<double> tps = turning_points(energy);

  if (p.has_left_wall()) {
    span.lo = *p.wall_left;
    span.wall_lo = true;
  } else {
    if (tps.empty())
      throw NoTurningPoints("allowed_span: no turning points for bound state");
    span.lo = tps.front();
  }
  if (p.has_right_wall()) {
    span.hi = *p.wall_right;
    span.wall_hi = true;
  } else {
    if (tps.empty())
      throw NoTurningPoints("allowed_span: no turning points for bound state");
    // Drop turning points that are not genuinely to the right of the wall
    // edge (singular origins put V below E near zero).
    span.hi = tps.back();
  }
  if (!(span.hi > span.lo))
    throw NoTurningPoints("allowed_span: empty allowed region");
  return span;
}

Truncation PotentialScan::truncate(double energy) const {
  const Potential& p = *p_;
  AllowedSpan span = allowed_span(energy);
  Truncation tr;

  auto alpha = [&](double x) {
    double a2 = -p.kappa_sq(x, energy);
    return a2 > 0 ? std::sqrt(a2) : 0.0;
  };

  // Right side.
  if (span.wall_hi) {
    tr.x_d = span.hi;
  } else {
    double acc = 0;
    double x = span.hi;
    double step = std::fmax((span.hi - span.lo) / 64.0, 1e-6);
    int guard = 0;
    while (acc < opts_.decay_budget) {
      double next = x + step;
      acc += integrate(alpha, x, next, 1e-6, 1e-9);
      x = next;
      step *= 1.5;
      if (++guard > 200 || x > 1e9)
        throw UnboundedDirection("truncate: decay budget unreachable rightward");
    }
    tr.x_d = x;
  }

  // Left side.
  if (span.wall_lo) {
    tr.x_c = *p.wall_left + (p.singular_origin ? opts_.origin_epsilon : 0.0);
  } else if (is_radial_like(p)) {
    // Shrink geometrically toward the origin; the centrifugal barrier makes
    // the integral diverge, so the budget is always reached.
    double acc = 0;
    double x = span.lo;
    int guard = 0;
    while (acc < opts_.decay_budget) {
      double next = 0.7 * x;
      acc += integrate(alpha, next, x, 1e-6, 1e-9);
      x = next;
      if (++guard > 400 || x < 1e-300)
        throw UnboundedDirection("truncate: decay budget unreachable at origin");
    }
    tr.x_c = x;
  } else {
    double acc = 0;
    double x = span.lo;
    double step = std::fmax((span.hi - span.lo) / 64.0, 1e-6);
    int guard = 0;
    while (acc < opts_.decay_budget) {
      double next = x - step;
      acc += integrate(alpha, next, x, 1e-6, 1e-9);
      x = next;
      step *= 1.5;
      if (++guard > 200 || x < -1e9)
        throw UnboundedDirection("truncate: decay budget unreachable leftward");
    }
    tr.x_c = x;
  }

  // Symmetric potentials get exactly symmetric truncations, which keeps the
  // |x| kink of the double oscillator on a layer boundary for even counts.
  if (p.symmetric && !span.wall_lo && !span.wall_hi) {
    double w = std::fmax(std::fabs(tr.x_c), std::fabs(tr.x_d));
    tr.x_c = -w;
    tr.x_d = w;
  }
  return tr;
}

double PotentialScan::matching_point(double e_lowest) const {
  AllowedSpan span = allowed_span(e_lowest);
  // The refined global minimum is classically allowed at every energy above
  // v_min, so prefer it; fall back to the span midpoint only when the
  // minimum hugs a scan edge (wall-adjacent monotone potentials).
  double edge_frac = (x_min_ - scan_lo_) / (scan_hi_ - scan_lo_);
  if (x_min_ > span.lo && x_min_ < span.hi && edge_frac > 1e-4 &&
      edge_frac < 1.0 - 1e-4)
    return x_min_;
  return 0.5 * (span.lo + span.hi);
}

// ---------------------------------------------------------------------------

Discretization build_layers(const Potential& p, double energy, double x_c,
                            double x_d, int layer_count) {
  if (layer_count < 3) throw InvalidParam("build_layers: layer_count < 3");
  if (!(x_c < x_d)) throw InvalidParam("build_layers: x_c must be < x_d");
  Discretization d;
  d.x_c = x_c;
  d.x_d = x_d;
  d.layer_count = layer_count;
  d.e = energy;
  d.kappa_sq.resize(layer_count);
  const double h = (x_d - x_c) / layer_count;
  for (int j = 0; j < layer_count; ++j)
    d.kappa_sq[j] = p.kappa_sq(x_c + (j + 0.5) * h, energy);
  return d;
}

Discretization discretize(const PotentialScan& scan, double energy,
                          int layer_count) {
  Truncation tr = scan.truncate(energy);
  Discretization d =
      build_layers(scan.potential(), energy, tr.x_c, tr.x_d, layer_count);
  try {
    d.turning_points = scan.turning_points(energy);
  } catch (const NoTurningPoints&) {
    d.turning_points.clear();
  }
  return d;
}

}  // namespace qaction
