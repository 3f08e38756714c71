#pragma once

#include <vector>

#include "qaction/potential.hpp"

namespace qaction {

/// Tunables shared by turning-point location and truncation.
struct DiscretizeOptions {
  double decay_budget = 20.0;  // required integral of alpha beyond the span
  int scan_points = 10000;     // sign-change scan resolution
  double tol_root = 1e-12;     // turning-point refinement, relative
  double origin_epsilon = 1e-8;  // wall regularization for singular origins
};

/// Uniform layer grid plus per-layer squared wavenumbers for a trial energy.
struct Discretization {
  double x_c = 0;
  double x_d = 0;
  int layer_count = 0;
  std::vector<double> kappa_sq;       // at layer midpoints, may be negative
  std::vector<double> turning_points; // sorted; may be empty for wall domains
  double e = 0;

  double h() const { return (x_d - x_c) / layer_count; }
  double midpoint(int j) const { return x_c + (j + 0.5) * h(); }
  double boundary(int j) const { return x_c + j * h(); }
};

/// Positions where V_eff(x) = E inside the bracket, each refined by bisection.
/// Tangencies (V-E touching zero without a sign change) are dropped.
std::vector<double> locate_turning_points(const Potential& p, double energy,
                                          double bracket_lo, double bracket_hi,
                                          const DiscretizeOptions& opts = {});

/// Classically allowed span boundaries for phase accumulation: the outermost
/// turning points, replaced by wall positions on wall-bounded sides.
struct AllowedSpan {
  double lo = 0, hi = 0;
  bool wall_lo = false, wall_hi = false;
};

/// Truncation points: walls are hard truncations; soft sides extend until the
/// accumulated decay integral of alpha = sqrt(2m(V-E))/hbar reaches the budget.
struct Truncation {
  double x_c = 0, x_d = 0;
};

/// Scans the potential once and caches what repeated per-energy calls need.
/// Immutable after construction.
class PotentialScan {
 public:
  PotentialScan(const Potential& p, const DiscretizeOptions& opts = {});

  const Potential& potential() const { return *p_; }
  const DiscretizeOptions& options() const { return opts_; }

  /// Domain edge used as the left end of scans: wall position (shifted
  /// by origin_epsilon when V is singular there) or a tiny radius for
  /// radial kinds; -infinity proxy (a large window) for full-line kinds.
  double scan_lo() const { return scan_lo_; }
  double scan_hi() const { return scan_hi_; }

  double v_min() const { return v_min_; }
  double x_at_v_min() const { return x_min_; }
  double dissociation() const { return p_->dissociation_limit; }

  std::vector<double> turning_points(double energy) const;
  AllowedSpan allowed_span(double energy) const;
  Truncation truncate(double energy) const;

  /// E-independent matching position for two-sided phase assembly:
  /// the potential minimum, or a point inside the lowest allowed span when
  /// the minimum hugs a wall.
  double matching_point(double e_lowest) const;

 private:
  const Potential* p_;
  DiscretizeOptions opts_;
  double scan_lo_ = 0, scan_hi_ = 0;
  double v_min_ = 0, x_min_ = 0;
  std::vector<double> grid_x_, grid_v_;
};

/// Builds the uniform layer grid with kappa_sq sampled at layer midpoints.
Discretization build_layers(const Potential& p, double energy, double x_c,
                            double x_d, int layer_count);

/// Convenience: full per-energy discretization (turning points, truncation,
/// layers) as the transfer-matrix engine consumes it.
Discretization discretize(const PotentialScan& scan, double energy,
                          int layer_count);

}  // namespace qaction
