#pragma once

#include <vector>

#include "qaction/discretize.hpp"

namespace qaction {

/// One layer's 2x2 transfer matrix (unimodular for any real kappa_sq).
struct LayerMatrix {
  double m11 = 1, m12 = 0, m21 = 0, m22 = 1;
  double det() const { return m11 * m22 - m12 * m21; }
};

/// Transfer matrix across one layer of width h: the trigonometric form for
/// kappa_sq > 0, the hyperbolic continuation for kappa_sq < 0, and the
/// [[1, -h], [0, 1]] limit at zero. Maps (psi, psi') at the layer's right
/// edge to the left edge.
LayerMatrix layer_matrix(double kappa_sq, double h);

/// |det - 1| in units of the rounding error of the determinant products
/// (cosh^2 - sinh^2 cancels, so the honest ulp is at the product magnitude).
double det_error_ulp(const LayerMatrix& m);

/// Per-boundary record of the backward log-derivative recursion.
struct PhaseRecord {
  double x = 0;
  double p = 0;       // log-derivative -psi'/psi
  double theta = 0;   // unwrapped phase accumulated so far (monotone counter)
};

/// Result of the backward recursion from x_D to x_C.
struct PhaseTrace {
  std::vector<PhaseRecord> boundaries;  // index j = boundary at x_c + j*h
  std::vector<double> delta_partial;    // running boundary-rescaling sums
  double kappa_h_sum = 0;   // sum of kappa_j * h over allowed layers
  double delta = 0;         // final boundary-rescaling sum
  double total_phase = 0;   // kappa_h_sum + delta
  int poles = 0;            // wavefunction nodes crossed by the sweep
};

/// Backward recursion P_j = kappa_j tan(arctan(P_{j+1}/kappa_j) - kappa_j h)
/// with hyperbolic layers handled in tanh form, starting from P(x_D) = p_d.
/// p_d > 0 is the decaying right-tail condition; pass +infinity semantics via
/// a wall by using propagate_from_wall instead. Throws StepTooCoarse when an
/// allowed layer's phase increment reaches pi/2.
PhaseTrace propagate_logderivative(const Discretization& d, double p_d);

/// Same recursion started at a hard right wall (psi(x_D) = 0).
PhaseTrace propagate_from_right_wall(const Discretization& d);

/// Boundary-rescaling sum of the trace (the discrete scattering phase shift).
double discrete_delta(const PhaseTrace& trace, const Discretization& d);

/// One-directional sweep state used by the matched eigencondition.
struct SweepEnd {
  double p = 0;   // log-derivative at the requested boundary
  int poles = 0;  // nodes crossed between the start and that boundary
};

/// Backward sweep stopping at boundary index m (0..layer_count).
SweepEnd sweep_backward(const Discretization& d, double p_d, bool right_wall,
                        int m_boundary);

/// Forward sweep from x_C (P = p_c, or a wall) stopping at boundary index m.
SweepEnd sweep_forward(const Discretization& d, double p_c, bool left_wall,
                       int m_boundary);

/// Matched action value J(E) on the discrete grid: two sweeps meeting at the
/// boundary nearest x_match, combined as
///   J*pi = (poles_fwd + poles_bwd)*pi + pi
///        + arctan(P_fwd/kappa_m) - arctan(P_bwd/kappa_m).
double discrete_action(const Potential& p, const Discretization& d,
                       double x_match);

}  // namespace qaction
