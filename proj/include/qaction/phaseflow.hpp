#pragma once

#include <vector>

#include "qaction/discretize.hpp"

namespace qaction {

/// Right side of the Riccati equation dP/dx = kappa_sq + P^2.
inline double riccati_rhs(double p, double kappa_sq) {
  return kappa_sq + p * p;
}

struct PhaseFlowOptions {
  double tol = 1e-10;       // local relative tolerance of the sweep
  double h_max_frac = 1.0 / 200;  // max step as a fraction of the allowed span
  bool record = false;      // keep per-step trace points
};

/// One recorded state of a sweep. The log-derivative representation is used
/// outside the allowed region and the phase representation inside it; both
/// are views of the same continuously integrated variable.
struct RiccatiPoint {
  double x = 0;
  double p = 0;        // -psi'/psi (clamped near poles)
  double phase = 0;    // unwrapped phase accumulated since the sweep start
  double ln_r = 0;     // log amplitude of the Pruefer radius
};

/// One directional sweep of the phase flow.
struct RiccatiTrace {
  double e = 0;
  double scale = 1;        // fixed Pruefer scale s with P = s*tan(phi)
  double x_start = 0, x_end = 0;
  double phi_start = 0, phi_end = 0;
  double lnr_end = 0;
  int poles = 0;           // wavefunction nodes crossed by the sweep
  std::vector<RiccatiPoint> points;
};

/// Two-sided matched phase data for one trial energy.
struct MatchedPhase {
  double e = 0;
  double x_l = 0, x_r = 0;   // allowed span (outermost turning points/walls)
  double x_c = 0, x_d = 0;   // truncation
  double x_m = 0;            // matching position
  double kappa_m = 0;        // kappa at the matching position
  double j = 0;              // matched action J(E)
  double span_phase = 0;     // J*pi, the full phase across the span
  int poles = 0;             // nodes strictly inside, by band count
  RiccatiTrace right;        // sweep x_D -> x_m
  RiccatiTrace left;         // sweep x_C -> x_m
};

/// Integrates the phase flow leftward from d.x_d to d.x_c (the engine's
/// native direction) and records the trace. The initial condition is the
/// decaying-tail value P(x_D) = alpha_D, or the wall limit when x_D is a wall.
RiccatiTrace integrate_phase(const Potential& p, double energy,
                             const Discretization& d,
                             const PhaseFlowOptions& opts = {});

/// Runs both sweeps and assembles the matched action
///   J*pi = (poles_L + poles_R)*pi + pi
///        + arctan(P_L/kappa_m) - arctan(P_R/kappa_m).
MatchedPhase matched_action(const PotentialScan& scan, double energy,
                            double x_match, const PhaseFlowOptions& opts = {});

/// Integral of kappa over the allowed span, with sqrt endpoint handling at
/// soft turning points and at singular origins.
double kappa_integral(const PotentialScan& scan, double energy,
                      double rel_tol = 1e-12);

/// Scattering-led phase shift: the accumulated span phase minus the kappa
/// integral (both over [x_L, x_R]).
double delta_integral(const MatchedPhase& matched, const PotentialScan& scan,
                      double rel_tol = 1e-12);

struct WavefunctionTable {
  std::vector<double> x;
  std::vector<double> psi;     // normalized
  double norm_constant = 1;    // multiplier applied to the raw assembly
  int node_count = 0;          // strict sign changes
};

/// Reconstructs the normalized wavefunction at the given sample positions
/// from a converged matched phase. Throws NotAnEigenvalue when the matched
/// action is not close to an integer.
WavefunctionTable reconstruct_wavefunction(const PotentialScan& scan,
                                           const MatchedPhase& matched,
                                           const std::vector<double>& samples,
                                           const PhaseFlowOptions& opts = {});

/// Uniform samples over the matched truncation window.
std::vector<double> default_samples(const MatchedPhase& matched,
                                    int count = 8193);

}  // namespace qaction
