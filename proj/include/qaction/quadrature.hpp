#pragma once

#include <functional>
#include <vector>

namespace qaction {

/// Adaptive Gauss-Kronrod (G7/K15) integration of f over [a, b].
/// Subdivides until the local error estimate meets abs_tol + rel_tol*|I|.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol = 1e-12, double abs_tol = 1e-14);

/// Same, but split at the given interior breakpoints first (kinks).
double integrate_segmented(const std::function<double(double)>& f, double a,
                           double b, const std::vector<double>& breakpoints,
                           double rel_tol = 1e-12, double abs_tol = 1e-14);

/// Integrate f with inverse-square-root-integrable endpoint behavior,
/// f ~ c/sqrt(x-a) or f ~ c*sqrt(x-a) near a (and mirrored at b).
/// Maps x = a + t^2 / x = b - t^2 so the transformed integrand is smooth.
/// Used for the action integral, whose integrand vanishes like sqrt at
/// turning points and may diverge like 1/sqrt at a Coulomb origin.
double integrate_sqrt_endpoints(const std::function<double(double)>& f,
                                double a, double b, bool singular_left,
                                bool singular_right,
                                const std::vector<double>& breakpoints = {},
                                double rel_tol = 1e-12, double abs_tol = 1e-14);

}  // namespace qaction
