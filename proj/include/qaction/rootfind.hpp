#pragma once

#include <functional>
#include <vector>

namespace qaction {

struct Bracket {
  double lo = 0, hi = 0;
  double f_lo = 0, f_hi = 0;
};

/// Scan f on a uniform grid over [a, b] and collect every sign-change bracket.
std::vector<Bracket> bracket_scan(const std::function<double(double)>& f,
                                  double a, double b, int points);

/// Safeguarded secant/bisection hybrid on a sign-change bracket.
/// Stops when |f| <= ftol or the bracket width falls below
/// xtol_rel * max(1, |x|). Deterministic; at most max_iter iterations.
double solve_bracketed(const std::function<double(double)>& f, Bracket br,
                       double xtol_rel = 1e-14, double ftol = 0.0,
                       int max_iter = 200);

/// Plain bisection to a target relative width. Requires opposite signs.
double bisect(const std::function<double(double)>& f, double lo, double hi,
              double xtol_rel = 1e-12, int max_iter = 200);

}  // namespace qaction
