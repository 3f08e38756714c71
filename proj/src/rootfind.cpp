#include "qaction/rootfind.hpp"

#include <cmath>
#include <cstdlib>

#include "qaction/errors.hpp"

namespace qaction {

std::vector<Bracket> bracket_scan(const std::function<double(double)>& f,
                                  double a, double b, int points) {
  std::vector<Bracket> out;
  if (points < 2) return out;
  double x_prev = a;
  double f_prev = f(a);
  for (int i = 1; i < points; ++i) {
    double x = a + (b - a) * static_cast<double>(i) / (points - 1);
    double fx = f(x);
    if ((f_prev < 0 && fx >= 0) || (f_prev > 0 && fx <= 0) ||
        (f_prev == 0 && fx != 0)) {
      out.push_back({x_prev, x, f_prev, fx});
    }
    x_prev = x;
    f_prev = fx;
  }
  return out;
}

double solve_bracketed(const std::function<double(double)>& f, Bracket br,
                       double xtol_rel, double ftol, int max_iter) {
  double lo = br.lo, hi = br.hi, flo = br.f_lo, fhi = br.f_hi;
  if (flo == 0) return lo;
  if (fhi == 0) return hi;
  if ((flo < 0) == (fhi < 0))
    throw BracketTooNarrow("solve_bracketed: no sign change in bracket");

  // Secant steps with a bisection safeguard: if the bracket failed to shrink
  // by at least half over two consecutive steps, force a midpoint split.
  double best = std::fabs(flo) < std::fabs(fhi) ? lo : hi;
  double width_checkpoint = hi - lo;
  int since_checkpoint = 0;
  for (int it = 0; it < max_iter; ++it) {
    double mid = 0.5 * (lo + hi);
    double tol_x = xtol_rel * std::fmax(1.0, std::fabs(mid));
    if (hi - lo <= tol_x) break;

    double x = hi - fhi * (hi - lo) / (fhi - flo);
    bool force_bisect = since_checkpoint >= 2 && (hi - lo) > 0.5 * width_checkpoint;
    if (!std::isfinite(x) || x <= lo + 0.01 * tol_x || x >= hi - 0.01 * tol_x ||
        force_bisect)
      x = mid;
    if (since_checkpoint >= 2) {
      width_checkpoint = hi - lo;
      since_checkpoint = 0;
    }
    ++since_checkpoint;

    double fx = f(x);
    if (ftol > 0 && std::fabs(fx) <= ftol) return x;
    if (fx == 0) return x;
    if ((fx < 0) == (flo < 0)) {
      lo = x;
      flo = fx;
    } else {
      hi = x;
      fhi = fx;
    }
    best = std::fabs(flo) < std::fabs(fhi) ? lo : hi;
  }
  return best;
}

double bisect(const std::function<double(double)>& f, double lo, double hi,
              double xtol_rel, int max_iter) {
  double flo = f(lo), fhi = f(hi);
  if (flo == 0) return lo;
  if (fhi == 0) return hi;
  if ((flo < 0) == (fhi < 0))
    throw BracketTooNarrow("bisect: endpoints have the same sign");
  for (int it = 0; it < max_iter; ++it) {
    double mid = 0.5 * (lo + hi);
    double fm = f(mid);
    if (fm == 0) return mid;
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
    if (hi - lo <= xtol_rel * std::fmax(1.0, std::fabs(mid))) break;
  }
  return 0.5 * (lo + hi);
}

}  // namespace qaction
