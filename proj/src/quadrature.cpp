#include "qaction/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "qaction/errors.hpp"

namespace qaction {
namespace {

// Kronrod-15 abscissae on [0,1] half-interval, with K15 weights; the odd
// entries (indices 1,3,...) are the embedded Gauss-7 points.
constexpr double kx[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};
constexpr double kw[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
constexpr double gw[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct GkResult {
  double integral;
  double error;
};

GkResult gk15(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double resk = 0, resg = 0;
  for (int i = 0; i < 8; ++i) {
    if (i == 7) {
      double fc = f(c);
      resk += kw[7] * fc;
      resg += gw[3] * fc;
      break;
    }
    double f1 = f(c - h * kx[i]);
    double f2 = f(c + h * kx[i]);
    resk += kw[i] * (f1 + f2);
    if (i % 2 == 1) resg += gw[i / 2] * (f1 + f2);
  }
  double integral = resk * h;
  double err = std::fabs((resk - resg) * h);
  return {integral, err};
}

double adaptive(const std::function<double(double)>& f, double a, double b,
                double rel_tol, double abs_tol) {
  if (a == b) return 0.0;
  struct Seg {
    double a, b, integral, error;
  };
  GkResult whole = gk15(f, a, b);
  std::vector<Seg> segs{{a, b, whole.integral, whole.error}};
  double total = whole.integral;
  double total_err = whole.error;
  const int max_segs = 4000;

  while (total_err > abs_tol + rel_tol * std::fabs(total) &&
         static_cast<int>(segs.size()) < max_segs) {
    // Split the segment with the largest error.
    std::size_t worst = 0;
    for (std::size_t i = 1; i < segs.size(); ++i)
      if (segs[i].error > segs[worst].error) worst = i;
    Seg s = segs[worst];
    double mid = 0.5 * (s.a + s.b);
    if (mid <= s.a || mid >= s.b) break;  // interval exhausted in doubles
    GkResult left = gk15(f, s.a, mid);
    GkResult right = gk15(f, mid, s.b);
    total += left.integral + right.integral - s.integral;
    total_err += left.error + right.error - s.error;
    segs[worst] = {s.a, mid, left.integral, left.error};
    segs.push_back({mid, s.b, right.integral, right.error});
  }
  return total;
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol, double abs_tol) {
  return adaptive(f, a, b, rel_tol, abs_tol);
}

double integrate_segmented(const std::function<double(double)>& f, double a,
                           double b, const std::vector<double>& breakpoints,
                           double rel_tol, double abs_tol) {
  std::vector<double> cuts{a};
  for (double c : breakpoints)
    if (c > a && c < b) cuts.push_back(c);
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  double total = 0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    total += adaptive(f, cuts[i], cuts[i + 1], rel_tol, abs_tol);
  return total;
}

double integrate_sqrt_endpoints(const std::function<double(double)>& f,
                                double a, double b, bool singular_left,
                                bool singular_right,
                                const std::vector<double>& breakpoints,
                                double rel_tol, double abs_tol) {
  if (!(b > a)) return 0.0;
  double mid = 0.5 * (a + b);
  // Keep interior kinks away from the substitution halves when possible.
  std::vector<double> inner;
  for (double c : breakpoints)
    if (c > a && c < b) inner.push_back(c);

  double total = 0;
  if (singular_left) {
    double t1 = std::sqrt(mid - a);
    auto g = [&](double t) { return 2.0 * t * f(a + t * t); };
    total += adaptive(g, 0.0, t1, rel_tol, abs_tol);
  } else {
    total += integrate_segmented(f, a, mid, inner, rel_tol, abs_tol);
  }
  if (singular_right) {
    double t1 = std::sqrt(b - mid);
    auto g = [&](double t) { return 2.0 * t * f(b - t * t); };
    total += adaptive(g, 0.0, t1, rel_tol, abs_tol);
  } else {
    total += integrate_segmented(f, mid, b, inner, rel_tol, abs_tol);
  }
  // The substituted halves still contain any interior kinks; the adaptive
  // subdivision resolves those, the explicit split above is an optimization
  // for the untransformed halves only.
  return total;
}

}  // namespace qaction
