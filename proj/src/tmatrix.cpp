#include "qaction/tmatrix.hpp"

#include <cmath>
#include <limits>

#include "qaction/errors.hpp"

namespace qaction {

namespace {

constexpr double kHalfPi = 1.5707963267948966;
constexpr double kPi = 3.141592653589793;
constexpr double kHugeP = 1e300;
constexpr double kZeroKappa = 1e-300;

struct LayerStep {
  double p = 0;
  int poles = 0;  // nodes inside this layer
};

// Right-to-left update across one layer; p is -psi'/psi at the right edge.
// Allowed layers evolve the local angle arctan(P/kappa) linearly by -kappa*h,
// which carries the recursion through poles of P exactly; hyperbolic layers
// use the tanh Moebius form, stable for arbitrarily large alpha*h.
LayerStep step_backward(double ks, double h, double p) {
  LayerStep out;
  if (ks > kZeroKappa) {
    double k = std::sqrt(ks);
    if (k * h >= kHalfPi)
      throw StepTooCoarse("layer phase increment reached pi/2");
    double th = std::atan(p / k) - k * h;
    int crossed = -static_cast<int>(std::floor((th + kHalfPi) / kPi));
    out.poles = crossed;
    out.p = k * std::tan(th + crossed * kPi);
  } else if (ks < -kZeroKappa) {
    double a = std::sqrt(-ks);
    double t = std::tanh(a * h);
    double denom = a + p * t;
    out.poles = denom < 0 ? 1 : 0;
    out.p = a * (p + a * t) / denom;
  } else {
    double denom = 1.0 + h * p;
    out.poles = denom < 0 ? 1 : 0;
    out.p = p / denom;
  }
  if (!std::isfinite(out.p)) out.p = std::copysign(kHugeP, out.p);
  return out;
}

// Left-to-right update (the inverse map).
LayerStep step_forward(double ks, double h, double p) {
  LayerStep out;
  if (ks > kZeroKappa) {
    double k = std::sqrt(ks);
    if (k * h >= kHalfPi)
      throw StepTooCoarse("layer phase increment reached pi/2");
    double th = std::atan(p / k) + k * h;
    int crossed = static_cast<int>(std::floor((th + kHalfPi) / kPi));
    out.poles = crossed;
    out.p = k * std::tan(th - crossed * kPi);
  } else if (ks < -kZeroKappa) {
    double a = std::sqrt(-ks);
    double t = std::tanh(a * h);
    double denom = a - p * t;
    out.poles = denom < 0 ? 1 : 0;
    out.p = a * (p - a * t) / denom;
  } else {
    double denom = 1.0 - h * p;
    out.poles = denom < 0 ? 1 : 0;
    out.p = p / denom;
  }
  if (!std::isfinite(out.p)) out.p = std::copysign(kHugeP, out.p);
  return out;
}

}  // namespace

LayerMatrix layer_matrix(double kappa_sq, double h) {
  if (h < 0) throw InvalidParam("layer_matrix: h must be nonnegative");
  LayerMatrix m;
  if (kappa_sq > kZeroKappa) {
    double k = std::sqrt(kappa_sq);
    double c = std::cos(k * h), s = std::sin(k * h);
    m.m11 = c;
    m.m12 = -s / k;
    m.m21 = k * s;
    m.m22 = c;
  } else if (kappa_sq < -kZeroKappa) {
    double a = std::sqrt(-kappa_sq);
    double c = std::cosh(a * h), s = std::sinh(a * h);
    m.m11 = c;
    m.m12 = -s / a;
    m.m21 = -a * s;
    m.m22 = c;
  } else {
    m.m11 = 1;
    m.m12 = -h;
    m.m21 = 0;
    m.m22 = 1;
  }
  return m;
}

double det_error_ulp(const LayerMatrix& m) {
  double scale = std::fmax(1.0, std::fabs(m.m11 * m.m22) +
                                    std::fabs(m.m12 * m.m21));
  return std::fabs(m.det() - 1.0) /
         (scale * std::numeric_limits<double>::epsilon());
}

namespace {

PhaseTrace run_backward_trace(const Discretization& d, double p_start) {
  const int n = d.layer_count;
  const double h = d.h();
  PhaseTrace tr;
  tr.boundaries.resize(n + 1);
  tr.delta_partial.reserve(n);

  // Phase increment attributed to each layer and to each interior boundary,
  // collected right-to-left and prefix-summed from the left afterwards so the
  // recorded theta grows with x.
  std::vector<double> layer_inc(n, 0.0);
  std::vector<double> boundary_inc(n + 1, 0.0);

  double p = p_start;
  int poles = 0;
  double kappa_sum = 0;
  double delta = 0;

  tr.boundaries[n] = {d.boundary(n), p, 0.0};
  for (int j = n - 1; j >= 0; --j) {
    double ks = d.kappa_sq[j];
    if (j + 1 < n && ks > 0 && d.kappa_sq[j + 1] > 0) {
      // Boundary rescaling, counted in the rightward phase convention:
      // arctan(P/kappa_right) - arctan(P/kappa_left) at the boundary.
      double inc = std::atan(p / std::sqrt(d.kappa_sq[j + 1])) -
                   std::atan(p / std::sqrt(ks));
      delta += inc;
      tr.delta_partial.push_back(delta);
      boundary_inc[j + 1] = inc;
    }
    LayerStep st = step_backward(ks, h, p);
    p = st.p;
    poles += st.poles;
    if (ks > 0) {
      kappa_sum += std::sqrt(ks) * h;
      layer_inc[j] = std::sqrt(ks) * h;  // pole passages are inside this sweep
    } else {
      layer_inc[j] = st.poles * kPi;
    }
    tr.boundaries[j].x = d.boundary(j);
    tr.boundaries[j].p = p;
  }

  double acc = 0;
  tr.boundaries[0].theta = 0;
  for (int j = 1; j <= n; ++j) {
    acc += layer_inc[j - 1] + boundary_inc[j];
    tr.boundaries[j].theta = acc;
  }

  tr.poles = poles;
  tr.kappa_h_sum = kappa_sum;
  tr.delta = delta;
  tr.total_phase = kappa_sum + delta;
  return tr;
}

}  // namespace

PhaseTrace propagate_logderivative(const Discretization& d, double p_d) {
  if (!(p_d > 0))
    throw InvalidParam("propagate_logderivative: P_D must be positive "
                       "(decaying right tail)");
  return run_backward_trace(d, p_d);
}

PhaseTrace propagate_from_right_wall(const Discretization& d) {
  return run_backward_trace(d, kHugeP);
}

double discrete_delta(const PhaseTrace& trace, const Discretization&) {
  return trace.delta;
}

SweepEnd sweep_backward(const Discretization& d, double p_d, bool right_wall,
                        int m_boundary) {
  SweepEnd end;
  end.p = right_wall ? kHugeP : p_d;
  for (int j = d.layer_count - 1; j >= m_boundary; --j) {
    LayerStep st = step_backward(d.kappa_sq[j], d.h(), end.p);
    end.p = st.p;
    end.poles += st.poles;
  }
  return end;
}

SweepEnd sweep_forward(const Discretization& d, double p_c, bool left_wall,
                       int m_boundary) {
  SweepEnd end;
  end.p = left_wall ? -kHugeP : p_c;
  for (int j = 0; j < m_boundary; ++j) {
    LayerStep st = step_forward(d.kappa_sq[j], d.h(), end.p);
    end.p = st.p;
    end.poles += st.poles;
  }
  return end;
}

double discrete_action(const Potential& p, const Discretization& d,
                       double x_match) {
  const double h = d.h();
  const int n = d.layer_count;
  int m = static_cast<int>(std::lround((x_match - d.x_c) / h));
  if (m < 1) m = 1;
  if (m > n - 1) m = n - 1;

  // Snap to a nearby boundary that is classically allowed at this energy.
  double kappa_m = 0;
  int m_used = -1;
  for (int off = 0; off <= 8 && m_used < 0; ++off) {
    for (int sgn : {+1, -1}) {
      int cand = m + sgn * off;
      if (cand < 1 || cand > n - 1) continue;
      double ks = p.kappa_sq(d.boundary(cand), d.e);
      if (ks > 0) {
        kappa_m = std::sqrt(ks);
        m_used = cand;
        break;
      }
      if (off == 0) break;
    }
  }
  if (m_used < 0)
    throw NoTurningPoints("discrete_action: no allowed boundary near the "
                          "matching point");

  const bool left_wall = p.has_left_wall();
  const bool right_wall = p.has_right_wall();

  double p_c = 0, p_d = 0;
  if (!left_wall) {
    double a2 = -p.kappa_sq(d.x_c, d.e);
    p_c = a2 > 0 ? -std::sqrt(a2) : 0.0;
  }
  if (!right_wall) {
    double a2 = -p.kappa_sq(d.x_d, d.e);
    p_d = a2 > 0 ? std::sqrt(a2) : 1e-12;
  }

  SweepEnd fwd = sweep_forward(d, p_c, left_wall, m_used);
  SweepEnd bwd = sweep_backward(d, p_d, right_wall, m_used);

  double jpi = (fwd.poles + bwd.poles) * kPi + kPi +
               std::atan(fwd.p / kappa_m) - std::atan(bwd.p / kappa_m);
  return jpi / kPi;
}

}  // namespace qaction
