#include "qaction/oracles.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "qaction/errors.hpp"
#include "qaction/quadrature.hpp"
#include "qaction/rootfind.hpp"

#ifndef QACTION_DATA_DIR
#define QACTION_DATA_DIR "data"
#endif

namespace qaction {

namespace {

constexpr double kPi = 3.141592653589793;

// Count of strict sign changes of the forward-shot Numerov solution.
// The count increments exactly when E crosses a discrete Dirichlet
// eigenvalue of the grid, so bisection on it converges to that eigenvalue.
int numerov_node_count(const Potential& p, double e, double x_c, double x_d,
                       int points) {
  const double h = (x_d - x_c) / points;
  const double h2 = h * h;
  const double f = 2.0 * p.mass / (p.hbar * p.hbar);

  auto ks = [&](int j) { return f * (e - p.eval(x_c + j * h)); };

  double y_prev = 0.0;
  double y = h;  // arbitrary small start slope
  double k_prev = 0, k_cur = 0;
  // x_c may sit on a wall where V is undefined; nudge the first sample.
  try {
    k_prev = ks(0);
  } catch (const DomainError&) {
    k_prev = f * (e - p.eval(x_c + 1e-3 * h));
  }
  k_cur = ks(1);

  int nodes = 0;
  int last_sign = y > 0 ? 1 : -1;
  for (int j = 1; j < points; ++j) {
    double k_next = ks(j + 1);
    double y_next =
        (2.0 * (1.0 - 5.0 * h2 * k_cur / 12.0) * y -
         (1.0 + h2 * k_prev / 12.0) * y_prev) /
        (1.0 + h2 * k_next / 12.0);
    if (std::fabs(y_next) > 1e100) {
      y_next *= 1e-100;
      y *= 1e-100;
    }
    int s = y_next > 0 ? 1 : (y_next < 0 ? -1 : 0);
    if (s != 0) {
      if (s != last_sign) ++nodes;
      last_sign = s;
    }
    y_prev = y;
    y = y_next;
    k_prev = k_cur;
    k_cur = k_next;
  }
  return nodes;
}

double numerov_solve_on_grid(const Potential& p, int n, double e_lo,
                             double e_hi, double x_c, double x_d, int points) {
  auto count = [&](double e) {
    return numerov_node_count(p, e, x_c, x_d, points);
  };
  if (count(e_lo) > n)
    throw NoSuchBoundState("numerov: node count already exceeds n at the "
                           "bottom of the window");
  if (count(e_hi) <= n)
    throw NoSuchBoundState("numerov: node count never exceeds n");
  double lo = e_lo, hi = e_hi;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (count(mid) <= n)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

// Points so the fastest oscillation is well resolved: kappa*h ~ 1/80.
int auto_points(const PotentialScan& scan, double e_top) {
  AllowedSpan span = scan.allowed_span(e_top);
  const Potential& p = scan.potential();
  double kmax = 0;
  for (int i = 0; i < 17; ++i) {
    double x = span.lo + (span.hi - span.lo) * (i + 0.5) / 17.0;
    kmax = std::fmax(kmax, p.kappa_sq(x, e_top));
  }
  Truncation tr = scan.truncate(e_top);
  double w = tr.x_d - tr.x_c;
  int n = static_cast<int>(std::ceil(w * std::sqrt(std::fmax(kmax, 1e-12)) * 80.0));
  return std::clamp(n, 2000, 120000);
}

int count_at(const Potential& p, const PotentialScan& scan, double e) {
  Truncation tr = scan.truncate(e);
  return numerov_node_count(p, e, tr.x_c, tr.x_d, auto_points(scan, e));
}

double numerov_at_epsilon(const Potential& p, int n,
                          const NumerovOptions& opts) {
  PotentialScan scan(p, opts.disc);
  double vmin = scan.v_min();

  // Search floor: just above the minimum, or probed downward when the
  // minimum is a singular wall value.
  double e_lo;
  if (!p.singular_origin && vmin > -1e6) {
    e_lo = vmin + 1e-7 * std::fmax(1.0, std::fabs(vmin));
  } else {
    double d = p.confining() ? 0.0 : p.dissociation_limit;
    double depth = std::fmax(1.0, std::fabs(d));
    e_lo = d - depth;
    for (int k = 0; k < 60 && count_at(p, scan, e_lo) > 0; ++k) {
      depth *= 2;
      e_lo = d - depth;
    }
  }

  // Upper window edge: grow (confining) or creep toward the threshold with
  // per-energy domains so the grid never spans an absurd tail.
  double e_hi;
  if (p.confining()) {
    e_hi = vmin + std::fmax(1.0, std::fabs(vmin));
    int guard = 0;
    while (count_at(p, scan, e_hi) <= n) {
      e_hi = vmin + 2.0 * (e_hi - vmin);
      if (++guard > 120)
        throw NoSuchBoundState("numerov: node count never exceeds n");
    }
  } else {
    double d = scan.dissociation();
    e_hi = d - 0.25 * (d - e_lo);
    int guard = 0;
    while (count_at(p, scan, e_hi) <= n) {
      e_hi = d - 0.25 * (d - e_hi);
      if (++guard > 40 || (d - e_hi) < 1e-9 * std::fmax(1.0, std::fabs(d)))
        throw NoSuchBoundState("numerov: potential holds fewer bound states");
    }
  }

  // Freeze the domain at the bracket top, then refine by doubling until the
  // pair difference meets tol or starts growing (the rounding floor of the
  // three-term recursion; past it finer grids only add noise).
  Truncation tr = scan.truncate(e_hi);
  int points = opts.base_points > 0 ? opts.base_points : auto_points(scan, e_hi);
  double prev = numerov_solve_on_grid(p, n, e_lo, e_hi, tr.x_c, tr.x_d, points);
  double best_extrap = NAN;
  double best_diff = INFINITY;
  for (int k = 0; k < opts.max_doublings; ++k) {
    points *= 2;
    double e_k = numerov_solve_on_grid(p, n, e_lo, e_hi, tr.x_c, tr.x_d, points);
    double diff = std::fabs(e_k - prev);
    if (diff < best_diff) {
      best_diff = diff;
      best_extrap = (16.0 * e_k - prev) / 15.0;
    }
    if (diff < opts.tol) return best_extrap;
    if (diff > 4.0 * best_diff) break;  // noise floor reached
    prev = e_k;
  }
  if (std::isnan(best_extrap))
    throw NonConvergence("numerov: grid doubling did not converge");
  return best_extrap;
}

}  // namespace

double numerov_eigenvalue(const Potential& p, int n,
                          const NumerovOptions& opts) {
  if (n < 0) throw InvalidParam("numerov_eigenvalue: n must be nonnegative");
  if (!p.singular_origin) return numerov_at_epsilon(p, n, opts);
  NumerovOptions o2 = opts;
  o2.disc.origin_epsilon = opts.disc.origin_epsilon / 10.0;
  double e1 = numerov_at_epsilon(p, n, opts);
  double e2 = numerov_at_epsilon(p, n, o2);
  return (10.0 * e2 - e1) / 9.0;
}

// ---------------------------------------------------------------------------

double wkb_eigenvalue(const Potential& p, int n, bool langer,
                      const DiscretizeOptions& opts) {
  Potential mod = p;
  if (langer) {
    double l = p.angular_momentum_l ? *p.angular_momentum_l : 0;
    mod.centrifugal_override = (l + 0.5) * (l + 0.5);
    // The Langer barrier replaces the origin wall as the inner boundary.
    if (mod.wall_left && *mod.wall_left == 0.0) {
      mod.wall_left.reset();
      mod.singular_origin = false;
      mod.domain_kind = DomainKind::half_line_radial;
    }
  }
  PotentialScan scan(mod, opts);
  double vmin = scan.v_min();
  double e_lo = vmin + 1e-7 * std::fmax(1.0, std::fabs(vmin));

  auto act = [&](double e) {
    AllowedSpan span = scan.allowed_span(e);
    auto kappa = [&](double x) {
      double ks = mod.kappa_sq(x, e);
      return ks > 0 ? std::sqrt(ks) : 0.0;
    };
    bool sing_left = !span.wall_lo || mod.singular_origin;
    bool sing_right = !span.wall_hi;
    return integrate_sqrt_endpoints(kappa, span.lo, span.hi, sing_left,
                                    sing_right, mod.breakpoints, 1e-12, 1e-14);
  };
  double target = (n + 0.5) * kPi;
  auto g = [&](double e) { return act(e) - target; };

  double e_hi;
  if (mod.confining()) {
    e_hi = vmin + std::fmax(1.0, std::fabs(vmin));
    for (int k = 0; k < 200 && g(e_hi) < 0; ++k)
      e_hi = vmin + 2.0 * (e_hi - vmin);
  } else {
    double d = scan.dissociation();
    e_hi = d - 1e-9 * std::fmax(1.0, std::fabs(d));
  }
  double g_lo = g(e_lo), g_hi = g(e_hi);
  if (g_lo >= 0 || g_hi < 0)
    throw NoSuchBoundState("wkb: no root of the quantization condition in "
                           "the bound window");
  return solve_bracketed(g, {e_lo, e_hi, g_lo, g_hi}, 1e-14, 0.0, 240);
}

// ---------------------------------------------------------------------------

bool has_analytic_spectrum(const Potential& p) {
  switch (p.kind) {
    case BuiltinTag::infinite_well:
    case BuiltinTag::harmonic_1d:
    case BuiltinTag::harmonic_radial:
    case BuiltinTag::coulomb_1d:
    case BuiltinTag::coulomb_radial:
      return true;
    default:
      return false;
  }
}

double analytic_eigenvalue(const Potential& p, int n) {
  if (n < 0) throw InvalidParam("analytic_eigenvalue: n must be nonnegative");
  const double m = p.mass, hb = p.hbar;
  const int l = p.angular_momentum_l ? *p.angular_momentum_l : 0;
  switch (p.kind) {
    case BuiltinTag::infinite_well: {
      double L = p.params.count("L") ? p.params.at("L") : 1.0;
      double e0 = kPi * kPi * hb * hb / (2.0 * m * L * L);
      return (n + 1.0) * (n + 1.0) * e0;
    }
    case BuiltinTag::harmonic_1d:
      return hb * (n + 0.5) / std::sqrt(m);
    case BuiltinTag::harmonic_radial:
      return hb * (2.0 * n + l + 1.5) / std::sqrt(m);
    case BuiltinTag::coulomb_1d: {
      double nn = n + 1;  // published counting starts at 1 for this spectrum
      return -m / (2.0 * hb * hb * nn * nn);
    }
    case BuiltinTag::coulomb_radial: {
      double big_n = l + n + 1;
      return -m / (2.0 * hb * hb * big_n * big_n);
    }
    default:
      throw NoCatalogEntry("analytic_eigenvalue: no closed form for '" +
                           p.name + "'");
  }
}

// ---------------------------------------------------------------------------
// Fixtures
// ---------------------------------------------------------------------------

namespace {

std::string fixtures_path() {
  if (const char* env = std::getenv("QACTION_FIXTURES"))
    return std::string(env) + "/paper_tables.txt";
  return std::string(QACTION_DATA_DIR) + "/paper_tables.txt";
}

}  // namespace

std::vector<TableFixture> load_fixtures() {
  std::string path = fixtures_path();
  std::ifstream in(path);
  if (!in) throw FixtureError("cannot open fixture file: " + path);

  std::vector<TableFixture> tables;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    std::string kind;
    ss >> kind;
    if (kind == "table") {
      TableFixture t;
      ss >> t.id;
      std::string field;
      while (ss >> field) {
        auto eq = field.find('=');
        if (eq == std::string::npos) continue;
        std::string key = field.substr(0, eq), val = field.substr(eq + 1);
        if (key == "third") t.third_label = val;
        if (key == "potential") t.potential_desc = val;
      }
      tables.push_back(t);
    } else if (kind == "row") {
      std::string id;
      TableRow row;
      ss >> id >> row.n;
      std::string field;
      while (ss >> field) {
        if (field == "anomaly") {
          row.anomaly = true;
          continue;
        }
        auto eq = field.find('=');
        if (eq == std::string::npos)
          throw FixtureError("malformed fixture field: " + field);
        std::string key = field.substr(0, eq), val = field.substr(eq + 1);
        if (key == "exact") {
          row.exact_str = val;
          row.exact = std::strtod(val.c_str(), nullptr);
        } else if (key == "present") {
          row.present_str = val;
          row.present = std::strtod(val.c_str(), nullptr);
        } else if (key == "third") {
          row.third_str = val;
          row.third = std::strtod(val.c_str(), nullptr);
        }
      }
      bool placed = false;
      for (auto& t : tables)
        if (t.id == id) {
          t.rows.push_back(row);
          placed = true;
        }
      if (!placed) throw FixtureError("fixture row before its table: " + id);
    } else {
      throw FixtureError("unknown fixture record: " + kind);
    }
  }
  return tables;
}

const TableFixture& find_fixture(const std::vector<TableFixture>& all,
                                 const std::string& id) {
  for (const auto& t : all)
    if (t.id == id) return t;
  throw FixtureError("unknown table: " + id);
}

}  // namespace qaction
