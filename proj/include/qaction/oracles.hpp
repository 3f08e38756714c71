#pragma once

#include <string>
#include <vector>

#include "qaction/discretize.hpp"

namespace qaction {

struct NumerovOptions {
  int base_points = 0;       // coarsest grid; 0 = resolution-based automatic
  double tol = 1e-9;         // grid-doubling convergence target
  int max_doublings = 6;
  DiscretizeOptions disc;
};

/// Independent ground truth: three-point Numerov shooting with node-count
/// bisection, grid-doubled until successive eigenvalues differ by less than
/// tol, then Richardson-extrapolated (O(h^4) leading error). Uses neither
/// the transfer-matrix recursion nor the Riccati flow.
double numerov_eigenvalue(const Potential& p, int n,
                          const NumerovOptions& opts = {});

/// Semiclassical comparator: solves integral(kappa) = (n + 1/2)*pi for E.
/// With langer = true the centrifugal numerator l(l+1) becomes (l + 1/2)^2.
double wkb_eigenvalue(const Potential& p, int n, bool langer = false,
                      const DiscretizeOptions& opts = {});

/// Closed-form spectrum for catalogued builtins; throws NoCatalogEntry.
double analytic_eigenvalue(const Potential& p, int n);
bool has_analytic_spectrum(const Potential& p);

// ---------------------------------------------------------------------------
// Published-table fixtures
// ---------------------------------------------------------------------------

struct TableRow {
  int n = 0;
  std::string exact_str, present_str, third_str;  // verbatim decimal strings
  double exact = 0, present = 0, third = 0;
  bool anomaly = false;  // row flagged as a suspected misprint in the source
};

struct TableFixture {
  std::string id;
  std::string potential_desc;
  std::string third_label;  // "maslov" or "swkb"
  std::vector<TableRow> rows;
};

/// Loads every fixture record from the data directory. The QACTION_FIXTURES
/// environment variable overrides the compiled-in default directory.
std::vector<TableFixture> load_fixtures();
const TableFixture& find_fixture(const std::vector<TableFixture>& all,
                                 const std::string& id);

}  // namespace qaction
