#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qaction/discretize.hpp"
#include "qaction/phaseflow.hpp"

namespace qaction {

enum class Engine { riccati, tmatrix };

const char* engine_name(Engine e);

struct QuantizeOptions {
  Engine engine = Engine::riccati;
  double tol_j = 1e-10;     // |J(E) - (n+1)| at the returned energy
  double ode_tol = 1e-10;   // riccati sweep tolerance (tightened near tol_j)
  int layer_count = 0;      // tmatrix base grid; 0 = automatic
  int coarse_points = 64;   // initial J(E) scan resolution
  double e_max = NAN;       // optional upper search bound override
  bool want_wavefunction = false;
  int wavefunction_samples = 8193;
  DiscretizeOptions disc;
};

/// Sampled action curve J(E). J is strictly increasing in E; the solver
/// treats a decrease beyond noise as a hard error.
struct ActionCurve {
  std::vector<std::pair<double, double>> samples;  // (E, J)
  std::string engine;
  double tol = 0;
  bool monotone = true;
};

struct Eigensolution {
  int n = 0;            // internal quantum number = node count
  int n_paper = 0;      // published counting (offset for 1D Coulomb)
  double e = 0;
  double delta = 0;         // reported phase shift, (n_paper+1)*pi - integral(kappa)
  double delta_integral = 0;  // span phase minus integral(kappa)
  int node_count = 0;
  std::string engine;
  double j_residual = 0;    // |J(e) - (n+1)|
  double ode_tol_used = 0;  // riccati
  double h_used = 0;        // tmatrix finest grid spacing
  bool converged = false;
  bool shallow = false;     // within 1e-6 of the continuum threshold
  std::string message;
  std::shared_ptr<WavefunctionTable> wavefunction;
};

struct SpectrumResult {
  std::vector<Eigensolution> levels;
  std::vector<std::pair<int, std::string>> failures;  // (n, reason)
};

/// J(E) for one trial energy with the requested engine.
double action(const Potential& p, double energy,
              const QuantizeOptions& opts = {});

/// J(E) on an explicit energy grid, sharing one matching point.
ActionCurve action_curve(const Potential& p, const std::vector<double>& grid,
                         const QuantizeOptions& opts = {});

/// Solves J(E) = n+1 by bracketing on the monotone action curve followed by
/// hybrid bisection/secant refinement. Singular-origin potentials are solved
/// at origin_epsilon and origin_epsilon/10 and Richardson-extrapolated; the
/// tmatrix engine is Richardson-extrapolated over its layer width.
Eigensolution solve_eigenvalue(const Potential& p, int n,
                               const QuantizeOptions& opts = {});

/// Batched solve for n = 0..n_max with a shared bracket scan. Per-level
/// failures are collected rather than fatal.
SpectrumResult solve_spectrum(const Potential& p, int n_max,
                              const QuantizeOptions& opts = {});

}  // namespace qaction
