#pragma once

#include <cmath>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace qaction {

// ---------------------------------------------------------------------------
// Expression language
// ---------------------------------------------------------------------------

enum class ExprOp {
  constant,
  variable,  // the free variable "x"
  neg,
  abs,
  exp,
  ln,
  sqrt,
  sin,
  cos,
  tanh,
  add,
  sub,
  mul,
  div,
  pow,
};

/// Immutable expression tree. Parameters are resolved to constants at parse
/// time, so evaluation never looks names up.
struct ExpressionAst {
  ExprOp op = ExprOp::constant;
  double value = 0;                                   // constant payload
  std::string name;                                   // original identifier, for unparse
  std::vector<std::shared_ptr<const ExpressionAst>> args;

  double eval(double x) const;
  std::string unparse() const;
  bool equals(const ExpressionAst& other) const;
};

using ExprPtr = std::shared_ptr<const ExpressionAst>;

/// Recursive-descent parser. Precedence: ^ (right-assoc) > unary - > * / > + -.
/// Free names must be "x", "pi", or a key of params; anything else raises
/// UnknownIdentifier with the byte offset. Syntax errors carry offsets too.
ExprPtr parse_potential(const std::string& source,
                        const std::map<std::string, double>& params);

// ---------------------------------------------------------------------------
// Potentials
// ---------------------------------------------------------------------------

enum class DomainKind { full_line, half_line_radial, half_line_with_wall };

enum class BuiltinTag {
  none,  // expression-defined
  infinite_well,
  harmonic_1d,
  harmonic_radial,
  coulomb_1d,
  coulomb_radial,
  woods_saxon,
  double_oscillator,
};

/// An evaluatable potential with the metadata both engines need. Immutable
/// after construction; safe to evaluate concurrently.
struct Potential {
  BuiltinTag kind = BuiltinTag::none;
  ExprPtr expr;  // set when kind == none
  std::map<std::string, double> params;
  std::optional<int> angular_momentum_l;
  double mass = 1.0;
  double hbar = 1.0;
  DomainKind domain_kind = DomainKind::full_line;

  // Derived metadata.
  std::optional<double> wall_left;    // hard wall position (wells, psi(0)=0)
  std::optional<double> wall_right;   // second wall (infinite well)
  bool singular_origin = false;       // V -> -inf at the left wall (Coulomb)
  bool symmetric = false;             // V(x) == V(-x)
  std::vector<double> breakpoints;    // derivative kinks (|x| potentials)
  double dissociation_limit = 0;      // V at infinity; +inf for confining
  int paper_n_offset = 0;             // reporting offset for the quantum number
  // When set, replaces l(l+1) in the centrifugal numerator (Langer form).
  std::optional<double> centrifugal_override;
  std::string name = "expr";

  /// Effective potential: base V plus l(l+1)*hbar^2/(2*m*x^2) when l is set.
  double eval(double x) const;

  /// Base V(x) without the centrifugal term.
  double eval_base(double x) const;

  /// 2m(E - V_eff(x))/hbar^2, the local squared wavenumber.
  double kappa_sq(double x, double energy) const;

  bool has_left_wall() const { return wall_left.has_value(); }
  bool has_right_wall() const { return wall_right.has_value(); }
  bool confining() const { return dissociation_limit == INFINITY; }
};

/// Builtin catalog. Parameters not supplied take the catalog defaults:
///   infinite_well:     L = 1
///   harmonic_1d:       (none; V = x^2/2)
///   harmonic_radial:   (none; V = r^2/2 plus centrifugal)
///   coulomb_1d:        (none; V = -1/|x|, wall at the origin)
///   coulomb_radial:    (none; V = -1/r plus centrifugal)
///   woods_saxon:       r0 = 30
///   double_oscillator: c = 10, a = 3
Potential builtin(const std::string& name,
                  const std::map<std::string, double>& params = {},
                  std::optional<int> l = std::nullopt, double mass = 1.0,
                  double hbar = 1.0);

/// Wraps a parsed expression as a full-line potential.
Potential from_expression(const std::string& source,
                          const std::map<std::string, double>& params,
                          std::optional<int> l = std::nullopt, double mass = 1.0,
                          double hbar = 1.0);

}  // namespace qaction
