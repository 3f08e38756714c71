#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qaction {

/// Base class for all library errors.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Expression source could not be parsed. Carries the byte offset of the
/// first offending character.
struct SyntaxError : Error {
  std::size_t offset;
  SyntaxError(const std::string& msg, std::size_t off)
      : Error(msg + " (at byte " + std::to_string(off) + ")"), offset(off) {}
};

/// A free name in an expression is neither "x" nor a supplied parameter.
struct UnknownIdentifier : Error {
  std::string name;
  std::size_t offset;
  UnknownIdentifier(const std::string& id, std::size_t off)
      : Error("unknown identifier '" + id + "' (at byte " + std::to_string(off) + ")"),
        name(id), offset(off) {}
};

struct UnknownBuiltin : Error {
  explicit UnknownBuiltin(const std::string& name)
      : Error("unknown builtin potential '" + name + "'") {}
};

struct InvalidParam : Error {
  explicit InvalidParam(const std::string& msg) : Error(msg) {}
};

/// Evaluation outside a potential's domain (e.g. r <= 0 for radial kinds).
struct DomainError : Error {
  explicit DomainError(const std::string& msg) : Error(msg) {}
};

struct NoTurningPoints : Error {
  explicit NoTurningPoints(const std::string& msg) : Error(msg) {}
};

struct BracketTooNarrow : Error {
  explicit BracketTooNarrow(const std::string& msg) : Error(msg) {}
};

/// V never exceeds E on one side; the trial state is not bound.
struct UnboundedDirection : Error {
  explicit UnboundedDirection(const std::string& msg) : Error(msg) {}
};

/// A transfer-matrix layer's phase increment reached pi/2.
struct StepTooCoarse : Error {
  explicit StepTooCoarse(const std::string& msg) : Error(msg) {}
};

/// Log-derivative hit a pole exactly at a layer edge.
struct PoleAtBoundary : Error {
  explicit PoleAtBoundary(const std::string& msg) : Error(msg) {}
};

/// Adaptive step control underflowed before meeting the local tolerance.
struct ToleranceNotMet : Error {
  explicit ToleranceNotMet(const std::string& msg) : Error(msg) {}
};

/// kappa'/kappa blowup unresolved near a turning point.
struct TurningPointSingularity : Error {
  explicit TurningPointSingularity(const std::string& msg) : Error(msg) {}
};

struct NotAnEigenvalue : Error {
  explicit NotAnEigenvalue(const std::string& msg) : Error(msg) {}
};

struct NoSuchBoundState : Error {
  explicit NoSuchBoundState(const std::string& msg) : Error(msg) {}
};

struct MonotonicityViolation : Error {
  explicit MonotonicityViolation(const std::string& msg) : Error(msg) {}
};

struct NonConvergence : Error {
  explicit NonConvergence(const std::string& msg) : Error(msg) {}
};

struct NoCatalogEntry : Error {
  explicit NoCatalogEntry(const std::string& msg) : Error(msg) {}
};

struct ConfigError : Error {
  explicit ConfigError(const std::string& msg) : Error(msg) {}
};

struct FixtureError : Error {
  explicit FixtureError(const std::string& msg) : Error(msg) {}
};

}  // namespace qaction
