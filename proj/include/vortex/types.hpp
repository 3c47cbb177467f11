#pragma once

#include <Eigen/Core>

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace vortex {

using Vec2 = Eigen::Vector2d;
using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;
inline constexpr double kInvTwoPi = 1.0 / kTwoPi;

inline Complex toComplex(const Vec2& v) { return {v.x(), v.y()}; }
inline Vec2 toVec2(Complex z) { return {z.real(), z.imag()}; }

/// Scalar 2-D cross product a.x*b.y - a.y*b.x.
inline double cross2(const Vec2& a, const Vec2& b) {
  return a.x() * b.y() - a.y() * b.x();
}

/// The symplectic rotation J(w1,w2) = (w2,-w1).
inline Vec2 rotJ(const Vec2& w) { return {w.y(), -w.x()}; }

// Error hierarchy. Every failure mode the library reports deliberately maps
// onto one of these; anything else escaping is a bug.

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Point outside the domain, in the hole, or on the boundary.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Point outside the boundary collar where the reflection is defined.
class CollarError : public Error {
 public:
  using Error::Error;
};

/// Coincident evaluation points of a Green function.
class SingularityError : public Error {
 public:
  using Error::Error;
};

/// Invalid vortex configuration (coincident points, boundary contact, ...).
class ConfigurationError : public Error {
 public:
  using Error::Error;
};

/// Operation invoked with an unsupported vortex count.
class ArityError : public Error {
 public:
  using Error::Error;
};

/// Geometric precondition violated (ball not contained, bad polyline, ...).
class GeometryError : public Error {
 public:
  using Error::Error;
};

/// Strength vector fails validation.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Region calibration could not find workable (a, b, M0).
class CalibrationError : public Error {
 public:
  using Error::Error;
};

/// Constrained flow failed (degenerate boundary, no candidates, ...).
class FlowError : public Error {
 public:
  using Error::Error;
};

/// Newton refinement diverged or left the domain.
class RefinementError : public Error {
 public:
  using Error::Error;
};

/// Radial profile shooting failed to bracket.
class ProfileError : public Error {
 public:
  using Error::Error;
};

/// Nonlinear grid solve failed.
class SolveError : public Error {
 public:
  using Error::Error;
};

/// Run-configuration document rejected by the schema.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace vortex
