#pragma once

#include <memory>
#include <vector>

#include "vortex/hamiltonian.hpp"

namespace vortex {

struct DesingParams {
  double eps = 0.02;   ///< vortex-core parameter, in (0,1)
  double p = 2.0;      ///< nonlinearity exponent, > 1
  double R = 1.5;      ///< radial-profile ball radius, domain strictly inside B_R
  double gridH = 1.0 / 256.0;
  double newtonTol = 1e-9;
  int newtonMaxIter = 60;
  int maxContinuationDepth = 4;

  /// delta = eps (2 pi / |ln eps|)^((p-1)/2).
  double delta() const;
  void validate() const;
};

/// Radial free-boundary profile: the positive decreasing solution of
/// -delta^2 (w'' + w'/r) = (w - a)_+^p on (0, R), w(R) = 0, matched to the
/// logarithmic outer solution at the core radius where w = a.
struct RadialProfile {
  double delta = 0.0;
  double a = 0.0;
  double R = 0.0;
  double p = 2.0;
  double coreRadius = 0.0;
  double centerValue = 0.0;       ///< w(0)
  double outerCoefficient = 0.0;  ///< kappa in w = kappa log(R/r) outside
  std::vector<double> r;          ///< core samples, r[0] = 0 .. coreRadius
  std::vector<double> w;
  std::vector<double> wPrime;

  double value(double radius) const;       ///< w at any radius in [0, R]
  double derivative(double radius) const;  ///< w' at any radius in (0, R)
  /// Core mass int (w-a)_+^p / delta^2 dA; equals 2 pi kappa by the
  /// divergence theorem.
  double coreCirculation() const;
};

RadialProfile radialProfile(double delta, double a, double R, double p);

/// Per-vortex vorticity blob diagnostics.
struct Blob {
  int vortexIndex = -1;  ///< nearest equilibrium point
  Vec2 centroid = Vec2::Zero();
  double circulation = 0.0;
  double supportDiameter = 0.0;
  int cells = 0;
};

/// Finite-difference solution of the stream-function problem
///   -eps^2 Lap psi = sum_i f_i(psi + (Gamma_i/2pi) ln eps),  psi = psi0 on
/// the boundary, with f_i(t) = t_+^p for Gamma_i > 0 and -t_-^p otherwise.
class GridSolution {
 public:
  int nx = 0, ny = 0;
  double h = 0.0;
  Vec2 origin = Vec2::Zero();
  double eps = 0.0;
  double p = 2.0;

  std::vector<double> psi;    ///< stream function, row-major, NaN outside
  std::vector<double> omega;  ///< vorticity -Lap psi = RHS/eps^2, 0 off-blob
  std::vector<int> interiorIndex;  ///< unknown index or -1
  std::vector<Blob> blobs;
  double newtonResidual = 0.0;

  int idx(int i, int j) const { return j * nx + i; }
  Vec2 node(int i, int j) const {
    return origin + h * Vec2(static_cast<double>(i), static_cast<double>(j));
  }
  bool isInterior(int i, int j) const {
    return i >= 0 && j >= 0 && i < nx && j < ny && interiorIndex[idx(i, j)] >= 0;
  }
};

/// Desingularize an equilibrium: solve the semilinear problem around the
/// configuration xStar. The initial ansatz stacks signed scaled radial
/// profiles (projected to zero boundary values through the backend's regular
/// part) on the harmonic flux term; Newton with automatic continuation in eps
/// does the rest.
GridSolution solveSteadyState(const HamiltonianModel& m,
                              const Configuration& xStar,
                              const DesingParams& params);

/// Zero-vortex path: the linear Dirichlet problem with data psi0 (the
/// solution is the discrete harmonic extension; for psi0 of degree <= 2 it
/// reproduces psi0 exactly).
GridSolution solveSteadyState(const Domain& dom, const HarmonicPoly& flux,
                              const DesingParams& params);

struct VelocityPressureField {
  std::vector<double> vx, vy, pressure, divergence;
};

/// Centered-difference velocity v = J grad psi, pressure
/// P = F(psi) - |grad psi|^2 / 2 and discrete divergence diagnostics.
VelocityPressureField velocityAndPressure(const GridSolution& sol,
                                          const HamiltonianModel& m);

}  // namespace vortex
