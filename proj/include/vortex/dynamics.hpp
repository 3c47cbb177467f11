#pragma once

#include <string>
#include <vector>

#include "vortex/hamiltonian.hpp"

namespace vortex {

struct TrajectoryPoint {
  double t = 0.0;
  Configuration x;
  double H = 0.0;
};

enum class Scheme { ImplicitMidpoint, Rk4 };

struct IntegrateParams {
  double dt = 1e-3;
  double T = 10.0;
  Scheme scheme = Scheme::ImplicitMidpoint;
  int stride = 1;              ///< store every stride-th step
  double fixedPointTol = 1e-13;
  int fixedPointMaxIter = 50;
};

struct Trajectory {
  std::vector<TrajectoryPoint> points;
  bool halted = false;     ///< proximity guard tripped; trajectory is partial
  std::string haltReason;
};

/// Point-vortex velocity: xdot_i = (1/Gamma_i) J grad_i H with J(w1,w2) =
/// (w2,-w1).
std::vector<Vec2> velocity(const HamiltonianModel& m, const Configuration& x);

/// Integrate the vortex system. Halts with a flagged partial trajectory when
/// any pair distance or boundary distance falls below 10 * dt * maxSpeed.
Trajectory integrate(const HamiltonianModel& m, const Configuration& x0,
                     const IntegrateParams& params);

/// sum_i Gamma_i |x_i|^2; conserved on rotationally symmetric domains with
/// zero flux term.
double angularImpulse(const HamiltonianModel& m, const Configuration& x);

}  // namespace vortex
