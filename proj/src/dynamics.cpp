#include "vortex/dynamics.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace vortex {

namespace {

double minPairDistance(const Configuration& x) {
  double best = std::numeric_limits<double>::max();
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = i + 1; j < x.size(); ++j)
      best = std::min(best, (x[i] - x[j]).norm());
  return best;
}

double minBoundaryDistance(const Domain& dom, const Configuration& x) {
  double best = std::numeric_limits<double>::max();
  for (const Vec2& p : x) best = std::min(best, dom.unsignedBoundaryDistance(p));
  return best;
}

double maxSpeed(const std::vector<Vec2>& v) {
  double best = 0.0;
  for (const Vec2& w : v) best = std::max(best, w.norm());
  return best;
}

Configuration axpy(const Configuration& x, double a,
                   const std::vector<Vec2>& v) {
  Configuration y = x;
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * v[i];
  return y;
}

}  // namespace

std::vector<Vec2> velocity(const HamiltonianModel& m, const Configuration& x) {
  const std::vector<Vec2> g = m.gradH(x);
  std::vector<Vec2> v(g.size());
  for (std::size_t i = 0; i < g.size(); ++i)
    v[i] = rotJ(g[i]) / m.strengths()[static_cast<int>(i)];
  return v;
}

double angularImpulse(const HamiltonianModel& m, const Configuration& x) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i)
    s += m.strengths()[static_cast<int>(i)] * x[i].squaredNorm();
  return s;
}

Trajectory integrate(const HamiltonianModel& m, const Configuration& x0,
                     const IntegrateParams& params) {
  if (!(params.dt > 0.0)) throw ValidationError("integrate: dt must be positive");
  m.validate(x0);

  Trajectory traj;
  const long nSteps = std::lround(params.T / params.dt);
  Configuration x = x0;
  traj.points.push_back({0.0, x, m.evalH(x)});

  auto guardTrips = [&](const Configuration& y, const std::vector<Vec2>& v,
                        std::string* why) {
    const double threshold = 10.0 * params.dt * maxSpeed(v);
    if (minPairDistance(y) < threshold) {
      *why = "pair distance below proximity threshold";
      return true;
    }
    if (minBoundaryDistance(m.domain(), y) < threshold) {
      *why = "boundary distance below proximity threshold";
      return true;
    }
    return false;
  };

  for (long step = 1; step <= nSteps; ++step) {
    std::vector<Vec2> v0;
    try {
      v0 = velocity(m, x);
    } catch (const ConfigurationError& err) {
      traj.halted = true;
      traj.haltReason = err.what();
      break;
    }
    std::string why;
    if (guardTrips(x, v0, &why)) {
      traj.halted = true;
      traj.haltReason = why;
      break;
    }

    Configuration y;
    if (params.scheme == Scheme::Rk4) {
      const std::vector<Vec2> k1 = v0;
      const std::vector<Vec2> k2 = velocity(m, axpy(x, 0.5 * params.dt, k1));
      const std::vector<Vec2> k3 = velocity(m, axpy(x, 0.5 * params.dt, k2));
      const std::vector<Vec2> k4 = velocity(m, axpy(x, params.dt, k3));
      y = x;
      for (std::size_t i = 0; i < x.size(); ++i)
        y[i] += params.dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    } else {
      // Implicit midpoint: y = x + dt V((x+y)/2), by fixed-point iteration.
      y = axpy(x, params.dt, v0);
      bool converged = false;
      for (int it = 0; it < params.fixedPointMaxIter; ++it) {
        Configuration mid = x;
        for (std::size_t i = 0; i < x.size(); ++i)
          mid[i] = 0.5 * (x[i] + y[i]);
        std::vector<Vec2> vm;
        try {
          vm = velocity(m, mid);
        } catch (const ConfigurationError& err) {
          traj.halted = true;
          traj.haltReason = err.what();
          break;
        }
        const Configuration yNew = axpy(x, params.dt, vm);
        double delta = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i)
          delta = std::max(delta, (yNew[i] - y[i]).lpNorm<Eigen::Infinity>());
        y = yNew;
        if (delta < params.fixedPointTol) {
          converged = true;
          break;
        }
      }
      if (traj.halted) break;
      if (!converged)
        throw SolveError(
            "implicit midpoint fixed-point iteration did not converge; "
            "reduce dt");
    }

    try {
      m.validate(y);
    } catch (const ConfigurationError&) {
      traj.halted = true;
      traj.haltReason = "configuration left the domain";
      break;
    }
    x = y;
    if (step % params.stride == 0 || step == nSteps)
      traj.points.push_back({step * params.dt, x, m.evalH(x)});
  }
  return traj;
}

}  // namespace vortex
