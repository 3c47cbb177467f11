#pragma once

#include <optional>
#include <vector>

#include "vortex/hamiltonian.hpp"
#include "vortex/hypotheses.hpp"

namespace vortex {

/// Reference linking cycle: the circle family (c + rho e^{i zeta}, c, c + 2 rho)
/// for N = 3, and the torus family (c + rho e^{i zeta1}, c, c + 3 rho,
/// c + 3 rho + rho e^{i zeta2}) for N = 4. The closed ball of radius 2 rho
/// (N = 3) or 4 rho (N = 4) around c must lie inside the domain.
struct LinkingCycle {
  int n = 3;           // 3 or 4
  double rho = 0.1;
  Vec2 center = Vec2::Zero();
  int resolution = 128;  // samples per circle factor, >= 64

  /// Number of ensemble samples (resolution for N=3, resolution^2 for N=4).
  int sampleCount() const;
  /// Angles of sample k.
  std::array<double, 2> angles(int k) const;
};

/// Evaluate the reference cycle at the given angle(s).
Configuration gamma0(const LinkingCycle& cycle, double zeta1, double zeta2 = 0.0);
/// Validates the cycle against a domain (ball containment, resolution).
void validateCycle(const LinkingCycle& cycle, const Domain& dom);

/// Membership in the collinear linking set L3 (x2 strictly between x1 and x3)
/// or L4 (additionally x3 strictly between x2 and x4), within tolerance.
bool inLinkingSet(const Configuration& x, double tol);

/// Calibrated flow region: energies a < b bracketing the linking values and
/// the barrier level M0 of D = {Phi >= -M0}.
struct RegionCalibration {
  double a = 0.0;
  double b = 0.0;
  double M0 = 0.0;
  double minCycleH = 0.0;   // min H over gamma0 samples
  double supLinkingH = 0.0; // numerically estimated sup of H over the linking set
  double minCyclePhi = 0.0;
  int probeDoublings = 0;   // times M0 was doubled by the probe run
  std::string note;
};

struct FlowParams {
  double dt0 = 1e-3;
  double dtMax = 0.05;
  double dtMin = 1e-12;
  int maxSteps = 4000;
  double candidateTol = 1e-3;   // |grad H| threshold for flow candidates
  double band = 0.0;            // blend band width; 0 -> 0.05 * M0
  double bandTol = 1e-6;        // allowed undershoot of Phi below -M0
  double monotonicityTol = 1e-9;
  double maxMove = 0.05;        // cap on |dx| per step
  int maxRefineRounds = 2;
  unsigned long long seed = 12345;
};

/// Per-sample outcome of the constrained ascending flow.
enum class SampleFate { Candidate, EscapedAboveB, LeftRegion, Budget, Stuck };

struct SampleOutcome {
  SampleFate fate = SampleFate::Budget;
  Configuration finalX;
  double finalH = 0.0;
  double minResidual = 0.0;       // min |grad H| along the trajectory
  Configuration minResidualX;     // where it was attained
  double minPhiMargin = 0.0;      // min of Phi + M0 along the trajectory
  double steps = 0;
};

/// Ensemble snapshot used for flow diagnostics.
struct FlowSnapshot {
  double t = 0.0;
  int alive = 0;
  int escaped = 0;
  int candidates = 0;
  double minResidual = 0.0;
  double minPhiMargin = 0.0;
  double worstMultiplier = 0.0;  // most negative <gradH,gradPhi>/|gradPhi|^2 in band
};

struct FlowReport {
  RegionCalibration region;
  std::vector<SampleOutcome> outcomes;
  std::vector<FlowSnapshot> history;
  std::vector<Configuration> candidates;  // flow candidates, pre-refinement
  int refineRounds = 0;
};

struct EquilibriumResult {
  Configuration x;
  double residual = 0.0;            // |grad H|_2
  double value = 0.0;               // H(x)
  std::vector<double> hessianEigs;  // finite-difference Hessian spectrum
  std::optional<double> phiMargin;  // Phi(x) + M0 when a calibration exists
  int newtonIterations = 0;
};

/// The constrained ascending field V: grad H away from the boundary of
/// D = {Phi >= -M0}, blended within `band` of Phi = -M0 toward the projection
/// of grad H onto the tangent space of the Phi level set whenever
/// <grad H, grad Phi> <= 0.
std::vector<Vec2> constrainedField(const HamiltonianModel& m,
                                   const Configuration& x, double M0,
                                   double band);

/// Calibrate {a, b, M0} for the cycle (hypotheses must approve the strengths).
RegionCalibration calibrateRegion(const HamiltonianModel& m,
                                  const LinkingCycle& cycle,
                                  unsigned long long seed = 12345);

/// Evolve every cycle sample under the constrained ascending flow.
FlowReport ascendFlow(const HamiltonianModel& m, const LinkingCycle& cycle,
                      const FlowParams& params,
                      const RegionCalibration* precomputed = nullptr);

/// Damped Newton on grad H = 0 with a finite-difference Hessian of the
/// analytic gradient. Near-null Hessian directions (rotation orbits of
/// symmetric domains) are projected out of the step.
EquilibriumResult newtonRefine(const HamiltonianModel& m,
                               const Configuration& x0, double tol = 1e-11,
                               int maxIter = 60);

/// Global maximization of H for N = 2 with Gamma_1 Gamma_2 < 0 (compact
/// superlevel sets): multistart ascent plus Newton refinement.
EquilibriumResult findEquilibriumN2(const HamiltonianModel& m,
                                    double tol = 1e-11, int starts = 32,
                                    unsigned long long seed = 2024);

/// Full pipeline for N = 3 or 4: gate, calibrate, flow, refine, deduplicate.
std::vector<EquilibriumResult> findEquilibria(const HamiltonianModel& m,
                                              const LinkingCycle& cycle,
                                              const FlowParams& params,
                                              FlowReport* reportOut = nullptr);

}  // namespace vortex
