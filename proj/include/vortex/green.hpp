#pragma once

#include <memory>
#include <random>
#include <string>
#include <vector>

#include "vortex/domain.hpp"
#include "vortex/types.hpp"

namespace vortex {

struct GreenEval {
  double G = 0.0;
  Vec2 gradX = Vec2::Zero();  ///< gradient in the first argument
  Vec2 gradY = Vec2::Zero();  ///< gradient in the second argument
};

struct RobinEval {
  double h = 0.0;
  Vec2 gradH = Vec2::Zero();
};

/// Result of the randomized (A1)-(A4) contract verification.
struct ContractReport {
  int samples = 0;
  double symmetryWorst = 0.0;    ///< max |G(x,y)-G(y,x)|
  double gUpperBound = 0.0;      ///< max g(x,y) observed
  double interiorBoundC1 = 0.0;  ///< max |h|+|grad h|, |G|+|grads| on separated sample
  double collarBoundC2 = 0.0;    ///< max |psi(x,y)| over collar pairs
  double boundaryWorstG = 0.0;   ///< max |G| with y pushed near the boundary
  double positivityWorst = 0.0;  ///< min G observed on interior pairs
  bool symmetryOk = false;
  bool upperBoundOk = false;
  bool interiorOk = false;
  bool collarOk = false;
  bool positivityOk = false;
  std::vector<std::string> failures;

  bool allOk() const {
    return symmetryOk && upperBoundOk && interiorOk && collarOk && positivityOk;
  }
  std::string summary() const;
};

/// Evaluator of a generalized Green function G = g - (1/2pi) log|x-y| on a
/// domain, together with its regular part g and the Robin function
/// h(x) = g(x,x). Backends are immutable after construction and safe for
/// concurrent evaluation.
class GreenBackend {
 public:
  virtual ~GreenBackend() = default;

  const Domain& domain() const { return *dom_; }
  std::shared_ptr<const Domain> domainPtr() const { return dom_; }
  virtual std::string name() const = 0;

  /// G with both gradients. Requires distinct strictly interior points.
  virtual GreenEval evalG(const Vec2& x, const Vec2& y) const = 0;

  /// Robin function and gradient at a strictly interior point.
  virtual RobinEval evalRobin(const Vec2& x) const = 0;

  /// Regular part g(x,y) = G(x,y) + (1/2pi) log|x-y|.
  virtual double regularPart(const Vec2& x, const Vec2& y) const;

  /// psi(x,y) = g(x,y) - (1/2pi) log|xbar - y| with the normal reflection
  /// xbar. Both points must lie in the collar. Bounded iff (A4) holds.
  double psiDiagnostic(const Vec2& x, const Vec2& y) const;

  /// Randomized verification of (A1)-(A4) plus positivity.
  ContractReport checkContracts(int sampleCount, unsigned long long seed) const;

  /// Uniform sample of the interior, at least minBoundaryDist from the
  /// boundary (rejection sampling; helper shared by diagnostics and tests).
  Vec2 samplePoint(std::mt19937_64& rng, double minBoundaryDist = 0.0) const;

 protected:
  explicit GreenBackend(std::shared_ptr<const Domain> dom)
      : dom_(std::move(dom)) {}
  void requireInterior(const Vec2& x) const;
  void requireDistinct(const Vec2& x, const Vec2& y) const;

  std::shared_ptr<const Domain> dom_;
};

/// Closed-form Dirichlet Green function of the unit disc (Kelvin image).
class DiscGreen final : public GreenBackend {
 public:
  DiscGreen();
  std::string name() const override { return "disc-closed-form"; }
  GreenEval evalG(const Vec2& x, const Vec2& y) const override;
  RobinEval evalRobin(const Vec2& x) const override;
  double regularPart(const Vec2& x, const Vec2& y) const override;
};

/// Dirichlet Green function of the annulus innerRadius < |x| < 1 through the
/// doubly infinite image series on the logarithmic cylinder.
class AnnulusGreen final : public GreenBackend {
 public:
  /// truncationK = 0 picks the truncation from the radius ratio so that the
  /// series tail stays below 1e-12.
  explicit AnnulusGreen(double innerRadius, int truncationK = 0);
  std::string name() const override { return "annulus-image-series"; }
  GreenEval evalG(const Vec2& x, const Vec2& y) const override;
  RobinEval evalRobin(const Vec2& x) const override;
  double regularPart(const Vec2& x, const Vec2& y) const override;
  int truncationK() const { return K_; }

 private:
  double q_;  ///< inner radius
  double L_;  ///< -log q, width of the cylinder
  int K_;
};

/// Boundary-element backend: interior Dirichlet problem for the regular part,
/// solved with a double-layer potential and collocation at panel midpoints.
/// Smooth-curve (Nystrom) discretization for the disc, straight panels with
/// exact segment integrals for polygonal boundaries. Multiply connected
/// domains are not supported by this backend.
class BemGreen final : public GreenBackend {
 public:
  BemGreen(std::shared_ptr<const Domain> dom, int panelCount,
           int quadratureOrder = 1);
  ~BemGreen() override;
  std::string name() const override { return "bem"; }
  GreenEval evalG(const Vec2& x, const Vec2& y) const override;
  RobinEval evalRobin(const Vec2& x) const override;
  double regularPart(const Vec2& x, const Vec2& y) const override;

  int nodeCount() const;
  /// Max residual of the collocation solve for data centered at y.
  double boundaryResidual(const Vec2& y) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

std::shared_ptr<const GreenBackend> makeDiscGreen();
std::shared_ptr<const GreenBackend> makeAnnulusGreen(double innerRadius,
                                                     int truncationK = 0);
std::shared_ptr<const GreenBackend> makeBemGreen(
    std::shared_ptr<const Domain> dom, int panelCount, int quadratureOrder = 1);

}  // namespace vortex
