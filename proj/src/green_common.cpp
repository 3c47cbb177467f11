#include <cmath>
#include <limits>
#include <sstream>

#include "vortex/green.hpp"

namespace vortex {

void GreenBackend::requireInterior(const Vec2& x) const {
  if (!dom_->contains(x)) {
    std::ostringstream os;
    os << name() << ": point (" << x.x() << ", " << x.y()
       << ") not strictly interior to " << dom_->describe();
    throw DomainError(os.str());
  }
}

void GreenBackend::requireDistinct(const Vec2& x, const Vec2& y) const {
  if ((x - y).norm() < 1e-14)
    throw SingularityError(name() + ": coincident evaluation points");
}

double GreenBackend::regularPart(const Vec2& x, const Vec2& y) const {
  return evalG(x, y).G + kInvTwoPi * std::log((x - y).norm());
}

double GreenBackend::psiDiagnostic(const Vec2& x, const Vec2& y) const {
  const double eps0 = dom_->stripWidth();
  const double dx = dom_->distToBoundary(x);
  const double dy = dom_->distToBoundary(y);
  if (!(dx > 0.0 && dx < eps0 && dy > 0.0 && dy < eps0))
    throw CollarError("psiDiagnostic: points must lie in the collar");
  requireDistinct(x, y);
  const Vec2 xbar = dom_->reflect(x);
  return regularPart(x, y) - kInvTwoPi * std::log((xbar - y).norm());
}

Vec2 GreenBackend::samplePoint(std::mt19937_64& rng,
                               double minBoundaryDist) const {
  const auto [lo, hi] = dom_->boundingBox();
  std::uniform_real_distribution<double> ux(lo.x(), hi.x());
  std::uniform_real_distribution<double> uy(lo.y(), hi.y());
  for (int i = 0; i < 100000; ++i) {
    Vec2 x(ux(rng), uy(rng));
    if (!dom_->contains(x)) continue;
    if (dom_->unsignedBoundaryDistance(x) <= minBoundaryDist) continue;
    return x;
  }
  throw GeometryError("samplePoint: rejection sampling failed");
}

ContractReport GreenBackend::checkContracts(int sampleCount,
                                            unsigned long long seed) const {
  ContractReport rep;
  rep.samples = sampleCount;
  std::mt19937_64 rng(seed);

  const double sep = 0.05 * dom_->inradius();
  rep.positivityWorst = std::numeric_limits<double>::max();

  for (int i = 0; i < sampleCount; ++i) {
    const Vec2 x = samplePoint(rng, sep);
    Vec2 y = samplePoint(rng, sep);
    if ((x - y).norm() < sep) continue;

    const GreenEval fw = evalG(x, y);
    const GreenEval bw = evalG(y, x);
    rep.symmetryWorst = std::max(rep.symmetryWorst, std::abs(fw.G - bw.G));
    rep.positivityWorst = std::min(rep.positivityWorst, fw.G);
    rep.gUpperBound = std::max(rep.gUpperBound, regularPart(x, y));

    const RobinEval rx = evalRobin(x);
    const double a3 =
        std::max(std::abs(rx.h) + rx.gradH.norm(),
                 std::abs(fw.G) + fw.gradX.norm() + fw.gradY.norm());
    rep.interiorBoundC1 = std::max(rep.interiorBoundC1, a3);
  }

  // (A4): sweep collar pairs approaching the boundary along interior normals.
  const double eps0 = dom_->stripWidth();
  for (int i = 0; i < std::max(16, sampleCount / 64); ++i) {
    const Vec2 base = samplePoint(rng, 1e-4);
    const Vec2 p = dom_->nearestBoundaryPoint(base);
    const double db = dom_->unsignedBoundaryDistance(base);
    if (db <= 0.0) continue;
    const Vec2 nu = (base - p) / db;
    std::uniform_real_distribution<double> uf(0.1, 0.9);
    for (int j = 0; j < 8; ++j) {
      const double d1 = uf(rng) * 0.9 * eps0;
      const double d2 = uf(rng) * 0.9 * eps0;
      const Vec2 x = p + d1 * nu;
      Vec2 y = p + d2 * nu;
      y.x() += 0.1 * d2 * nu.y();  // slight tangential offset
      y.y() -= 0.1 * d2 * nu.x();
      if (!dom_->contains(x) || !dom_->contains(y)) continue;
      if ((x - y).norm() < 1e-9) continue;
      if (!(dom_->unsignedBoundaryDistance(y) < eps0)) continue;
      rep.collarBoundC2 =
          std::max(rep.collarBoundC2, std::abs(psiDiagnostic(x, y)));
    }
  }

  // Dirichlet boundary behavior: G -> 0 as y approaches the boundary.
  for (int i = 0; i < 32; ++i) {
    const Vec2 x = samplePoint(rng, 0.2 * dom_->inradius());
    const Vec2 base = samplePoint(rng, 1e-4);
    const Vec2 p = dom_->nearestBoundaryPoint(base);
    const double db = dom_->unsignedBoundaryDistance(base);
    const Vec2 nu = (base - p) / db;
    const Vec2 y = p + 1e-4 * dom_->inradius() * nu;
    if (!dom_->contains(y) || (x - y).norm() < sep) continue;
    rep.boundaryWorstG = std::max(rep.boundaryWorstG, std::abs(evalG(x, y).G));
  }

  rep.symmetryOk = rep.symmetryWorst < 1e-6;
  rep.upperBoundOk = std::isfinite(rep.gUpperBound);
  rep.interiorOk = std::isfinite(rep.interiorBoundC1);
  rep.collarOk = std::isfinite(rep.collarBoundC2) && rep.collarBoundC2 < 1e3;
  rep.positivityOk = rep.positivityWorst > -1e-8;

  if (!rep.symmetryOk) rep.failures.push_back("(A1) symmetry violated");
  if (!rep.upperBoundOk) rep.failures.push_back("(A2) g not bounded above");
  if (!rep.interiorOk) rep.failures.push_back("(A3) interior bound violated");
  if (!rep.collarOk) rep.failures.push_back("(A4) collar bound violated");
  if (!rep.positivityOk) rep.failures.push_back("positivity violated");
  return rep;
}

std::string ContractReport::summary() const {
  std::ostringstream os;
  os << "contracts over " << samples << " samples: "
     << (allOk() ? "pass" : "FAIL") << "\n"
     << "  (A1) symmetry worst |G(x,y)-G(y,x)| = " << symmetryWorst << "\n"
     << "  (A2) max g               = " << gUpperBound << "\n"
     << "  (A3) measured C1         = " << interiorBoundC1 << "\n"
     << "  (A4) measured C2         = " << collarBoundC2 << "\n"
     << "  boundary max |G|         = " << boundaryWorstG << "\n"
     << "  min G (positivity)       = " << positivityWorst << "\n";
  for (const auto& f : failures) os << "  failure: " << f << "\n";
  return os.str();
}

}  // namespace vortex
