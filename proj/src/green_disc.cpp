#include <cmath>

#include "vortex/green.hpp"

namespace vortex {

// Unit disc, Kelvin image: G(x,y) = -(1/2pi) log|x-y| + (1/2pi) log(|y| |x - y*|)
// with y* = y/|y|^2. The second factor is symmetric:
// |y||x - y*| = sqrt(|x|^2|y|^2 - 2 x.y + 1).

DiscGreen::DiscGreen() : GreenBackend(makeUnitDisc()) {}

namespace {

// |y|^2 |x - y/|y|^2|^2 = |x|^2|y|^2 - 2 x.y + 1, valid also at y = 0.
double imageFactorSq(const Vec2& x, const Vec2& y) {
  return x.squaredNorm() * y.squaredNorm() - 2.0 * x.dot(y) + 1.0;
}

}  // namespace

GreenEval DiscGreen::evalG(const Vec2& x, const Vec2& y) const {
  requireInterior(x);
  requireInterior(y);
  requireDistinct(x, y);

  GreenEval out;
  const Vec2 diff = x - y;
  const double r2 = diff.squaredNorm();
  const double s2 = imageFactorSq(x, y);
  out.G = kInvTwoPi * 0.5 * (std::log(s2) - std::log(r2));

  // grad_x log s2 = (2 x |y|^2 - 2 y)/s2, and symmetrically in y.
  const Vec2 gradLogS_x = (2.0 * y.squaredNorm() * x - 2.0 * y) / s2;
  const Vec2 gradLogS_y = (2.0 * x.squaredNorm() * y - 2.0 * x) / s2;
  out.gradX = kInvTwoPi * (0.5 * gradLogS_x - diff / r2);
  out.gradY = kInvTwoPi * (0.5 * gradLogS_y + diff / r2);
  return out;
}

RobinEval DiscGreen::evalRobin(const Vec2& x) const {
  requireInterior(x);
  RobinEval out;
  const double r2 = x.squaredNorm();
  out.h = kInvTwoPi * std::log(1.0 - r2);
  out.gradH = -x / (kPi * (1.0 - r2));
  return out;
}

double DiscGreen::regularPart(const Vec2& x, const Vec2& y) const {
  requireInterior(x);
  requireInterior(y);
  return kInvTwoPi * 0.5 * std::log(imageFactorSq(x, y));
}

std::shared_ptr<const GreenBackend> makeDiscGreen() {
  return std::make_shared<DiscGreen>();
}

}  // namespace vortex
