#include <cmath>
#include <complex>

#include "vortex/green.hpp"

namespace vortex {

// Dirichlet Green function of the annulus q < |z| < 1. Under zeta = log z the
// annulus becomes a periodic cylinder of width L = -log q; the Green function
// is the doubly infinite reflection series of the cylinder log-kernel
//   u(xi) = -(1/2pi) log|2 sinh(xi/2)|,
// summed over images at omega + 2kL (positive) and -conj(omega) + 2kL
// (negative), plus the harmonic corrector -log|z| log|w| / (2 pi L) that
// restores the inner boundary condition. Partial sums are taken over
// symmetric windows |k| <= K; the paired tails cancel and the remainder
// decays like q^(2K).

namespace {

// log|2 sinh(xi/2)| evaluated without overflow for large |Re xi|.
double logAbs2SinhHalf(Complex xi) {
  if (xi.real() < 0.0) xi = -xi;
  return 0.5 * xi.real() + std::log(std::abs(1.0 - std::exp(-xi)));
}

// coth(xi/2), stable for large |Re xi|.
Complex cothHalf(Complex xi) {
  if (xi.real() >= 0.0) {
    const Complex e = std::exp(-xi);
    return (1.0 + e) / (1.0 - e);
  }
  const Complex e = std::exp(xi);
  return -(1.0 + e) / (1.0 - e);
}

}  // namespace

AnnulusGreen::AnnulusGreen(double innerRadius, int truncationK)
    : GreenBackend(makeAnnulus(innerRadius)), q_(innerRadius) {
  L_ = -std::log(q_);
  // Tail of the paired series ~ exp(-2KL); keep it below 1e-13.
  K_ = truncationK > 0 ? truncationK
                       : std::max(8, static_cast<int>(std::ceil(16.0 / L_)));
}

GreenEval AnnulusGreen::evalG(const Vec2& x, const Vec2& y) const {
  requireInterior(x);
  requireInterior(y);
  requireDistinct(x, y);

  const Complex z = toComplex(x);
  const Complex w = toComplex(y);
  const Complex zeta = std::log(z);
  const Complex omega = std::log(w);
  const double sz = zeta.real();
  const double sw = omega.real();

  double val = 0.0;
  Complex sumP(0.0, 0.0), sumN(0.0, 0.0);
  for (int k = -K_; k <= K_; ++k) {
    const Complex xiP = zeta - omega - 2.0 * k * L_;
    const Complex xiN = zeta + std::conj(omega) - 2.0 * k * L_;
    val += -kInvTwoPi * (logAbs2SinhHalf(xiP) - logAbs2SinhHalf(xiN));
    sumP += cothHalf(xiP);
    sumN += cothHalf(xiN);
  }
  val -= sz * sw / (kTwoPi * L_);

  GreenEval out;
  out.G = val;
  const Complex gx = std::conj(-(sumP - sumN) / (4.0 * kPi * z));
  out.gradX = toVec2(gx) - (sw / (kTwoPi * L_)) * x / x.squaredNorm();
  const Complex gy = std::conj((sumP + std::conj(sumN)) / (4.0 * kPi * w));
  out.gradY = toVec2(gy) - (sz / (kTwoPi * L_)) * y / y.squaredNorm();
  return out;
}

double AnnulusGreen::regularPart(const Vec2& x, const Vec2& y) const {
  requireInterior(x);
  requireInterior(y);
  const Complex z = toComplex(x);
  const Complex w = toComplex(y);
  const Complex zeta = std::log(z);
  const Complex omega = std::log(w);
  const double sz = zeta.real();
  const double sw = omega.real();

  // The k = 0 positive image combines exactly with the free log kernel:
  // (1/2pi) log|z-w| - (1/2pi) log|2 sinh((zeta-omega)/2)| = (sz+sw)/(4pi).
  double val = kInvTwoPi * 0.5 * (sz + sw) - sz * sw / (kTwoPi * L_);
  for (int k = -K_; k <= K_; ++k) {
    const Complex xiN = zeta + std::conj(omega) - 2.0 * k * L_;
    val += kInvTwoPi * logAbs2SinhHalf(xiN);
    if (k != 0) {
      const Complex xiP = zeta - omega - 2.0 * k * L_;
      val += -kInvTwoPi * logAbs2SinhHalf(xiP);
    }
  }
  return val;
}

RobinEval AnnulusGreen::evalRobin(const Vec2& x) const {
  requireInterior(x);
  const double r = x.norm();
  const double s = std::log(r);

  // h(r) = (1/2pi) [ s - s^2/L + log(2 sinh(-s))
  //                  + sum_{k>=1} log(1 - sinh^2 s / sinh^2 kL) ].
  double val = s - s * s / L_ + std::log(2.0 * std::sinh(-s));
  double der = 1.0 - 2.0 * s / L_ + 1.0 / std::tanh(s);
  const double sh2 = std::sinh(s) * std::sinh(s);
  const double sh2d = std::sinh(2.0 * s);
  for (int k = 1; k <= K_; ++k) {
    const double shk = std::sinh(k * L_);
    const double denom = shk * shk - sh2;
    val += std::log1p(-sh2 / (shk * shk));
    der += -sh2d / denom;
  }

  RobinEval out;
  out.h = kInvTwoPi * val;
  out.gradH = kInvTwoPi * der / r * (x / r);
  return out;
}

std::shared_ptr<const GreenBackend> makeAnnulusGreen(double innerRadius,
                                                     int truncationK) {
  return std::make_shared<AnnulusGreen>(innerRadius, truncationK);
}

}  // namespace vortex
