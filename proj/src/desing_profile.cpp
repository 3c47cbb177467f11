#include <algorithm>
#include <cmath>

#include "vortex/desing.hpp"

namespace vortex {

double DesingParams::delta() const {
  return eps * std::pow(kTwoPi / std::abs(std::log(eps)), 0.5 * (p - 1.0));
}

void DesingParams::validate() const {
  if (!(eps > 0.0 && eps < 1.0))
    throw ValidationError("desing: eps must lie in (0,1)");
  if (!(p > 1.0)) throw ValidationError("desing: exponent p must exceed 1");
  if (!(R > 0.0)) throw ValidationError("desing: profile radius R must be positive");
  if (!(gridH > 0.0)) throw ValidationError("desing: grid spacing must be positive");
}

namespace {

struct ShootState {
  double w, u, mass;  // w, w', int_0^r s (w-a)_+^p / delta^2 ds
};

struct ShootResult {
  bool crossed = false;
  double rc = 0.0;
  double slope = 0.0;
  double mass = 0.0;
};

// One RK4 step of w' = u, u' = -u/r - (w-a)_+^p/d2, mass' = r (w-a)_+^p/d2.
ShootState rk4Step(double r, const ShootState& s, double h, double a, double p,
                   double d2) {
  auto f = [&](double rr, const ShootState& q) {
    const double pw = q.w > a ? std::pow(q.w - a, p) : 0.0;
    return ShootState{q.u, -q.u / rr - pw / d2, rr * pw / d2};
  };
  const ShootState k1 = f(r, s);
  const ShootState k2 =
      f(r + 0.5 * h, {s.w + 0.5 * h * k1.w, s.u + 0.5 * h * k1.u,
                      s.mass + 0.5 * h * k1.mass});
  const ShootState k3 =
      f(r + 0.5 * h, {s.w + 0.5 * h * k2.w, s.u + 0.5 * h * k2.u,
                      s.mass + 0.5 * h * k2.mass});
  const ShootState k4 =
      f(r + h, {s.w + h * k3.w, s.u + h * k3.u, s.mass + h * k3.mass});
  return {s.w + h / 6.0 * (k1.w + 2 * k2.w + 2 * k3.w + k4.w),
          s.u + h / 6.0 * (k1.u + 2 * k2.u + 2 * k3.u + k4.u),
          s.mass + h / 6.0 * (k1.mass + 2 * k2.mass + 2 * k3.mass + k4.mass)};
}

// Integrate from the regular series start at the origin until w crosses a
// (crossing bisected to machine precision) or r exceeds rMax.
ShootResult shoot(double w0, double a, double p, double delta, double rMax) {
  const double d2 = delta * delta;
  const double f0 = std::pow(w0 - a, p);
  const double ell = delta * std::pow(w0 - a, 0.5 * (1.0 - p));  // core scale
  const double h = std::min(ell, rMax) / 2000.0;

  // Series start: w = w0 - f0 r^2 / (4 d2), u = -f0 r / (2 d2).
  double r = 1e-6 * ell;
  ShootState s{w0 - f0 * r * r / (4.0 * d2), -f0 * r / (2.0 * d2),
               f0 * r * r / (2.0 * d2)};

  ShootResult out;
  while (r < rMax) {
    const ShootState next = rk4Step(r, s, h, a, p, d2);
    if (next.w <= a) {
      // Bisect the crossing within this step.
      double lo = 0.0, hi = h;
      ShootState sLo = s;
      for (int it = 0; it < 80 && hi - lo > 1e-16 * h; ++it) {
        const double mid = 0.5 * (lo + hi);
        const ShootState sMid = rk4Step(r, s, mid, a, p, d2);
        if (sMid.w <= a) {
          hi = mid;
        } else {
          lo = mid;
          sLo = sMid;
        }
      }
      const double hc = 0.5 * (lo + hi);
      const ShootState sc = rk4Step(r, s, hc, a, p, d2);
      out.crossed = true;
      out.rc = r + hc;
      out.slope = sc.u;
      out.mass = sc.mass;
      return out;
    }
    r += h;
    s = next;
  }
  return out;  // never reached the plateau level inside rMax
}

}  // namespace

RadialProfile radialProfile(double delta, double a, double R, double p) {
  if (!(delta > 0.0 && a > 0.0 && R > 0.0 && p > 1.0))
    throw ProfileError("radialProfile: need delta, a, R > 0 and p > 1");

  // Matching condition at the free boundary w = a: the outer logarithmic
  // solution w = kappa log(R/r) with kappa = a / log(R/rc) must continue the
  // slope, i.e. w'(rc) = -a / (rc log(R/rc)).
  auto mismatch = [&](double w0, ShootResult* res = nullptr) {
    const ShootResult sr = shoot(w0, a, p, delta, 0.98 * R);
    if (res) *res = sr;
    if (!sr.crossed) return -a;  // too shallow: no core inside the ball
    const double lg = std::log(R / sr.rc);
    if (lg <= 0.0) return -a;
    return -sr.slope * sr.rc * lg - a;
  };

  // Bracket by scanning amplitudes upward from just above the plateau.
  double lo = a * (1.0 + 1e-3);
  double fLo = mismatch(lo);
  double hi = lo;
  double fHi = fLo;
  bool bracketed = false;
  for (int k = 0; k < 60; ++k) {
    hi = a + (hi - a) * 2.0 + 0.5 * a;
    fHi = mismatch(hi);
    if ((fLo < 0.0) != (fHi < 0.0)) {
      bracketed = true;
      break;
    }
    lo = hi;
    fLo = fHi;
  }
  if (!bracketed)
    throw ProfileError("radialProfile: shooting bracket failure");

  for (int it = 0; it < 200 && (hi - lo) > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = mismatch(mid);
    if ((fm < 0.0) == (fLo < 0.0)) {
      lo = mid;
      fLo = fm;
    } else {
      hi = mid;
    }
  }
  const double w0 = 0.5 * (lo + hi);

  ShootResult sr;
  mismatch(w0, &sr);
  if (!sr.crossed) throw ProfileError("radialProfile: lost the core crossing");

  RadialProfile prof;
  prof.delta = delta;
  prof.a = a;
  prof.R = R;
  prof.p = p;
  prof.coreRadius = sr.rc;
  prof.centerValue = w0;
  prof.outerCoefficient = a / std::log(R / sr.rc);

  // Re-integrate on a clean uniform grid for interpolation and quadrature.
  const int nSamp = 4096;
  const double d2 = delta * delta;
  const double h = sr.rc / nSamp;
  prof.r.resize(nSamp + 1);
  prof.w.resize(nSamp + 1);
  prof.wPrime.resize(nSamp + 1);
  const double f0 = std::pow(w0 - a, p);
  double r = 1e-9 * sr.rc;
  ShootState s{w0 - f0 * r * r / (4.0 * d2), -f0 * r / (2.0 * d2),
               f0 * r * r / (2.0 * d2)};
  prof.r[0] = 0.0;
  prof.w[0] = w0;
  prof.wPrime[0] = 0.0;
  for (int k = 1; k <= nSamp; ++k) {
    const double target = k * h;
    s = rk4Step(r, s, target - r, a, p, d2);
    r = target;
    prof.r[k] = r;
    prof.w[k] = s.w;
    prof.wPrime[k] = s.u;
  }
  return prof;
}

double RadialProfile::value(double radius) const {
  if (radius >= R) return 0.0;
  if (radius >= coreRadius)
    return outerCoefficient * std::log(R / radius);
  const double h = coreRadius / (static_cast<double>(r.size()) - 1.0);
  const std::size_t k =
      std::min(r.size() - 2, static_cast<std::size_t>(radius / h));
  // Cubic Hermite on [r_k, r_{k+1}].
  const double t = (radius - r[k]) / h;
  const double h00 = (1 + 2 * t) * (1 - t) * (1 - t);
  const double h10 = t * (1 - t) * (1 - t);
  const double h01 = t * t * (3 - 2 * t);
  const double h11 = t * t * (t - 1);
  return h00 * w[k] + h * h10 * wPrime[k] + h01 * w[k + 1] +
         h * h11 * wPrime[k + 1];
}

double RadialProfile::derivative(double radius) const {
  if (radius >= R) return 0.0;
  if (radius >= coreRadius) return -outerCoefficient / radius;
  const double h = coreRadius / (static_cast<double>(r.size()) - 1.0);
  const std::size_t k =
      std::min(r.size() - 2, static_cast<std::size_t>(radius / h));
  const double t = (radius - r[k]) / h;
  const double d00 = 6 * t * (t - 1) / h;
  const double d10 = (1 - t) * (1 - 3 * t);
  const double d01 = -6 * t * (t - 1) / h;
  const double d11 = t * (3 * t - 2);
  return d00 * w[k] + d10 * wPrime[k] + d01 * w[k + 1] + d11 * wPrime[k + 1];
}

double RadialProfile::coreCirculation() const {
  // Simpson quadrature of 2 pi int (w-a)_+^p / delta^2 r dr over the core.
  const std::size_t n = r.size() - 1;  // even by construction
  const double h = coreRadius / static_cast<double>(n);
  auto f = [&](std::size_t k) {
    const double e = w[k] > a ? std::pow(w[k] - a, p) : 0.0;
    return r[k] * e / (delta * delta);
  };
  double sum = f(0) + f(n);
  for (std::size_t k = 1; k < n; ++k) sum += (k % 2 ? 4.0 : 2.0) * f(k);
  return kTwoPi * sum * h / 3.0;
}

}  // namespace vortex
