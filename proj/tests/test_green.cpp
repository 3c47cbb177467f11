#include <doctest.h>

#include <cmath>
#include <random>

#include "vortex/green.hpp"

using namespace vortex;

namespace {

// Independent annulus oracle: bilinear Fourier series of the Dirichlet Green
// function, radial ODE solved per mode. Valid when the radii are separated
// (the series converges like (r_min/r_max)^n).
double annulusFourierOracle(double q, const Vec2& x, const Vec2& y) {
  const double r = x.norm(), rho = y.norm();
  const double dth = std::atan2(x.y(), x.x()) - std::atan2(y.y(), y.x());
  const double rLo = std::min(r, rho), rHi = std::max(r, rho);
  const double logq = std::log(q);

  // n = 0 mode.
  double g = std::log(1.0 / rHi) * std::log(rLo / q) / (-logq);
  for (int n = 1; n < 400; ++n) {
    const double ua = std::pow(rLo / q, n) - std::pow(q / rLo, n);
    const double ub = std::pow(1.0 / rHi, n) - std::pow(rHi, n);
    const double denom = 2.0 * n * (std::pow(1.0 / q, n) - std::pow(q, n));
    const double term = ua * ub / denom * std::cos(n * dth);
    g += 2.0 * term;
    if (std::abs(ua * ub / denom) < 1e-17 && n > 8) break;
  }
  return g * kInvTwoPi;
}

void checkGradientsAgainstFd(const GreenBackend& b, const Vec2& x,
                             const Vec2& y, double tol) {
  const GreenEval e = b.evalG(x, y);
  const double step = 1e-5;
  for (int c = 0; c < 2; ++c) {
    Vec2 xp = x, xm = x;
    xp[c] += step;
    xm[c] -= step;
    const double fdx = (b.evalG(xp, y).G - b.evalG(xm, y).G) / (2 * step);
    CHECK(std::abs(fdx - e.gradX[c]) <=
          tol * std::max(1.0, std::abs(e.gradX[c])));
    Vec2 yp = y, ym = y;
    yp[c] += step;
    ym[c] -= step;
    const double fdy = (b.evalG(x, yp).G - b.evalG(x, ym).G) / (2 * step);
    CHECK(std::abs(fdy - e.gradY[c]) <=
          tol * std::max(1.0, std::abs(e.gradY[c])));
  }
}

}  // namespace

TEST_CASE("disc closed form values") {
  const auto b = makeDiscGreen();
  // g(0, y) = 0, so G(0,y) is the bare log kernel.
  CHECK(b->evalG({0.0, 0.0}, {0.5, 0.0}).G ==
        doctest::Approx(-kInvTwoPi * std::log(0.5)).epsilon(1e-12));
  CHECK(b->regularPart({0.0, 0.0}, {0.5, 0.0}) ==
        doctest::Approx(0.0).epsilon(1e-12));

  // Robin closed form.
  CHECK(b->evalRobin({0.0, 0.0}).h == doctest::Approx(0.0));
  CHECK(b->evalRobin({0.9, 0.0}).h ==
        doctest::Approx(kInvTwoPi * std::log(0.19)).epsilon(1e-12));
}

TEST_CASE("disc symmetry and boundary limit") {
  const auto b = makeDiscGreen();
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-0.95, 0.95);
  for (int k = 0; k < 200; ++k) {
    const Vec2 x(u(rng), u(rng)), y(u(rng), u(rng));
    if (x.norm() >= 0.99 || y.norm() >= 0.99 || (x - y).norm() < 1e-3) continue;
    CHECK(std::abs(b->evalG(x, y).G - b->evalG(y, x).G) < 1e-12);
    CHECK(b->evalG(x, y).G > 0.0);
  }
  // Dirichlet decay: G -> 0 as y walks to the boundary.
  const Vec2 x(0.2, 0.1);
  double prev = b->evalG(x, {0.5, 0.0}).G;
  for (double r : {0.9, 0.99, 0.999, 0.9999}) {
    const double g = b->evalG(x, {r, 0.0}).G;
    CHECK(g < prev);
    prev = g;
  }
  CHECK(prev < 1e-3);
}

TEST_CASE("disc errors") {
  const auto b = makeDiscGreen();
  CHECK_THROWS_AS(b->evalG({0.2, 0.0}, {0.2, 0.0}), SingularityError);
  CHECK_THROWS_AS(b->evalG({1.2, 0.0}, {0.2, 0.0}), DomainError);
  CHECK_THROWS_AS(b->evalRobin({1.0, 0.0}), DomainError);
}

TEST_CASE("disc gradients match finite differences") {
  const auto b = makeDiscGreen();
  checkGradientsAgainstFd(*b, {0.3, 0.2}, {-0.4, 0.5}, 1e-7);
  checkGradientsAgainstFd(*b, {0.3, 0.2}, {0.35, 0.21}, 1e-5);
  // Robin gradient.
  const Vec2 x(0.4, -0.3);
  const RobinEval r = b->evalRobin(x);
  const double step = 1e-6;
  for (int c = 0; c < 2; ++c) {
    Vec2 xp = x, xm = x;
    xp[c] += step;
    xm[c] -= step;
    const double fd = (b->evalRobin(xp).h - b->evalRobin(xm).h) / (2 * step);
    CHECK(fd == doctest::Approx(r.gradH[c]).epsilon(1e-7));
  }
}

TEST_CASE("annulus series against the Fourier oracle") {
  const double q = 0.5;
  const auto b = makeAnnulusGreen(q);
  // Radially separated pairs where the oracle series converges fast.
  const std::pair<Vec2, Vec2> pairs[] = {
      {{0.6, 0.0}, {0.85, 0.1}},
      {{0.55, 0.2}, {-0.8, 0.3}},
      {{0.0, 0.62}, {0.9, 0.0}},
      {{-0.57, -0.33}, {0.4, 0.75}},
  };
  for (const auto& [x, y] : pairs) {
    const double oracle = annulusFourierOracle(q, x, y);
    CHECK(b->evalG(x, y).G == doctest::Approx(oracle).epsilon(1e-10));
  }
}

TEST_CASE("annulus series invariants") {
  const double q = 0.5;
  const auto b = makeAnnulusGreen(q);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ur(0.52, 0.98);
  std::uniform_real_distribution<double> uth(0.0, 2 * kPi);

  SUBCASE("symmetry and positivity") {
    for (int k = 0; k < 200; ++k) {
      const double t1 = uth(rng), t2 = uth(rng);
      const Vec2 x = ur(rng) * Vec2(std::cos(t1), std::sin(t1));
      const Vec2 y = ur(rng) * Vec2(std::cos(t2), std::sin(t2));
      if ((x - y).norm() < 1e-3) continue;
      CHECK(std::abs(b->evalG(x, y).G - b->evalG(y, x).G) < 1e-12);
      CHECK(b->evalG(x, y).G > -1e-13);
    }
  }

  SUBCASE("Dirichlet boundary values on both circles") {
    const Vec2 x(0.7, 0.1);
    for (double r : {0.5001, 0.9999}) {
      for (double th : {0.3, 2.0, 4.4}) {
        const Vec2 y = r * Vec2(std::cos(th), std::sin(th));
        CHECK(std::abs(b->evalG(x, y).G) < 2e-3);
      }
    }
  }

  SUBCASE("harmonicity away from the pole") {
    const Vec2 y(0.8, 0.2);
    const double hh = 1e-4;
    for (const Vec2& x : {Vec2(0.6, -0.1), Vec2(-0.7, 0.3)}) {
      const double lap =
          (b->evalG({x.x() + hh, x.y()}, y).G +
           b->evalG({x.x() - hh, x.y()}, y).G +
           b->evalG({x.x(), x.y() + hh}, y).G +
           b->evalG({x.x(), x.y() - hh}, y).G - 4.0 * b->evalG(x, y).G) /
          (hh * hh);
      CHECK(std::abs(lap) < 1e-4);
    }
  }

  SUBCASE("truncation convergence: K vs K+10") {
    const auto b2 = makeAnnulusGreen(q, static_cast<const AnnulusGreen&>(*b)
                                            .truncationK() + 10);
    for (int k = 0; k < 50; ++k) {
      const double t1 = uth(rng), t2 = uth(rng);
      const Vec2 x = ur(rng) * Vec2(std::cos(t1), std::sin(t1));
      const Vec2 y = ur(rng) * Vec2(std::cos(t2), std::sin(t2));
      if ((x - y).norm() < 1e-3) continue;
      CHECK(std::abs(b->evalG(x, y).G - b2->evalG(x, y).G) < 1e-12);
    }
  }

  SUBCASE("gradients match finite differences") {
    checkGradientsAgainstFd(*b, {0.7, 0.05}, {-0.6, 0.4}, 1e-6);
    checkGradientsAgainstFd(*b, {0.62, 0.0}, {0.66, 0.02}, 1e-5);
  }

  SUBCASE("Robin function and gradient") {
    // h(x) = lim G(x,y) + log|x-y|/2pi along y -> x.
    const Vec2 x(0.72, 0.31);
    const RobinEval r = b->evalRobin(x);
    CHECK(r.h == doctest::Approx(b->regularPart(x, x + Vec2(1e-7, 0.0)))
                     .epsilon(1e-5));
    const double step = 1e-6;
    for (int c = 0; c < 2; ++c) {
      Vec2 xp = x, xm = x;
      xp[c] += step;
      xm[c] -= step;
      const double fd = (b->evalRobin(xp).h - b->evalRobin(xm).h) / (2 * step);
      CHECK(fd == doctest::Approx(r.gradH[c]).epsilon(1e-6));
    }
    // h -> -infinity at both boundary circles.
    CHECK(b->evalRobin({0.9999, 0.0}).h < -1.0);
    CHECK(b->evalRobin({0.5001, 0.0}).h < -1.0);
  }
}

TEST_CASE("BEM disc matches the closed form") {
  const auto dom = makeUnitDisc();
  const auto bem = makeBemGreen(dom, 256);
  const auto exact = makeDiscGreen();
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-0.95, 0.95);
  int tested = 0;
  while (tested < 40) {
    const Vec2 x(u(rng), u(rng)), y(u(rng), u(rng));
    if (x.norm() > 0.95 || y.norm() > 0.95 || (x - y).norm() < 0.05) continue;
    ++tested;
    const GreenEval eb = bem->evalG(x, y);
    const GreenEval ee = exact->evalG(x, y);
    CHECK(std::abs(eb.G - ee.G) < 1e-7);
    CHECK((eb.gradX - ee.gradX).norm() < 1e-5);
    CHECK((eb.gradY - ee.gradY).norm() < 1e-5);
  }
  // Robin function as well.
  const Vec2 x(0.4, 0.2);
  CHECK(bem->evalRobin(x).h == doctest::Approx(exact->evalRobin(x).h)
                                   .epsilon(1e-7));
  CHECK((bem->evalRobin(x).gradH - exact->evalRobin(x).gradH).norm() < 1e-6);
}

TEST_CASE("BEM boundary residual and polygon mode") {
  const auto dom = makeUnitDisc();
  const auto bem = makeBemGreen(dom, 128);
  CHECK(static_cast<const BemGreen&>(*bem).boundaryResidual({0.3, 0.1}) <
        1e-12);

  // Polygonal boundary: a 256-gon behaves like the disc away from the
  // boundary, at panel resolution.
  const auto poly = makeBemGreen(makePanelDomain(regularPolygon(256)), 0);
  const auto exact = makeDiscGreen();
  const Vec2 x(0.3, -0.2), y(-0.5, 0.15);
  CHECK(std::abs(poly->evalG(x, y).G - exact->evalG(x, y).G) < 1e-3);
  CHECK_THROWS_AS(makeBemGreen(makeAnnulus(0.5), 128), GeometryError);
}

TEST_CASE("psi diagnostic stays bounded in the collar") {
  for (const auto& b : {makeDiscGreen(), makeAnnulusGreen(0.5)}) {
    const double eps0 = b->domain().stripWidth();
    double worst = 0.0;
    for (double d = 1e-4; d < 0.9 * eps0; d *= 1.7) {
      for (double sep : {0.5, 1.0, 3.0}) {
        const Vec2 x(1.0 - d, 0.0);
        const Vec2 y((1.0 - d) * std::cos(sep * d), (1.0 - d) * std::sin(sep * d));
        if (!b->domain().contains(x) || !b->domain().contains(y)) continue;
        if ((x - y).norm() < 1e-12) continue;
        worst = std::max(worst, std::abs(b->psiDiagnostic(x, y)));
      }
    }
    CHECK(worst < 2.0);  // bounded, no blow-up as d -> 0
    CHECK(worst > 0.0);
  }
}

TEST_CASE("contract checker") {
  const auto disc = makeDiscGreen();
  const ContractReport rep = disc->checkContracts(2000, 31);
  CHECK(rep.allOk());
  CHECK(rep.symmetryWorst < 1e-10);

  const auto ann = makeAnnulusGreen(0.5);
  CHECK(ann->checkContracts(1000, 32).allOk());
}

// Boundary asymptotics of the Robin function and pair interactions
// (normal-ray sweeps on the disc).
TEST_CASE("Robin and Green boundary asymptotics") {
  const auto b = makeDiscGreen();

  SUBCASE("h ~ log(2d)/2pi with bounded defect") {
    for (double d = 1e-4; d <= 0.1; d *= 2.0) {
      const Vec2 x(1.0 - d, 0.0);
      const double defect =
          std::abs(b->evalRobin(x).h - kInvTwoPi * std::log(2.0 * d));
      CHECK(defect < 0.25);
    }
  }

  SUBCASE("grad h ~ nu/(2 pi d)") {
    for (double d : {1e-4, 1e-3, 1e-2}) {
      const Vec2 x(1.0 - d, 0.0);
      const Vec2 nu(-1.0, 0.0);
      const Vec2 lead = nu / (kTwoPi * d);
      CHECK(d * (b->evalRobin(x).gradH - lead).norm() < 1e-2);
    }
  }

  SUBCASE("pair expansion G = -log|x-y|/2pi + log|x-ybar|/2pi + O(1)") {
    const auto& dom = b->domain();
    double worst = 0.0;
    for (double d = 1e-4; d <= 0.1; d *= 2.0) {
      const Vec2 x(1.0 - d, 0.0);
      const Vec2 y(1.0 - 2.2 * d, 0.002);
      const Vec2 ybar = dom.reflect(y);
      const double val = b->evalG(x, y).G +
                         kInvTwoPi * std::log((x - y).norm()) -
                         kInvTwoPi * std::log((x - ybar).norm());
      worst = std::max(worst, std::abs(val));
    }
    CHECK(worst < 1.0);
  }

  SUBCASE("reflected distance identity near a boundary point") {
    const auto& dom = b->domain();
    double prev = 1.0;
    for (double d : {1e-2, 1e-3, 1e-4}) {
      const Vec2 x(std::sqrt(1 - 0.0), 0.0);  // boundary point (1,0)
      const Vec2 xi((1.0 - d) * std::cos(0.5 * d), (1.0 - d) * std::sin(0.5 * d));
      const Vec2 xj((1.0 - 1.7 * d) * std::cos(-0.8 * d),
                    (1.0 - 1.7 * d) * std::sin(-0.8 * d));
      const double di = dom.distToBoundary(xi);
      const double dj = dom.distToBoundary(xj);
      const Vec2 xibar = dom.reflect(xi);
      const double lhs = (xibar - xj).squaredNorm();
      const double rhs = (xi - xj).squaredNorm() + 4.0 * di * dj;
      const double rel = std::abs(lhs - rhs) / (xi - xj).squaredNorm();
      CHECK(rel < prev + 1e-12);  // shrinking along the sweep
      prev = rel;
    }
    CHECK(prev < 1e-2);
  }
}
