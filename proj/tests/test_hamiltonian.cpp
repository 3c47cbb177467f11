#include <doctest.h>

#include <cmath>
#include <random>

#include "vortex/hamiltonian.hpp"

using namespace vortex;

namespace {

// Finite-difference oracle for gradients of a scalar functional.
template <typename F>
std::vector<Vec2> fdGradient(const F& f, const Configuration& x,
                             double step = 1e-6) {
  std::vector<Vec2> g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (int c = 0; c < 2; ++c) {
      Configuration xp = x, xm = x;
      xp[i][c] += step;
      xm[i][c] -= step;
      g[i][c] = (f(xp) - f(xm)) / (2.0 * step);
    }
  }
  return g;
}

double maxRelError(const std::vector<Vec2>& a, const std::vector<Vec2>& b) {
  double scale = 1.0;
  for (const Vec2& v : a) scale = std::max(scale, v.norm());
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    worst = std::max(worst, (a[i] - b[i]).norm() / scale);
  return worst;
}

Configuration randomConfig(const GreenBackend& b, int n, std::mt19937_64& rng,
                           double sep) {
  for (int attempt = 0; attempt < 1000; ++attempt) {
    Configuration x;
    for (int i = 0; i < n; ++i) x.push_back(b.samplePoint(rng, sep));
    bool ok = true;
    for (std::size_t i = 0; i < x.size() && ok; ++i)
      for (std::size_t j = i + 1; j < x.size(); ++j)
        if ((x[i] - x[j]).norm() < sep) ok = false;
    if (ok) return x;
  }
  throw GeometryError("randomConfig failed");
}

}  // namespace

TEST_CASE("single vortex at the disc center") {
  HamiltonianModel m(makeDiscGreen(), Strengths{1.0});
  CHECK(m.evalH({{0.0, 0.0}}) == doctest::Approx(0.0));  // h(0) = 0
  const auto g = m.gradH({{0.0, 0.0}});
  CHECK(g[0].norm() < 1e-14);
  // N=1 coincidence: Phi = H when flux and extra vanish.
  const Configuration x = {{0.3, -0.2}};
  CHECK(m.evalPhi(x).phi == doctest::Approx(m.evalH(x)).epsilon(1e-14));
}

TEST_CASE("opposite pair symmetry on the disc") {
  HamiltonianModel m(makeDiscGreen(), Strengths{1.0, -1.0});
  const auto b = makeDiscGreen();
  const double a = 0.4;
  const Configuration x = {{a, 0.0}, {-a, 0.0}};
  const double expected =
      2.0 * b->evalRobin({a, 0.0}).h - 2.0 * b->evalG({a, 0.0}, {-a, 0.0}).G;
  CHECK(m.evalH(x) == doctest::Approx(expected).epsilon(1e-14));
  // Reflection symmetry kills the e2 components of the gradient.
  const auto g = m.gradH(x);
  CHECK(std::abs(g[0].y()) < 1e-12);
  CHECK(std::abs(g[1].y()) < 1e-12);
}

TEST_CASE("permutation invariance") {
  HamiltonianModel m(makeDiscGreen(), Strengths{1.0, -2.0, 0.5});
  HamiltonianModel mPerm(makeDiscGreen(), Strengths{0.5, 1.0, -2.0});
  const Configuration x = {{0.4, 0.1}, {-0.3, 0.2}, {0.0, -0.5}};
  const Configuration xPerm = {x[2], x[0], x[1]};
  CHECK(m.evalH(x) == doctest::Approx(mPerm.evalH(xPerm)).epsilon(1e-14));
}

TEST_CASE("configuration validation") {
  HamiltonianModel m(makeDiscGreen(), Strengths{1.0, -1.0});
  CHECK_THROWS_AS(m.evalH({{0.2, 0.0}, {1.2, 0.0}}), ConfigurationError);
  CHECK_THROWS_AS(m.evalH({{0.2, 0.0}, {0.2, 0.0}}), ConfigurationError);
  CHECK_THROWS_AS(m.evalH({{0.2, 0.0}}), ConfigurationError);
  CHECK_THROWS_AS(Strengths({1.0, 0.0}), ValidationError);
}

TEST_CASE("gradients match the finite-difference oracle on every backend") {
  std::mt19937_64 rng(2024);
  const std::shared_ptr<const GreenBackend> backends[] = {
      makeDiscGreen(), makeAnnulusGreen(0.5),
      makeBemGreen(makeUnitDisc(), 192)};
  for (const auto& b : backends) {
    HamiltonianModel m(b, Strengths{1.0, -1.0, 1.0},
                       HarmonicPoly::linear({0.2, -0.1}));
    const double sep = 0.08 * b->domain().inradius();
    for (int k = 0; k < 6; ++k) {
      const Configuration x = randomConfig(*b, 3, rng, sep);
      const auto gH = m.gradH(x);
      const auto fdH = fdGradient([&](const Configuration& y) {
        return m.evalH(y);
      }, x);
      CHECK(maxRelError(gH, fdH) < 1e-6);

      const PhiEval phi = m.evalPhi(x);
      const auto fdPhi = fdGradient([&](const Configuration& y) {
        return m.evalPhi(y).phi;
      }, x);
      CHECK(maxRelError(phi.grad, fdPhi) < 1e-6);
    }
  }
}

TEST_CASE("evalAll agrees with the piecewise evaluations") {
  std::mt19937_64 rng(77);
  const auto b = makeAnnulusGreen(0.4);
  HamiltonianModel m(b, Strengths{2.0, -1.0, 1.5},
                     HarmonicPoly::linear({0.1, 0.3}));
  const Configuration x = randomConfig(*b, 3, rng, 0.05);
  const auto all = m.evalAll(x);
  CHECK(all.H == doctest::Approx(m.evalH(x)).epsilon(1e-14));
  CHECK(all.phi == doctest::Approx(m.evalPhi(x).phi).epsilon(1e-14));
  CHECK(maxRelError(all.gradH, m.gradH(x)) < 1e-14);
  CHECK(maxRelError(all.gradPhi, m.evalPhi(x).grad) < 1e-14);
}

TEST_CASE("Phi drops to -infinity toward collisions and the boundary") {
  HamiltonianModel m(makeDiscGreen(), Strengths{1.0, -1.0});

  // Pair collision path.
  double prev = std::numeric_limits<double>::max();
  for (double d : {0.2, 0.05, 0.01, 1e-3, 1e-5}) {
    const double phi = m.evalPhi({{0.1, 0.0}, {0.1 + d, 0.0}}).phi;
    CHECK(phi < prev);
    prev = phi;
  }
  CHECK(prev < -2.0);

  // Boundary path.
  prev = std::numeric_limits<double>::max();
  for (double d : {0.3, 0.1, 0.01, 1e-3, 1e-5, 1e-8}) {
    const double phi = m.evalPhi({{1.0 - d, 0.0}, {-0.2, 0.0}}).phi;
    CHECK(phi < prev);
    prev = phi;
  }
  CHECK(prev < -2.0);
}

TEST_CASE("Kirchhoff-Routh flux term identities") {
  const auto b = makeDiscGreen();
  const Configuration x = {{0.4, 0.1}, {-0.2, -0.3}};

  SUBCASE("constant flux shifts by 2 c sum Gamma") {
    HamiltonianModel base(b, Strengths{1.0, -1.0});
    HamiltonianModel shifted(b, Strengths{1.0, -1.0}, HarmonicPoly::constant(5.0));
    // Zero total strength: identical values.
    CHECK(shifted.evalKR(x) == doctest::Approx(base.evalKR(x)).epsilon(1e-14));
    HamiltonianModel base2(b, Strengths{2.0, -1.0});
    HamiltonianModel shifted2(b, Strengths{2.0, -1.0},
                              HarmonicPoly::constant(5.0));
    CHECK(shifted2.evalKR(x) - base2.evalKR(x) ==
          doctest::Approx(2.0 * 5.0 * 1.0).epsilon(1e-12));
  }

  SUBCASE("linear flux adds 2 sum Gamma_i x_i . d exactly") {
    const Vec2 d(1.0, 0.0);
    HamiltonianModel base(b, Strengths{1.0, -1.0});
    HamiltonianModel lin(b, Strengths{1.0, -1.0}, HarmonicPoly::linear(d));
    const double expected = 2.0 * (x[0].x() - x[1].x());
    CHECK(lin.evalKR(x) - base.evalKR(x) ==
          doctest::Approx(expected).epsilon(1e-13));
  }

  SUBCASE("evalKR coincides with evalH when no extra term is set") {
    HamiltonianModel m(b, Strengths{1.0, -1.0}, HarmonicPoly::linear({0.3, 0.7}));
    CHECK(m.evalKR(x) == doctest::Approx(m.evalH(x)).epsilon(1e-14));
  }

  SUBCASE("extra term enters evalH but not evalKR") {
    ExtraTerm extra;
    extra.value = [](const Configuration& y) { return y[0].x() * y[0].x(); };
    extra.grad = [](const Configuration& y) {
      std::vector<Vec2> g(y.size(), Vec2::Zero());
      g[0] = {2.0 * y[0].x(), 0.0};
      return g;
    };
    HamiltonianModel m(b, Strengths{1.0, -1.0}, HarmonicPoly::zero(), extra);
    CHECK(m.evalH(x) - m.evalKR(x) ==
          doctest::Approx(x[0].x() * x[0].x()).epsilon(1e-13));
    const auto fd = fdGradient([&](const Configuration& y) {
      return m.evalH(y);
    }, x);
    CHECK(maxRelError(m.gradH(x), fd) < 1e-6);
  }
}

TEST_CASE("disc Hamiltonian is rotation invariant") {
  HamiltonianModel m(makeDiscGreen(), Strengths{1.0, -1.0, 1.0});
  const Configuration x = {{0.4, 0.1}, {-0.2, -0.3}, {0.1, 0.55}};
  const double h0 = m.evalH(x);
  for (double ang : {0.3, 1.7, 4.0}) {
    const double c = std::cos(ang), s = std::sin(ang);
    Configuration r(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
      r[i] = {c * x[i].x() - s * x[i].y(), s * x[i].x() + c * x[i].y()};
    CHECK(std::abs(m.evalH(r) - h0) < 1e-10);
  }
}

TEST_CASE("N=2 counter-rotating superlevel sets avoid the boundary") {
  // H -> -infinity along paths to collisions and to the boundary.
  HamiltonianModel m(makeDiscGreen(), Strengths{1.0, -1.0});
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> uth(0.0, 2 * kPi);
  for (int path = 0; path < 20; ++path) {
    const double th = uth(rng);
    const Vec2 u(std::cos(th), std::sin(th));
    const bool toBoundary = path % 2 == 0;
    double prev = std::numeric_limits<double>::max();
    for (double t : {0.3, 0.1, 0.03, 0.01, 1e-3, 1e-4}) {
      Configuration x;
      if (toBoundary) {
        x = {(1.0 - t) * u, Vec2(-0.3 * u.x(), -0.3 * u.y())};
      } else {
        x = {Vec2(0.2 * u.x(), 0.2 * u.y()),
             Vec2(0.2 * u.x(), 0.2 * u.y()) + t * Vec2(-u.y(), u.x())};
      }
      const double h = m.evalH(x);
      CHECK(h < prev);
      prev = h;
    }
    CHECK(prev < -1.0);
  }
}
