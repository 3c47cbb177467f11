#include <doctest.h>

#include <random>

#include "vortex/domain.hpp"

using namespace vortex;

TEST_CASE("disc distances") {
  const auto dom = makeUnitDisc();
  CHECK(dom->distToBoundary({0.0, 0.0}) == doctest::Approx(1.0));
  CHECK(dom->distToBoundary({0.9, 0.0}) == doctest::Approx(0.1));
  CHECK_THROWS_AS(dom->distToBoundary({1.5, 0.0}), DomainError);
}

TEST_CASE("annulus distances") {
  const auto dom = makeAnnulus(0.5);
  CHECK(dom->distToBoundary({0.6, 0.0}) == doctest::Approx(0.1));
  CHECK(dom->distToBoundary({0.9, 0.0}) == doctest::Approx(0.1));
  CHECK_THROWS_AS(dom->distToBoundary({0.25, 0.0}), DomainError);
}

TEST_CASE("containment") {
  const auto disc = makeUnitDisc();
  CHECK(disc->contains({0.5, 0.5}));
  CHECK_FALSE(disc->contains({1.0, 0.0}));
  const auto ann = makeAnnulus(0.5);
  CHECK_FALSE(ann->contains({0.25, 0.0}));
  CHECK(ann->contains({0.75, 0.0}));
}

TEST_CASE("disc boundary frame") {
  const auto dom = makeUnitDisc();
  const BoundaryFrame f = dom->boundaryFrame({0.9, 0.0});
  CHECK(f.d == doctest::Approx(0.1));
  CHECK(f.p.x() == doctest::Approx(1.0));
  CHECK(f.p.y() == doctest::Approx(0.0));
  CHECK(f.nu.x() == doctest::Approx(-1.0));
  CHECK(f.nu.y() == doctest::Approx(0.0));
  CHECK(f.xbar.x() == doctest::Approx(1.1));
  CHECK(f.xbar.y() == doctest::Approx(0.0));

  const BoundaryFrame g = dom->boundaryFrame({0.0, -0.95});
  CHECK(g.d == doctest::Approx(0.05));
  CHECK(g.nu.x() == doctest::Approx(0.0));
  CHECK(g.nu.y() == doctest::Approx(1.0));
  CHECK(g.xbar.x() == doctest::Approx(0.0));
  CHECK(g.xbar.y() == doctest::Approx(-1.05));

  CHECK_THROWS_AS(dom->boundaryFrame({0.1, 0.0}), CollarError);
}

TEST_CASE("frame invariants hold on random collar points") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> uth(0.0, 2 * kPi);

  for (const auto& dom :
       {makeUnitDisc(), makeAnnulus(0.5)}) {
    std::uniform_real_distribution<double> ud(1e-4, 0.99 * dom->stripWidth());
    for (int k = 0; k < 200; ++k) {
      const double th = uth(rng);
      const Vec2 dir(std::cos(th), std::sin(th));
      // Walk inward from a boundary point of the outer circle.
      const Vec2 x = (1.0 - ud(rng)) * dir;
      if (!dom->contains(x)) continue;
      if (!(dom->unsignedBoundaryDistance(x) < dom->stripWidth())) continue;
      const BoundaryFrame f = dom->boundaryFrame(x);
      CHECK(f.nu.norm() == doctest::Approx(1.0).epsilon(1e-12));
      CHECK((f.p - (x - f.d * f.nu)).norm() < 1e-12);
      CHECK((f.xbar - (x - 2.0 * f.d * f.nu)).norm() < 1e-12);
      CHECK((f.p - 0.5 * (x + f.xbar)).norm() < 1e-12);
      CHECK_FALSE(dom->contains(f.xbar));
    }
  }
}

TEST_CASE("reflection is an involution") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> uth(0.0, 2 * kPi);
  for (const auto& dom : {makeUnitDisc(), makeAnnulus(0.5)}) {
    std::uniform_real_distribution<double> ud(1e-4, 0.9 * dom->stripWidth());
    for (int k = 0; k < 100; ++k) {
      const double th = uth(rng);
      const Vec2 x = (1.0 - ud(rng)) * Vec2(std::cos(th), std::sin(th));
      if (!dom->contains(x)) continue;
      const Vec2 back = dom->reflect(dom->reflect(x));
      CHECK((back - x).norm() < 1e-10);
    }
  }
}

TEST_CASE("panel reflection involution within panel resolution") {
  const auto dom = makePanelDomain(regularPolygon(512));
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> uth(0.0, 2 * kPi);
  std::uniform_real_distribution<double> ud(1e-3, 0.9 * dom->stripWidth());
  for (int k = 0; k < 100; ++k) {
    const double th = uth(rng);
    const Vec2 x = (1.0 - ud(rng)) * Vec2(std::cos(th), std::sin(th));
    if (!dom->contains(x)) continue;
    const Vec2 back = dom->reflect(dom->reflect(x));
    CHECK((back - x).norm() < 1e-6);
  }
}

TEST_CASE("distance is 1-Lipschitz") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const auto dom = makeAnnulus(0.4);
  int tested = 0;
  while (tested < 300) {
    const Vec2 a(u(rng), u(rng));
    const Vec2 b(u(rng), u(rng));
    if (!dom->contains(a) || !dom->contains(b)) continue;
    ++tested;
    CHECK(std::abs(dom->distToBoundary(a) - dom->distToBoundary(b)) <=
          (a - b).norm() + 1e-14);
  }
}

TEST_CASE("panel frames match the disc closed form") {
  // Panel midpoints on the axes so the closed-form comparison points project
  // onto panel interiors.
  const auto panel = makePanelDomain(regularPolygon(512, 1.0, 0.5));
  const auto disc = makeUnitDisc();
  for (const Vec2& x : {Vec2(0.9, 0.0), Vec2(0.0, 0.93), Vec2(-0.62, 0.62)}) {
    if (!(panel->unsignedBoundaryDistance(x) < panel->stripWidth())) continue;
    const BoundaryFrame fp = panel->boundaryFrame(x);
    const BoundaryFrame fd = disc->boundaryFrame(x);
    CHECK(std::abs(fp.d - fd.d) < 1e-3);
    CHECK((fp.p - fd.p).norm() < 1e-3);
    CHECK((fp.nu - fd.nu).norm() < 1e-3);
    CHECK((fp.xbar - fd.xbar).norm() < 1e-3);
  }
}

TEST_CASE("panel boundary validation") {
  // Clockwise square: wrong orientation.
  CHECK_THROWS_AS(makePanelDomain({{0, 0}, {0, 1}, {1, 1}, {1, 0}}),
                  GeometryError);
  // Bowtie: self-intersecting.
  CHECK_THROWS_AS(makePanelDomain({{0, 0}, {1, 1}, {1, 0}, {0, 1}}),
                  GeometryError);
  // Valid CCW square.
  const auto sq = makePanelDomain({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
  CHECK(sq->contains({0.5, 0.5}));
  CHECK_FALSE(sq->contains({1.5, 0.5}));
  CHECK(sq->inradius() == doctest::Approx(0.5).epsilon(0.05));
}
