#include <doctest.h>

#include "vortex/hypotheses.hpp"

using namespace vortex;

TEST_CASE("hyp-1 on the paper's examples") {
  std::vector<std::string> fails;
  CHECK(checkHyp1(Strengths{1.0, -1.0, 1.0, -1.0}));
  CHECK_FALSE(checkHyp1(Strengths{2.0, -1.0, 2.0}, nullptr, &fails));
  CHECK(!fails.empty());  // subset {1,2,3} sums to exactly zero
  CHECK_FALSE(checkHyp1(Strengths{1.0, 1.0, -1.0}));
}

TEST_CASE("hyp-2 triangle-type inequalities") {
  CHECK(checkHyp2(Strengths{1.0, -1.0, 1.0, -1.0}));
  CHECK_FALSE(checkHyp2(Strengths{1.0, -3.0, 1.0, -1.0}));
  CHECK(checkHyp2(Strengths{0.6, -1.0, 0.6, -1.0}));
  CHECK_THROWS_AS(checkHyp2(Strengths{1.0, -1.0}), ArityError);
}

TEST_CASE("applicability decisions") {
  CHECK(applicability(Strengths{1.0, -1.0}).applicable == Theorem::N2);
  CHECK(applicability(Strengths{1.0, -1.0, 1.0}).applicable == Theorem::N3);
  CHECK(applicability(Strengths{1.0, -1.0, 1.0, -1.0}).applicable ==
        Theorem::N4);

  const HypothesisReport none = applicability(Strengths{1.0, 1.0});
  CHECK(none.applicable == Theorem::None);
  CHECK(!none.failures.empty());

  CHECK(applicability(Strengths{2.0, -1.0, 2.0}).applicable == Theorem::None);
  CHECK_THROWS_AS(applicability(Strengths{1.0}), ArityError);
  CHECK_THROWS_AS(applicability(Strengths{1.0, -1.0, 1.0, -1.0, 1.0}),
                  ArityError);
}

TEST_CASE("reports are invariant under scaling of the strengths") {
  const Strengths base{1.0, -1.0, 1.0, -1.0};
  const auto ref = applicability(base);
  for (double c : {2.0, -1.0, 0.5}) {
    std::vector<double> scaled;
    for (double g : base.values()) scaled.push_back(c * g);
    const auto rep = applicability(Strengths(scaled));
    CHECK(rep.applicable == ref.applicable);
    CHECK(rep.hyp1 == ref.hyp1);
    CHECK(rep.hyp2 == ref.hyp2);
  }
}

TEST_CASE("reports are invariant under order reversal") {
  for (const auto& gam :
       {std::vector<double>{1.0, -1.0, 1.0, -1.0},
        std::vector<double>{0.6, -1.0, 0.6, -1.0},
        std::vector<double>{1.0, -2.0, 1.5},
        std::vector<double>{1.0, -3.0, 1.0, -1.0}}) {
    std::vector<double> rev(gam.rbegin(), gam.rend());
    CHECK(applicability(Strengths(gam)).applicable ==
          applicability(Strengths(rev)).applicable);
  }
}

TEST_CASE("boundary cases are flagged, not silently passed") {
  const auto rep = applicability(Strengths{2.0, -1.0, 2.0});
  CHECK(rep.applicable == Theorem::None);
  bool flagged = false;
  for (const auto& w : rep.witnesses)
    if (w.boundary) flagged = true;
  CHECK(flagged);
}
