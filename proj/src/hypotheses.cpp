#include "vortex/hypotheses.hpp"

#include <cmath>
#include <sstream>

namespace vortex {

namespace {

// Open strict inequalities get an epsilon band flagged as boundary cases
// instead of a pass/fail verdict.
constexpr double kBand = 1e-12;

std::string subsetLabel(const std::vector<int>& subset) {
  std::ostringstream os;
  os << "{";
  for (std::size_t k = 0; k < subset.size(); ++k)
    os << (k ? "," : "") << subset[k] + 1;
  os << "}";
  return os.str();
}

}  // namespace

bool checkHyp1(const Strengths& gamma, std::vector<SubsetWitness>* witnesses,
               std::vector<std::string>* failures) {
  const int n = gamma.size();
  if (n < 2) throw ArityError("hyp-1 needs at least two vortices");

  bool ok = true;
  for (int i = 0; i + 1 < n; ++i) {
    const double prod = gamma[i] * gamma[i + 1];
    if (!(prod < -kBand)) {
      ok = false;
      if (failures) {
        std::ostringstream os;
        os << "Gamma_" << i + 1 << " Gamma_" << i + 2 << " = " << prod
           << " is not negative";
        failures->push_back(os.str());
      }
    }
  }

  // All subsets with |I| >= 3, enumerated by bitmask (N <= 4 in practice).
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    std::vector<int> subset;
    for (int i = 0; i < n; ++i)
      if (mask & (1u << i)) subset.push_back(i);
    if (subset.size() < 3) continue;

    double sum = 0.0;  // ordered pairs: twice the i<j sum
    for (std::size_t a = 0; a < subset.size(); ++a)
      for (std::size_t b = 0; b < subset.size(); ++b)
        if (a != b) sum += gamma[subset[a]] * gamma[subset[b]];

    SubsetWitness w;
    w.subset = subset;
    w.pairSum = sum;
    w.strict = sum < -kBand;
    w.boundary = std::abs(sum) <= kBand;
    if (witnesses) witnesses->push_back(w);
    if (!w.strict) {
      ok = false;
      if (failures) {
        std::ostringstream os;
        os << "subset " << subsetLabel(subset) << " pair sum = " << sum
           << (w.boundary ? " (boundary case)" : " is not negative");
        failures->push_back(os.str());
      }
    }
  }
  return ok;
}

bool checkHyp2(const Strengths& gamma, std::vector<std::string>* failures) {
  if (gamma.size() != 4) throw ArityError("hyp-2 is defined for N = 4 only");
  bool ok = true;
  const double a1 = std::abs(gamma[0]), a2 = std::abs(gamma[1]),
               a3 = std::abs(gamma[2]), a4 = std::abs(gamma[3]);
  if (!(a2 - (a1 + a3) < -kBand)) {
    ok = false;
    if (failures) {
      std::ostringstream os;
      os << "|Gamma_2| = " << a2 << " is not below |Gamma_1|+|Gamma_3| = "
         << a1 + a3;
      failures->push_back(os.str());
    }
  }
  if (!(a3 - (a2 + a4) < -kBand)) {
    ok = false;
    if (failures) {
      std::ostringstream os;
      os << "|Gamma_3| = " << a3 << " is not below |Gamma_2|+|Gamma_4| = "
         << a2 + a4;
      failures->push_back(os.str());
    }
  }
  return ok;
}

HypothesisReport applicability(const Strengths& gamma) {
  const int n = gamma.size();
  if (n < 2 || n > 4)
    throw ArityError("existence theorems cover 2 <= N <= 4 only");

  HypothesisReport rep;
  rep.n = n;

  if (n == 2) {
    const double prod = gamma[0] * gamma[1];
    if (prod < -kBand) {
      rep.applicable = Theorem::N2;
      rep.hyp1 = true;
    } else {
      std::ostringstream os;
      os << "Gamma_1 Gamma_2 = " << prod << " is not negative";
      rep.failures.push_back(os.str());
      if (std::abs(prod) <= kBand)
        rep.boundaryCases.push_back("Gamma_1 Gamma_2 within epsilon of zero");
    }
    return rep;
  }

  rep.hyp1 = checkHyp1(gamma, &rep.witnesses, &rep.failures);
  for (const auto& w : rep.witnesses)
    if (w.boundary)
      rep.boundaryCases.push_back("subset " + subsetLabel(w.subset) +
                                  " pair sum within epsilon of zero");

  if (n == 3) {
    rep.applicable = rep.hyp1 ? Theorem::N3 : Theorem::None;
  } else {
    rep.hyp2 = checkHyp2(gamma, &rep.failures);
    rep.applicable = (rep.hyp1 && rep.hyp2) ? Theorem::N4 : Theorem::None;
  }
  return rep;
}

const char* theoremName(Theorem t) {
  switch (t) {
    case Theorem::N2: return "N2";
    case Theorem::N3: return "N3";
    case Theorem::N4: return "N4";
    case Theorem::None: return "none";
  }
  return "none";
}

std::string HypothesisReport::summary() const {
  std::ostringstream os;
  os << "N = " << n << ", applicable theorem: " << theoremName(applicable)
     << "\n";
  for (const auto& w : witnesses)
    os << "  subset " << subsetLabel(w.subset) << ": pair sum = " << w.pairSum
       << (w.strict ? " < 0" : w.boundary ? " (boundary)" : " >= 0") << "\n";
  for (const auto& f : failures) os << "  violation: " << f << "\n";
  for (const auto& b : boundaryCases) os << "  boundary case: " << b << "\n";
  return os.str();
}

}  // namespace vortex
