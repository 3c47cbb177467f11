#pragma once

#include <string>
#include <vector>

#include "vortex/hamiltonian.hpp"

namespace vortex {

enum class Theorem { N2, N3, N4, None };

/// Witness for one subset check of the counter-rotation hypothesis: the
/// ordered-pair sum sum_{i != j in I} Gamma_i Gamma_j and its sign verdict.
struct SubsetWitness {
  std::vector<int> subset;  // zero-based indices
  double pairSum = 0.0;
  bool strict = false;    // pairSum < -eps
  bool boundary = false;  // |pairSum| <= eps: open condition undecidable
};

struct HypothesisReport {
  int n = 0;
  bool hyp1 = false;
  bool hyp2 = false;  // meaningful for n == 4 only
  Theorem applicable = Theorem::None;
  std::vector<SubsetWitness> witnesses;
  std::vector<std::string> failures;
  std::vector<std::string> boundaryCases;

  std::string summary() const;
};

/// Hypothesis on the strengths: adjacent products negative, and every subset
/// of size >= 3 has negative ordered-pair sum. Requires N >= 2.
bool checkHyp1(const Strengths& gamma, std::vector<SubsetWitness>* witnesses = nullptr,
               std::vector<std::string>* failures = nullptr);

/// |Gamma_2| < |Gamma_1| + |Gamma_3| and |Gamma_3| < |Gamma_2| + |Gamma_4|.
/// Requires N == 4.
bool checkHyp2(const Strengths& gamma, std::vector<std::string>* failures = nullptr);

/// Which existence theorem applies to this strength vector (N in 2..4).
HypothesisReport applicability(const Strengths& gamma);

const char* theoremName(Theorem t);

}  // namespace vortex
