#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "vortex/desing.hpp"
#include "vortex/dynamics.hpp"
#include "vortex/equilibrium.hpp"
#include "vortex/hamiltonian.hpp"

namespace vortex {

/// Parsed and validated run-configuration document (JSON). Unknown keys are
/// rejected; every run is reproducible from the document plus the seed.
struct RunConfig {
  std::shared_ptr<const Domain> domain;
  std::shared_ptr<const GreenBackend> backend;
  std::optional<Strengths> strengths;
  HarmonicPoly flux;
  unsigned long long seed = 0;
  std::filesystem::path outputDir = ".";
  std::string configHash;  // FNV-1a of the canonical document

  // green
  std::vector<Vec2> greenPoints;
  std::vector<std::pair<Vec2, Vec2>> greenPairs;

  // equilibrium
  LinkingCycle cycle;
  FlowParams flow;
  double newtonTol = 1e-11;
  int n2Starts = 32;
  bool writeFlowHistory = false;

  // simulate
  Configuration initial;
  IntegrateParams integrateParams;

  // desingularize
  std::vector<double> epsilons;
  DesingParams desing;
  std::optional<Configuration> desingEquilibrium;
  bool writeFields = false;

  static RunConfig fromFile(const std::filesystem::path& path);
  static RunConfig fromJsonText(const std::string& text);
};

/// CLI entry point (exposed for tests). Exit codes: 0 success, 1 computation
/// failure, 2 configuration/schema failure.
int runCli(int argc, const char* const* argv);

}  // namespace vortex
