#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>

#include "vortex/run_config.hpp"

namespace vortex {

namespace {

using nlohmann::json;

// All numeric output goes through this: 17 significant digits round-trip.
std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

json vecToJson(const Vec2& v) { return json::array({v.x(), v.y()}); }

json configToJson(const Configuration& x) {
  json arr = json::array();
  for (const Vec2& p : x) arr.push_back(vecToJson(p));
  return arr;
}

std::filesystem::path resolveOutputDir(const RunConfig& cfg) {
  const char* env = std::getenv("NVORTEX_OUTPUT_DIR");
  std::filesystem::path dir = env ? std::filesystem::path(env) : cfg.outputDir;
  std::filesystem::create_directories(dir);
  return dir;
}

void writeJson(const std::filesystem::path& path, const json& doc) {
  std::ofstream out(path);
  out << doc.dump(2) << "\n";
}

std::ofstream openCsv(const std::filesystem::path& path, const RunConfig& cfg) {
  std::ofstream out(path);
  out << "# config_hash=" << cfg.configHash << " seed=" << cfg.seed << "\n";
  return out;
}

HamiltonianModel modelFromConfig(const RunConfig& cfg) {
  if (!cfg.strengths)
    throw ConfigError("this subcommand needs a \"strengths\" vector");
  return HamiltonianModel(cfg.backend, *cfg.strengths, cfg.flux);
}

int cmdCheck(const RunConfig& cfg) {
  if (!cfg.strengths) throw ConfigError("check needs a \"strengths\" vector");
  const HypothesisReport rep = applicability(*cfg.strengths);
  std::cout << rep.summary();

  json out;
  out["config_hash"] = cfg.configHash;
  out["seed"] = cfg.seed;
  out["n"] = rep.n;
  out["hyp1"] = rep.hyp1;
  out["hyp2"] = rep.hyp2;
  out["applicable"] = theoremName(rep.applicable);
  out["failures"] = rep.failures;
  out["boundary_cases"] = rep.boundaryCases;
  json wits = json::array();
  for (const auto& w : rep.witnesses) {
    json jw;
    jw["subset"] = w.subset;
    jw["pair_sum"] = w.pairSum;
    jw["strict"] = w.strict;
    jw["boundary"] = w.boundary;
    wits.push_back(jw);
  }
  out["witnesses"] = wits;
  writeJson(resolveOutputDir(cfg) / "check_report.json", out);
  return rep.applicable == Theorem::None ? 1 : 0;
}

int cmdGreen(const RunConfig& cfg) {
  const auto dir = resolveOutputDir(cfg);
  std::mt19937_64 rng(cfg.seed);

  auto pairs = cfg.greenPairs;
  auto points = cfg.greenPoints;
  if (pairs.empty() && points.empty()) {
    // Default tabulation on random interior samples.
    for (int i = 0; i < 64; ++i) {
      const Vec2 x = cfg.backend->samplePoint(rng, 0.02);
      const Vec2 y = cfg.backend->samplePoint(rng, 0.02);
      if ((x - y).norm() < 1e-3) continue;
      pairs.emplace_back(x, y);
      points.push_back(x);
    }
  }

  {
    auto out = openCsv(dir / "green_pairs.csv", cfg);
    out << "x1,x2,y1,y2,G,gX1,gX2,gY1,gY2\n";
    for (const auto& [x, y] : pairs) {
      const GreenEval e = cfg.backend->evalG(x, y);
      out << fmt(x.x()) << ',' << fmt(x.y()) << ',' << fmt(y.x()) << ','
          << fmt(y.y()) << ',' << fmt(e.G) << ',' << fmt(e.gradX.x()) << ','
          << fmt(e.gradX.y()) << ',' << fmt(e.gradY.x()) << ','
          << fmt(e.gradY.y()) << "\n";
    }
  }
  {
    auto out = openCsv(dir / "robin.csv", cfg);
    out << "x1,x2,h,gH1,gH2\n";
    for (const Vec2& x : points) {
      const RobinEval e = cfg.backend->evalRobin(x);
      out << fmt(x.x()) << ',' << fmt(x.y()) << ',' << fmt(e.h) << ','
          << fmt(e.gradH.x()) << ',' << fmt(e.gradH.y()) << "\n";
    }
  }
  std::cout << "green tables written to " << dir << "\n";
  return 0;
}

json equilibriumRecord(const HamiltonianModel& m, const EquilibriumResult& r) {
  json rec;
  rec["positions"] = configToJson(r.x);
  rec["strengths"] = m.strengths().values();
  rec["residual"] = r.residual;
  rec["H"] = r.value;
  rec["hessian_eigenvalues"] = r.hessianEigs;
  if (r.phiMargin) rec["phi_margin"] = *r.phiMargin;
  rec["newton_iterations"] = r.newtonIterations;
  return rec;
}

int cmdEquilibrium(const RunConfig& cfg) {
  const HamiltonianModel m = modelFromConfig(cfg);
  const auto dir = resolveOutputDir(cfg);

  json out;
  out["config_hash"] = cfg.configHash;
  out["seed"] = cfg.seed;
  json recs = json::array();

  if (m.vortexCount() == 2) {
    const EquilibriumResult r =
        findEquilibriumN2(m, cfg.newtonTol, cfg.n2Starts, cfg.flow.seed);
    recs.push_back(equilibriumRecord(m, r));
  } else {
    LinkingCycle cycle = cfg.cycle;
    cycle.n = m.vortexCount();
    FlowReport report;
    const auto results = findEquilibria(m, cycle, cfg.flow, &report);
    for (const auto& r : results) recs.push_back(equilibriumRecord(m, r));
    json cal;
    cal["a"] = report.region.a;
    cal["b"] = report.region.b;
    cal["M0"] = report.region.M0;
    cal["min_cycle_H"] = report.region.minCycleH;
    cal["sup_linking_H"] = report.region.supLinkingH;
    cal["probe_doublings"] = report.region.probeDoublings;
    out["calibration"] = cal;
    if (cfg.writeFlowHistory) {
      auto hist = openCsv(dir / "flow_history.csv", cfg);
      hist << "t,alive,escaped,candidates,min_residual,min_phi_margin,"
              "worst_multiplier\n";
      for (const auto& s : report.history)
        hist << fmt(s.t) << ',' << s.alive << ',' << s.escaped << ','
             << s.candidates << ',' << fmt(s.minResidual) << ','
             << fmt(s.minPhiMargin) << ',' << fmt(s.worstMultiplier) << "\n";
    }
  }
  out["equilibria"] = recs;
  writeJson(dir / "equilibria.json", out);
  std::cout << recs.size() << " equilibrium record(s) written to "
            << (dir / "equilibria.json") << "\n";
  return 0;
}

int cmdSimulate(const RunConfig& cfg) {
  const HamiltonianModel m = modelFromConfig(cfg);
  if (cfg.initial.empty())
    throw ConfigError("simulate needs \"initial\" positions");
  const Trajectory traj = integrate(m, cfg.initial, cfg.integrateParams);

  const auto dir = resolveOutputDir(cfg);
  auto out = openCsv(dir / "trajectory.csv", cfg);
  out << "t";
  for (int i = 0; i < m.vortexCount(); ++i)
    out << ",x" << i + 1 << "x,x" << i + 1 << "y";
  out << ",H\n";
  for (const auto& pt : traj.points) {
    out << fmt(pt.t);
    for (const Vec2& p : pt.x) out << ',' << fmt(p.x()) << ',' << fmt(p.y());
    out << ',' << fmt(pt.H) << "\n";
  }
  if (traj.halted)
    std::cout << "trajectory halted early: " << traj.haltReason << "\n";
  std::cout << traj.points.size() << " trajectory rows written\n";
  return traj.halted ? 1 : 0;
}

int cmdDesingularize(const RunConfig& cfg) {
  const HamiltonianModel m = modelFromConfig(cfg);
  const auto dir = resolveOutputDir(cfg);

  Configuration xStar;
  if (cfg.desingEquilibrium) {
    xStar = *cfg.desingEquilibrium;
  } else if (m.vortexCount() == 2) {
    xStar = findEquilibriumN2(m, cfg.newtonTol, cfg.n2Starts, cfg.flow.seed).x;
  } else {
    LinkingCycle cycle = cfg.cycle;
    cycle.n = m.vortexCount();
    xStar = findEquilibria(m, cycle, cfg.flow).front().x;
  }

  std::vector<double> epsList = cfg.epsilons;
  if (epsList.empty()) epsList = {0.05, 0.02, 0.01};

  json out;
  out["config_hash"] = cfg.configHash;
  out["seed"] = cfg.seed;
  out["equilibrium"] = configToJson(xStar);
  json runs = json::array();
  for (double eps : epsList) {
    DesingParams params = cfg.desing;
    params.eps = eps;
    const GridSolution sol = solveSteadyState(m, xStar, params);
    json run;
    run["eps"] = eps;
    run["delta"] = params.delta();
    run["newton_residual"] = sol.newtonResidual;
    json blobs = json::array();
    for (const Blob& b : sol.blobs) {
      json jb;
      jb["vortex"] = b.vortexIndex;
      jb["centroid"] = vecToJson(b.centroid);
      jb["circulation"] = b.circulation;
      jb["support_diameter"] = b.supportDiameter;
      jb["cells"] = b.cells;
      blobs.push_back(jb);
    }
    run["blobs"] = blobs;
    runs.push_back(run);

    if (cfg.writeFields) {
      std::ostringstream name;
      name << "field_eps_" << fmt(eps) << ".csv";
      auto field = openCsv(dir / name.str(), cfg);
      field << "x,y,psi,omega\n";
      for (int j = 0; j < sol.ny; ++j)
        for (int i = 0; i < sol.nx; ++i) {
          const int k = sol.idx(i, j);
          if (sol.interiorIndex[k] < 0) continue;
          const Vec2 p = sol.node(i, j);
          field << fmt(p.x()) << ',' << fmt(p.y()) << ',' << fmt(sol.psi[k])
                << ',' << fmt(sol.omega[k]) << "\n";
        }
    }
  }
  out["runs"] = runs;
  writeJson(dir / "desing_blobs.json", out);
  std::cout << "desingularization records written to "
            << (dir / "desing_blobs.json") << "\n";
  return 0;
}

// The validate subcommand: green contracts, gradient oracles, boundary
// asymptotics sweeps. Prints one line per check, exits nonzero on failure.
int cmdValidate(const RunConfig& cfg) {
  int failures = 0;
  auto check = [&](const std::string& name, bool ok, const std::string& detail) {
    std::cout << (ok ? "[PASS] " : "[FAIL] ") << name;
    if (!detail.empty()) std::cout << " (" << detail << ")";
    std::cout << "\n";
    if (!ok) ++failures;
  };

  const auto& backend = *cfg.backend;
  std::mt19937_64 rng(cfg.seed == 0 ? 7 : cfg.seed);

  // (A1)-(A4) contracts.
  const ContractReport rep = backend.checkContracts(10000, cfg.seed + 1);
  check("green contracts (A1)-(A4)", rep.allOk(),
        "symmetry " + fmt(rep.symmetryWorst) + ", C2 " + fmt(rep.collarBoundC2));

  // Gradient of G vs central differences.
  {
    double worst = 0.0;
    const double step = 1e-5;
    const double sep = 0.05 * backend.domain().inradius();
    for (int k = 0; k < 25; ++k) {
      const Vec2 x = backend.samplePoint(rng, sep);
      const Vec2 y = backend.samplePoint(rng, sep);
      if ((x - y).norm() < sep) continue;
      const GreenEval e = backend.evalG(x, y);
      for (int c = 0; c < 2; ++c) {
        Vec2 xp = x, xm = x;
        xp[c] += step;
        xm[c] -= step;
        const double fd =
            (backend.evalG(xp, y).G - backend.evalG(xm, y).G) / (2 * step);
        worst = std::max(worst,
                         std::abs(fd - e.gradX[c]) /
                             std::max(1.0, std::abs(e.gradX[c])));
      }
    }
    check("grad G vs finite differences", worst < 1e-6, "worst " + fmt(worst));
  }

  // Robin boundary asymptotics along an interior normal ray.
  {
    const Vec2 anchor = backend.samplePoint(rng, 0.3 * backend.domain().inradius());
    const Vec2 p = backend.domain().nearestBoundaryPoint(anchor);
    const double da = backend.domain().unsignedBoundaryDistance(anchor);
    const Vec2 nu = (anchor - p) / da;
    double worstH = 0.0, worstGrad = 0.0;
    for (double d = 1e-4; d <= 0.1; d *= 1.6) {
      const Vec2 x = p + d * nu;
      if (!backend.domain().contains(x)) continue;
      const RobinEval r = backend.evalRobin(x);
      worstH = std::max(
          worstH, std::abs(r.h - kInvTwoPi * std::log(2.0 * d)));
      const Vec2 lead = nu / (kTwoPi * d);
      worstGrad = std::max(worstGrad, d * (r.gradH - lead).norm());
    }
    check("Robin boundary asymptotics", worstH < 0.5 && worstGrad < 0.1,
          "|h - log(2d)/2pi| " + fmt(worstH) + ", d|grad h - nu/(2 pi d)| " +
              fmt(worstGrad));
  }

  // Hamiltonian gradient oracle when strengths are configured.
  if (cfg.strengths) {
    const HamiltonianModel m(cfg.backend, *cfg.strengths, cfg.flux);
    double worst = 0.0;
    const double sep = 0.05 * backend.domain().inradius();
    for (int k = 0; k < 10; ++k) {
      Configuration x;
      for (int i = 0; i < m.vortexCount(); ++i)
        x.push_back(backend.samplePoint(rng, sep));
      bool valid = true;
      for (std::size_t i = 0; i < x.size() && valid; ++i)
        for (std::size_t j = i + 1; j < x.size(); ++j)
          if ((x[i] - x[j]).norm() < sep) valid = false;
      if (!valid) continue;
      const std::vector<Vec2> g = m.gradH(x);
      double gnorm = 0.0;
      for (const Vec2& gi : g) gnorm = std::max(gnorm, gi.norm());
      const double step = 1e-6;
      for (std::size_t i = 0; i < x.size(); ++i)
        for (int c = 0; c < 2; ++c) {
          Configuration xp = x, xm = x;
          xp[i][c] += step;
          xm[i][c] -= step;
          const double fd = (m.evalH(xp) - m.evalH(xm)) / (2 * step);
          worst = std::max(worst, std::abs(fd - g[i][c]) / std::max(1.0, gnorm));
        }
    }
    check("grad H vs finite differences", worst < 1e-6, "worst " + fmt(worst));
  }

  return failures == 0 ? 0 : 1;
}

}  // namespace

int runCli(int argc, const char* const* argv) {
  const std::string usage =
      "usage: nvortex <check|green|equilibrium|simulate|desingularize|validate>"
      " <config.json>\n";
  if (argc < 3) {
    std::cerr << usage;
    return 2;
  }
  const std::string cmd = argv[1];

  RunConfig cfg;
  try {
    cfg = RunConfig::fromFile(argv[2]);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (cmd == "check") return cmdCheck(cfg);
    if (cmd == "green") return cmdGreen(cfg);
    if (cmd == "equilibrium") return cmdEquilibrium(cfg);
    if (cmd == "simulate") return cmdSimulate(cfg);
    if (cmd == "desingularize") return cmdDesingularize(cfg);
    if (cmd == "validate") return cmdValidate(cfg);
    std::cerr << usage;
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace vortex
