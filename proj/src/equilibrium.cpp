#include "vortex/equilibrium.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <thread>

namespace vortex {

namespace {

double stackedNorm(const std::vector<Vec2>& g) {
  double s = 0.0;
  for (const Vec2& v : g) s += v.squaredNorm();
  return std::sqrt(s);
}

double stackedDot(const std::vector<Vec2>& a, const std::vector<Vec2>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i].dot(b[i]);
  return s;
}

Configuration stepAlong(const Configuration& x, double dt,
                        const std::vector<Vec2>& v) {
  Configuration y = x;
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += dt * v[i];
  return y;
}

bool configValid(const HamiltonianModel& m, const Configuration& x) {
  try {
    m.validate(x);
    return true;
  } catch (const ConfigurationError&) {
    return false;
  }
}

Eigen::VectorXd flatten(const std::vector<Vec2>& g) {
  Eigen::VectorXd v(2 * g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    v[2 * i] = g[i].x();
    v[2 * i + 1] = g[i].y();
  }
  return v;
}

Configuration unflatten(const Eigen::VectorXd& v) {
  Configuration x(v.size() / 2);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = {v[2 * i], v[2 * i + 1]};
  return x;
}

void parallelFor(int nItems, const std::function<void(int)>& fn) {
  const int nThreads = std::max(
      1u, std::min(std::thread::hardware_concurrency(),
                   static_cast<unsigned>(nItems)));
  if (nThreads == 1) {
    for (int i = 0; i < nItems; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(nThreads);
  for (int t = 0; t < nThreads; ++t) {
    pool.emplace_back([&, t]() {
      for (int i = t; i < nItems; i += nThreads) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

bool rotationallySymmetric(const Domain& dom) {
  return dom.shape() == DomainShape::UnitDisc ||
         dom.shape() == DomainShape::Annulus;
}

Configuration rotateConfig(const Configuration& x, double ang) {
  const double c = std::cos(ang), s = std::sin(ang);
  Configuration y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    y[i] = {c * x[i].x() - s * x[i].y(), s * x[i].x() + c * x[i].y()};
  return y;
}

// Label-respecting distance between configurations, minimized over the
// domain's rotation group when there is one.
double orbitDistance(const Domain& dom, const Configuration& a,
                     const Configuration& b) {
  auto plain = [&](const Configuration& y) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
      worst = std::max(worst, (a[i] - y[i]).norm());
    return worst;
  };
  if (!rotationallySymmetric(dom)) return plain(b);
  double best = std::numeric_limits<double>::max();
  double bestAng = 0.0;
  for (int k = 0; k < 720; ++k) {
    const double ang = kTwoPi * k / 720;
    const double d = plain(rotateConfig(b, ang));
    if (d < best) {
      best = d;
      bestAng = ang;
    }
  }
  double lo = bestAng - kTwoPi / 720, hi = bestAng + kTwoPi / 720;
  for (int it = 0; it < 40; ++it) {
    const double m1 = lo + (hi - lo) / 3, m2 = hi - (hi - lo) / 3;
    if (plain(rotateConfig(b, m1)) < plain(rotateConfig(b, m2)))
      hi = m2;
    else
      lo = m1;
  }
  return std::min(best, plain(rotateConfig(b, 0.5 * (lo + hi))));
}

}  // namespace

// ---------------------------------------------------------------------------
// Linking cycle

int LinkingCycle::sampleCount() const {
  return n == 3 ? resolution : resolution * resolution;
}

std::array<double, 2> LinkingCycle::angles(int k) const {
  if (n == 3) return {kTwoPi * k / resolution, 0.0};
  const int i = k / resolution, j = k % resolution;
  return {kTwoPi * i / resolution, kTwoPi * j / resolution};
}

Configuration gamma0(const LinkingCycle& cycle, double zeta1, double zeta2) {
  const Vec2 c = cycle.center;
  const double rho = cycle.rho;
  const Vec2 e1(1.0, 0.0);
  if (cycle.n == 3) {
    return {c + rho * Vec2(std::cos(zeta1), std::sin(zeta1)), c,
            c + 2.0 * rho * e1};
  }
  if (cycle.n == 4) {
    return {c + rho * Vec2(std::cos(zeta1), std::sin(zeta1)), c,
            c + 3.0 * rho * e1,
            c + 3.0 * rho * e1 + rho * Vec2(std::cos(zeta2), std::sin(zeta2))};
  }
  throw ArityError("linking cycles exist for N = 3 or 4 only");
}

void validateCycle(const LinkingCycle& cycle, const Domain& dom) {
  if (cycle.n != 3 && cycle.n != 4)
    throw ArityError("linking cycles exist for N = 3 or 4 only");
  if (cycle.resolution < 64)
    throw GeometryError("cycle resolution must be at least 64");
  if (!(cycle.rho > 0.0)) throw GeometryError("cycle radius must be positive");

  const double R = (cycle.n == 3 ? 2.0 : 4.0) * cycle.rho;
  const Vec2 c = cycle.center;
  bool ok = dom.contains(c);
  if (ok) {
    switch (dom.shape()) {
      case DomainShape::UnitDisc:
        ok = c.norm() + R < 1.0;
        break;
      case DomainShape::Annulus: {
        const auto& ann = static_cast<const AnnulusDomain&>(dom);
        ok = c.norm() + R < 1.0 && c.norm() - R > ann.innerRadius();
        break;
      }
      case DomainShape::Panel:
        for (int k = 0; k < 512 && ok; ++k) {
          const double t = kTwoPi * k / 512;
          ok = dom.contains(c + R * Vec2(std::cos(t), std::sin(t)));
        }
        break;
    }
  }
  if (!ok) {
    std::ostringstream os;
    os << "closed ball of radius " << R << " around (" << c.x() << ", "
       << c.y() << ") is not contained in " << dom.describe();
    throw GeometryError(os.str());
  }
}

bool inLinkingSet(const Configuration& x, double tol) {
  auto between = [tol](const Vec2& a, const Vec2& mid, const Vec2& b) {
    const Vec2 u = a - mid;
    const Vec2 v = b - mid;
    const double scale = u.norm() * v.norm();
    if (scale == 0.0) return false;
    return std::abs(cross2(u, v)) <= tol * scale && u.dot(v) < 0.0;
  };
  if (x.size() == 3) return between(x[0], x[1], x[2]);
  if (x.size() == 4)
    return between(x[0], x[1], x[2]) && between(x[1], x[2], x[3]);
  throw ArityError("linking sets are defined for N = 3 or 4 only");
}

// ---------------------------------------------------------------------------
// Constrained ascending field

namespace {

std::vector<Vec2> fieldFromEval(const HamiltonianModel::FullEval& e, double M0,
                                double band) {
  const double chi = e.phi + M0;
  if (chi >= band) return e.gradH;

  const double ip = stackedDot(e.gradH, e.gradPhi);
  std::vector<Vec2> v0 = e.gradH;
  if (ip <= 0.0) {
    double gg = 0.0;
    for (const Vec2& g : e.gradPhi) gg += g.squaredNorm();
    if (gg < 1e-16)
      throw FlowError("degenerate boundary: grad Phi vanishes on the band");
    const double c = ip / gg;
    for (std::size_t i = 0; i < v0.size(); ++i) v0[i] -= c * e.gradPhi[i];
  }
  const double w = std::clamp(chi / band, 0.0, 1.0);
  std::vector<Vec2> out(v0.size());
  for (std::size_t i = 0; i < v0.size(); ++i)
    out[i] = (1.0 - w) * v0[i] + w * e.gradH[i];
  return out;
}

}  // namespace

std::vector<Vec2> constrainedField(const HamiltonianModel& m,
                                   const Configuration& x, double M0,
                                   double band) {
  return fieldFromEval(m.evalAll(x), M0, band);
}

// ---------------------------------------------------------------------------
// Region calibration

namespace {

// Collinear parametrization of the linking set: all points on the line
// x2 + span{u}, with x1 = x2 + s1 u, x3 = x2 - s3 u (and x4 = x2 - (s3+s4) u).
struct LinkingParam {
  Vec2 x2;
  double theta = 0.0;
  double s1 = 0.1, s3 = 0.1, s4 = 0.1;
};

Configuration linkingConfig(const LinkingParam& p, int n) {
  const Vec2 u(std::cos(p.theta), std::sin(p.theta));
  if (n == 3) return {p.x2 + p.s1 * u, p.x2, p.x2 - p.s3 * u};
  return {p.x2 + p.s1 * u, p.x2, p.x2 - p.s3 * u, p.x2 - (p.s3 + p.s4) * u};
}

double estimateSupLinking(const HamiltonianModel& m, const LinkingCycle& cycle,
                          std::mt19937_64& rng) {
  const int n = m.vortexCount();
  const Domain& dom = m.domain();
  const auto [lo, hi] = dom.boundingBox();
  std::uniform_real_distribution<double> ux(lo.x(), hi.x());
  std::uniform_real_distribution<double> uy(lo.y(), hi.y());
  std::uniform_real_distribution<double> uth(0.0, kTwoPi);
  std::uniform_real_distribution<double> us(std::log(0.02 * dom.inradius()),
                                            std::log(0.8 * dom.inradius()));

  double best = -std::numeric_limits<double>::max();
  const int starts = 96;
  for (int s = 0; s < starts; ++s) {
    LinkingParam p;
    p.x2 = {ux(rng), uy(rng)};
    p.theta = uth(rng);
    p.s1 = std::exp(us(rng));
    p.s3 = std::exp(us(rng));
    p.s4 = std::exp(us(rng));
    Configuration x = linkingConfig(p, n);
    if (!configValid(m, x)) continue;

    double step = 0.02;
    double fbest = m.evalH(x);
    for (int it = 0; it < 400 && step > 1e-9; ++it) {
      const std::vector<Vec2> g = m.gradH(linkingConfig(p, n));
      const Vec2 u(std::cos(p.theta), std::sin(p.theta));
      const Vec2 uperp(-u.y(), u.x());
      // Chain rule into the parameters.
      Vec2 dx2 = Vec2::Zero();
      for (const Vec2& gi : g) dx2 += gi;
      double dth = p.s1 * g[0].dot(uperp) - p.s3 * g[2].dot(uperp);
      double ds1 = g[0].dot(u);
      double ds3 = -g[2].dot(u);
      double ds4 = 0.0;
      if (n == 4) {
        dth -= (p.s3 + p.s4) * g[3].dot(uperp);
        ds3 -= g[3].dot(u);
        ds4 = -g[3].dot(u);
      }
      LinkingParam q = p;
      q.x2 += step * dx2;
      q.theta += step * dth;
      q.s1 = std::max(1e-6, p.s1 + step * ds1);
      q.s3 = std::max(1e-6, p.s3 + step * ds3);
      if (n == 4) q.s4 = std::max(1e-6, p.s4 + step * ds4);
      const Configuration xq = linkingConfig(q, n);
      if (configValid(m, xq)) {
        const double f = m.evalH(xq);
        if (f > fbest) {
          fbest = f;
          p = q;
          step *= 1.3;
          continue;
        }
      }
      step *= 0.5;
    }
    best = std::max(best, fbest);
  }
  if (!(best > -std::numeric_limits<double>::max())) {
    // Fall back to the cycle's own scale; the linking set meets the cycle.
    best = m.evalH(gamma0(cycle, 0.0, kPi));
  }
  return best;
}

}  // namespace

RegionCalibration calibrateRegion(const HamiltonianModel& m,
                                  const LinkingCycle& cycle,
                                  unsigned long long seed) {
  const HypothesisReport rep = applicability(m.strengths());
  const Theorem want = cycle.n == 3 ? Theorem::N3 : Theorem::N4;
  if (rep.applicable != want) {
    throw CalibrationError(
        "strength vector fails the existence hypotheses for N = " +
        std::to_string(cycle.n) + ":\n" + rep.summary());
  }
  validateCycle(cycle, m.domain());

  RegionCalibration cal;
  std::mt19937_64 rng(seed);

  double minH = std::numeric_limits<double>::max();
  double minPhi = std::numeric_limits<double>::max();
  const int nS = cycle.sampleCount();
  for (int k = 0; k < nS; ++k) {
    const auto [z1, z2] = cycle.angles(k);
    const Configuration x = gamma0(cycle, z1, z2);
    minH = std::min(minH, m.evalH(x));
    minPhi = std::min(minPhi, m.evalPhi(x).phi);
  }
  cal.minCycleH = minH;
  cal.minCyclePhi = minPhi;
  cal.a = minH - std::max(0.5, 0.05 * std::abs(minH));

  cal.supLinkingH = estimateSupLinking(m, cycle, rng);
  cal.b = cal.supLinkingH + std::max(1.0, 0.25 * std::abs(cal.supLinkingH));

  cal.M0 = std::max(1.0, -minPhi + 1.0);

  // Probe: flow a subsample; double M0 while any trajectory stalls on the
  // band with a negative multiplier (a constrained critical point with
  // lambda <= 0 would obstruct the ascent).
  FlowParams probe;
  probe.maxSteps = 400;
  probe.seed = seed;
  for (int doubling = 0; doubling <= 20; ++doubling) {
    const double band = 0.05 * cal.M0;
    bool clean = true;
    const int stride = std::max(1, nS / 16);
    for (int k = 0; k < nS && clean; k += stride) {
      const auto [z1, z2] = cycle.angles(k);
      Configuration x = gamma0(cycle, z1, z2);
      double dt = probe.dt0;
      for (int step = 0; step < probe.maxSteps; ++step) {
        const auto e = m.evalAll(x);
        if (e.H > cal.b) break;
        const double chi = e.phi + cal.M0;
        double gg = 0.0;
        for (const Vec2& g : e.gradPhi) gg += g.squaredNorm();
        if (chi < band && gg < 1e-16) {
          // Sard-style jitter: -M0 should be a regular value of Phi.
          std::uniform_real_distribution<double> uj(0.0, 1e-6);
          cal.M0 *= 1.0 + uj(rng);
          cal.note += "jittered M0 near degenerate band point; ";
          continue;
        }
        const double ip = stackedDot(e.gradH, e.gradPhi);
        std::vector<Vec2> v;
        try {
          v = fieldFromEval(e, cal.M0, band);
        } catch (const FlowError&) {
          clean = false;
          break;
        }
        const double vn = stackedNorm(v);
        const double gn = stackedNorm(e.gradH);
        if (chi < band && ip < 0.0 && vn < 1e-6 * std::max(1.0, gn) &&
            e.H >= cal.a && e.H <= cal.b && gn > 1e-6) {
          clean = false;  // stalled against the barrier while descending
          break;
        }
        if (gn < 1e-8) break;  // reached a critical point; probe done
        Configuration y = stepAlong(x, dt, v);
        bool accepted = false;
        for (int halve = 0; halve < 40; ++halve) {
          if (configValid(m, y)) {
            const auto ey = m.evalAll(y);
            if (ey.H >= e.H - probe.monotonicityTol &&
                ey.phi >= -cal.M0 - probe.bandTol) {
              accepted = true;
              break;
            }
          }
          dt *= 0.5;
          y = stepAlong(x, dt, v);
        }
        if (!accepted) break;
        x = y;
        dt = std::min(dt * 1.3, probe.dtMax);
      }
    }
    if (clean) {
      cal.probeDoublings = doubling;
      return cal;
    }
    cal.M0 *= 2.0;
  }
  throw CalibrationError(
      "M0 grew past its cap without a clean probe run; the region "
      "D = {Phi >= -M0} could not be calibrated");
}

// ---------------------------------------------------------------------------
// Constrained ascending flow

FlowReport ascendFlow(const HamiltonianModel& m, const LinkingCycle& cycle,
                      const FlowParams& params,
                      const RegionCalibration* precomputed) {
  FlowReport report;
  report.region =
      precomputed ? *precomputed : calibrateRegion(m, cycle, params.seed);
  const RegionCalibration& cal = report.region;
  if (!(cal.b > cal.minCycleH))
    throw FlowError("empty energy window: b does not exceed min H on gamma0");
  if (!(cal.a < cal.minCycleH))
    throw FlowError("empty energy window: a is not below min H on gamma0");

  const double band = params.band > 0.0 ? params.band : 0.05 * cal.M0;

  LinkingCycle work = cycle;
  for (int round = 0;; ++round) {
    const int nS = work.sampleCount();
    report.outcomes.assign(nS, SampleOutcome{});

    const int checkpoints = 9;
    std::vector<std::vector<std::array<double, 5>>> cps(
        nS);  // t, res, phiMargin, multiplier, H

    parallelFor(nS, [&](int k) {
      const auto [z1, z2] = work.angles(k);
      Configuration x = gamma0(work, z1, z2);
      SampleOutcome& out = report.outcomes[k];
      out.minResidual = std::numeric_limits<double>::max();
      out.minPhiMargin = std::numeric_limits<double>::max();
      double t = 0.0;
      double dt = params.dt0;
      out.fate = SampleFate::Budget;

      for (int step = 0; step < params.maxSteps; ++step) {
        const auto e = m.evalAll(x);
        const double res = stackedNorm(e.gradH);
        const double margin = e.phi + cal.M0;
        if (res < out.minResidual) {
          out.minResidual = res;
          out.minResidualX = x;
        }
        out.minPhiMargin = std::min(out.minPhiMargin, margin);

        if (step % std::max(1, params.maxSteps / (checkpoints - 1)) == 0) {
          double gg = 0.0;
          for (const Vec2& g : e.gradPhi) gg += g.squaredNorm();
          const double mult =
              (margin < band && gg > 0.0)
                  ? stackedDot(e.gradH, e.gradPhi) / gg
                  : 0.0;
          cps[k].push_back({t, res, margin, mult, e.H});
        }

        if (res < params.candidateTol && e.H >= cal.a && e.H <= cal.b) {
          out.fate = SampleFate::Candidate;
          break;
        }
        if (e.H > cal.b) {
          out.fate = SampleFate::EscapedAboveB;
          break;
        }
        if (e.phi < -cal.M0 - 1e3 * params.bandTol) {
          out.fate = SampleFate::LeftRegion;
          break;
        }

        std::vector<Vec2> v;
        try {
          v = fieldFromEval(e, cal.M0, band);
        } catch (const FlowError&) {
          out.fate = SampleFate::Stuck;
          break;
        }
        const double vn = stackedNorm(v);
        if (vn < 1e-14) {
          out.fate = SampleFate::Stuck;
          break;
        }
        double dtCap = std::min(dt, params.maxMove / vn);
        Configuration y = stepAlong(x, dtCap, v);
        bool accepted = false;
        while (dtCap >= params.dtMin) {
          if (configValid(m, y)) {
            const auto ey = m.evalAll(y);
            if (ey.H >= e.H - params.monotonicityTol &&
                ey.phi >= -cal.M0 - params.bandTol) {
              accepted = true;
              break;
            }
          }
          dtCap *= 0.5;
          y = stepAlong(x, dtCap, v);
        }
        if (!accepted) {
          out.fate = SampleFate::Stuck;
          break;
        }
        x = y;
        t += dtCap;
        dt = std::min(std::max(dtCap * 1.3, params.dt0), params.dtMax);
        out.steps = step + 1;
      }

      out.finalX = x;
      out.finalH = m.evalH(x);
    });

    // Aggregate checkpoint snapshots by index.
    report.history.clear();
    for (int c = 0; c < checkpoints; ++c) {
      FlowSnapshot snap;
      snap.minResidual = std::numeric_limits<double>::max();
      snap.minPhiMargin = std::numeric_limits<double>::max();
      bool any = false;
      for (int k = 0; k < nS; ++k) {
        if (c >= static_cast<int>(cps[k].size())) continue;
        any = true;
        const auto& row = cps[k][c];
        snap.t = std::max(snap.t, row[0]);
        snap.alive += 1;
        snap.minResidual = std::min(snap.minResidual, row[1]);
        snap.minPhiMargin = std::min(snap.minPhiMargin, row[2]);
        snap.worstMultiplier = std::min(snap.worstMultiplier, row[3]);
      }
      if (!any) break;
      for (int k = 0; k < nS; ++k) {
        if (report.outcomes[k].fate == SampleFate::EscapedAboveB)
          snap.escaped += 1;
        if (report.outcomes[k].fate == SampleFate::Candidate)
          snap.candidates += 1;
      }
      report.history.push_back(snap);
    }

    report.candidates.clear();
    for (const auto& out : report.outcomes)
      if (out.fate == SampleFate::Candidate)
        report.candidates.push_back(out.finalX);

    if (!report.candidates.empty() || round >= params.maxRefineRounds) {
      report.refineRounds = round;
      break;
    }
    work.resolution *= 2;  // refine the cycle and retry
  }

  if (report.candidates.empty()) {
    // Keep the best near-critical points as weak candidates before giving up.
    std::vector<const SampleOutcome*> sorted;
    for (const auto& o : report.outcomes) sorted.push_back(&o);
    std::sort(sorted.begin(), sorted.end(),
              [](const SampleOutcome* x, const SampleOutcome* y) {
                return x->minResidual < y->minResidual;
              });
    for (std::size_t i = 0; i < sorted.size() && i < 8; ++i)
      if (sorted[i]->minResidual < 1e3 * params.candidateTol &&
          !sorted[i]->minResidualX.empty())
        report.candidates.push_back(sorted[i]->minResidualX);
  }
  if (report.candidates.empty())
    throw FlowError(
        "no flow candidate: every sample escaped or stalled; consider a "
        "larger M0 or a finer cycle");
  return report;
}

// ---------------------------------------------------------------------------
// Newton refinement

namespace {

Eigen::MatrixXd fdHessian(const HamiltonianModel& m, const Configuration& x) {
  const int n2 = 2 * static_cast<int>(x.size());
  Eigen::MatrixXd H(n2, n2);
  double scale = 1.0;
  for (const Vec2& p : x) scale = std::max(scale, p.lpNorm<Eigen::Infinity>());
  const double h = 1e-6 * scale;
  for (int j = 0; j < n2; ++j) {
    Configuration xp = x, xm = x;
    xp[j / 2][j % 2] += h;
    xm[j / 2][j % 2] -= h;
    const Eigen::VectorXd gp = flatten(m.gradH(xp));
    const Eigen::VectorXd gm = flatten(m.gradH(xm));
    H.col(j) = (gp - gm) / (2.0 * h);
  }
  return 0.5 * (H + H.transpose());
}

}  // namespace

EquilibriumResult newtonRefine(const HamiltonianModel& m,
                               const Configuration& x0, double tol,
                               int maxIter) {
  m.validate(x0);
  Configuration x = x0;
  Eigen::VectorXd g = flatten(m.gradH(x));
  double res = g.norm();

  EquilibriumResult result;
  int iter = 0;
  int stall = 0;
  while (res > tol && iter < maxIter) {
    const Eigen::MatrixXd H = fdHessian(m, x);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
    const Eigen::VectorXd evals = es.eigenvalues();
    const Eigen::MatrixXd evecs = es.eigenvectors();
    const double lmax = evals.cwiseAbs().maxCoeff();
    if (lmax < 1e-14)
      throw RefinementError("newtonRefine: Hessian vanished; residual " +
                            std::to_string(res));
    // Pseudo-inverse step; near-null directions (rotation orbits on
    // symmetric domains) are projected out.
    const double cutoff = std::max(1e-12, 1e-8 * lmax);
    Eigen::VectorXd p = Eigen::VectorXd::Zero(g.size());
    int kept = 0;
    for (int i = 0; i < evals.size(); ++i) {
      if (std::abs(evals[i]) < cutoff) continue;
      p -= (evecs.col(i).dot(g) / evals[i]) * evecs.col(i);
      ++kept;
    }
    if (kept == 0)
      throw RefinementError("newtonRefine: singular Hessian; residual " +
                            std::to_string(res));

    double alpha = 1.0;
    bool accepted = false;
    for (int ls = 0; ls < 30; ++ls) {
      const Configuration xTrial = unflatten(flatten(x) + alpha * p);
      if (configValid(m, xTrial)) {
        const Eigen::VectorXd gTrial = flatten(m.gradH(xTrial));
        if (gTrial.norm() < res * (1.0 - 1e-4 * alpha)) {
          x = xTrial;
          g = gTrial;
          res = g.norm();
          accepted = true;
          break;
        }
      }
      alpha *= 0.5;
    }
    ++iter;
    if (!accepted) {
      if (++stall >= 3)
        throw RefinementError(
            "newtonRefine: line search stalled at residual " +
            std::to_string(res));
    } else {
      stall = 0;
    }
  }
  if (res > tol)
    throw RefinementError("newtonRefine: residual " + std::to_string(res) +
                          " above tolerance after " + std::to_string(iter) +
                          " iterations");

  result.x = x;
  result.residual = res;
  result.value = m.evalH(x);
  result.newtonIterations = iter;
  const Eigen::MatrixXd H = fdHessian(m, x);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
  result.hessianEigs.assign(es.eigenvalues().data(),
                            es.eigenvalues().data() + es.eigenvalues().size());
  return result;
}

// ---------------------------------------------------------------------------
// N = 2: compact maximization

EquilibriumResult findEquilibriumN2(const HamiltonianModel& m, double tol,
                                    int starts, unsigned long long seed) {
  if (m.vortexCount() != 2)
    throw ArityError("findEquilibriumN2 requires exactly two vortices");
  if (!(m.strengths()[0] * m.strengths()[1] < 0.0))
    throw ValidationError(
        "findEquilibriumN2 requires opposite-sign strengths");

  std::mt19937_64 rng(seed);
  const Domain& dom = m.domain();
  const auto [lo, hi] = dom.boundingBox();
  std::uniform_real_distribution<double> ux(lo.x(), hi.x());
  std::uniform_real_distribution<double> uy(lo.y(), hi.y());

  auto randomInterior = [&](double minDist) {
    for (int i = 0; i < 10000; ++i) {
      Vec2 p(ux(rng), uy(rng));
      if (dom.contains(p) && dom.unsignedBoundaryDistance(p) > minDist)
        return p;
    }
    throw GeometryError("interior sampling failed");
  };

  std::optional<EquilibriumResult> best;
  int attempted = 0;
  for (int s = 0; s < starts; ++s) {
    Configuration x;
    if (s < starts / 4 && rotationallySymmetric(dom)) {
      // Symmetric-pair seeds along a random diameter.
      const double ang = kTwoPi * s / std::max(1, starts / 4);
      const double rMid =
          dom.shape() == DomainShape::Annulus
              ? 0.5 * (1.0 + static_cast<const AnnulusDomain&>(dom).innerRadius())
              : 0.5;
      const Vec2 u(std::cos(ang), std::sin(ang));
      x = {rMid * u, -rMid * u};
    } else {
      x = {randomInterior(0.05), randomInterior(0.05)};
      if ((x[0] - x[1]).norm() < 0.05) continue;
    }
    if (!configValid(m, x)) continue;
    ++attempted;

    // Plain ascent to the basin, then Newton.
    double dt = 1e-2;
    double f = m.evalH(x);
    for (int it = 0; it < 3000 && dt > 1e-14; ++it) {
      const std::vector<Vec2> g = m.gradH(x);
      if (stackedNorm(g) < 1e-5) break;
      Configuration y = stepAlong(x, dt / std::max(1.0, stackedNorm(g)), g);
      if (configValid(m, y)) {
        const double fy = m.evalH(y);
        if (fy > f) {
          x = y;
          f = fy;
          dt *= 1.25;
          continue;
        }
      }
      dt *= 0.5;
    }
    try {
      EquilibriumResult r = newtonRefine(m, x, tol);
      // Maximizer: the Hessian must not have a significantly positive
      // direction (a zero rotation mode is fine).
      const double lmax = *std::max_element(r.hessianEigs.begin(),
                                            r.hessianEigs.end());
      if (lmax > 1e-4) continue;
      if (!best || r.value > best->value) best = std::move(r);
    } catch (const RefinementError&) {
      continue;
    }
  }
  if (!best) {
    std::ostringstream os;
    os << "findEquilibriumN2: multistart exhausted (" << attempted
       << " starts attempted)";
    throw RefinementError(os.str());
  }
  return *best;
}

// ---------------------------------------------------------------------------
// Full pipeline

std::vector<EquilibriumResult> findEquilibria(const HamiltonianModel& m,
                                              const LinkingCycle& cycle,
                                              const FlowParams& params,
                                              FlowReport* reportOut) {
  FlowReport report = ascendFlow(m, cycle, params);

  std::vector<EquilibriumResult> accepted;
  for (const Configuration& cand : report.candidates) {
    EquilibriumResult r;
    try {
      r = newtonRefine(m, cand, 1e-11);
    } catch (const RefinementError&) {
      continue;
    }
    const double phi = m.evalPhi(r.x).phi;
    if (!(phi > -report.region.M0)) continue;  // outside the compact region
    r.phiMargin = phi + report.region.M0;

    bool duplicate = false;
    for (const auto& prev : accepted) {
      if (std::abs(prev.value - r.value) <
              1e-6 * (1.0 + std::abs(prev.value)) &&
          orbitDistance(m.domain(), prev.x, r.x) < 1e-6) {
        duplicate = true;
        break;
      }
    }
    if (!duplicate) accepted.push_back(std::move(r));
  }
  if (reportOut) *reportOut = std::move(report);
  if (accepted.empty())
    throw FlowError("all flow candidates failed Newton refinement");
  return accepted;
}

}  // namespace vortex
