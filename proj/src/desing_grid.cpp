#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <sstream>

#include "vortex/desing.hpp"

namespace vortex {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();
constexpr double kLegMin = 1e-3;  // clamp on cut-cell leg fractions

double fNonlinear(double t, double gammaSign, double p) {
  if (gammaSign > 0.0) return t > 0.0 ? std::pow(t, p) : 0.0;
  return t < 0.0 ? -std::pow(-t, p) : 0.0;
}

double fNonlinearPrime(double t, double gammaSign, double p) {
  if (gammaSign > 0.0) return t > 0.0 ? p * std::pow(t, p - 1.0) : 0.0;
  return t < 0.0 ? p * std::pow(-t, p - 1.0) : 0.0;
}

double fAntiderivative(double t, double gammaSign, double p) {
  if (gammaSign > 0.0)
    return t > 0.0 ? std::pow(t, p + 1.0) / (p + 1.0) : 0.0;
  return t < 0.0 ? std::pow(-t, p + 1.0) / (p + 1.0) : 0.0;
}

// Fraction alpha in (0,1] of the step from an interior node toward an
// exterior neighbor at which the boundary is crossed.
double crossingFraction(const Domain& dom, const Vec2& from, const Vec2& dir,
                        double h) {
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (dom.contains(from + mid * h * dir))
      lo = mid;
    else
      hi = mid;
  }
  return std::clamp(0.5 * (lo + hi), kLegMin, 1.0);
}

struct GridOperator {
  // Shortley-Weller Laplacian: Lap psi ~ L psi + B psi0-values.
  Eigen::SparseMatrix<double> L;
  Eigen::VectorXd boundaryTerm;  // contribution of Dirichlet data
  int unknowns = 0;
};

GridOperator buildLaplacian(const GridSolution& grid, const Domain& dom,
                            const HarmonicPoly& flux) {
  GridOperator op;
  std::vector<Eigen::Triplet<double>> trips;
  int nUnknown = 0;
  for (int v : grid.interiorIndex)
    if (v >= 0) ++nUnknown;
  op.unknowns = nUnknown;
  op.boundaryTerm = Eigen::VectorXd::Zero(nUnknown);

  const double h = grid.h;
  const Vec2 dirs[4] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
  const int di[4] = {1, -1, 0, 0};
  const int dj[4] = {0, 0, 1, -1};

  for (int j = 0; j < grid.ny; ++j) {
    for (int i = 0; i < grid.nx; ++i) {
      const int row = grid.interiorIndex[grid.idx(i, j)];
      if (row < 0) continue;
      const Vec2 xc = grid.node(i, j);

      double leg[4];
      double bval[4];
      int nbRow[4];
      for (int d = 0; d < 4; ++d) {
        const int ni = i + di[d], nj = j + dj[d];
        if (grid.isInterior(ni, nj)) {
          leg[d] = 1.0;
          nbRow[d] = grid.interiorIndex[grid.idx(ni, nj)];
          bval[d] = 0.0;
        } else {
          const double alpha = crossingFraction(dom, xc, dirs[d], h);
          leg[d] = alpha;
          nbRow[d] = -1;
          bval[d] = flux.eval(xc + alpha * h * dirs[d]);
        }
      }

      double diag = 0.0;
      for (int pair = 0; pair < 2; ++pair) {
        const int dA = 2 * pair, dB = 2 * pair + 1;
        const double hA = leg[dA] * h, hB = leg[dB] * h;
        const double cA = 2.0 / (hA * (hA + hB));
        const double cB = 2.0 / (hB * (hA + hB));
        diag -= 2.0 / (hA * hB);
        if (nbRow[dA] >= 0)
          trips.emplace_back(row, nbRow[dA], cA);
        else
          op.boundaryTerm[row] += cA * bval[dA];
        if (nbRow[dB] >= 0)
          trips.emplace_back(row, nbRow[dB], cB);
        else
          op.boundaryTerm[row] += cB * bval[dB];
      }
      trips.emplace_back(row, row, diag);
    }
  }
  op.L.resize(nUnknown, nUnknown);
  op.L.setFromTriplets(trips.begin(), trips.end());
  return op;
}

struct Thresholds {
  std::vector<double> c;     // (Gamma_i / 2pi) ln eps
  std::vector<double> sign;  // sign(Gamma_i)
};

double rhsAt(double psi, const Thresholds& th, double p) {
  double s = 0.0;
  for (std::size_t v = 0; v < th.c.size(); ++v)
    s += fNonlinear(psi + th.c[v], th.sign[v], p);
  return s;
}

double rhsPrimeAt(double psi, const Thresholds& th, double p) {
  double s = 0.0;
  for (std::size_t v = 0; v < th.c.size(); ++v)
    s += fNonlinearPrime(psi + th.c[v], th.sign[v], p);
  return s;
}

// Newton solve of -eps^2 (L psi + b) = rhs(psi) for the interior unknowns.
// Returns the final max-norm residual, or throws SolveError.
double newtonSolve(Eigen::VectorXd& u, const GridOperator& op,
                   const Thresholds& th, double eps, double p, double tol,
                   int maxIter) {
  const double eps2 = eps * eps;
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  bool analyzed = false;

  auto residual = [&](const Eigen::VectorXd& v) {
    Eigen::VectorXd r = -eps2 * (op.L * v + op.boundaryTerm);
    for (int k = 0; k < v.size(); ++k) r[k] -= rhsAt(v[k], th, p);
    return r;
  };

  Eigen::VectorXd F = residual(u);
  double fNorm = F.norm();
  for (int it = 0; it < maxIter; ++it) {
    if (F.lpNorm<Eigen::Infinity>() < tol)
      return F.lpNorm<Eigen::Infinity>();

    Eigen::SparseMatrix<double> J = -eps2 * op.L;
    for (int k = 0; k < u.size(); ++k)
      J.coeffRef(k, k) -= rhsPrimeAt(u[k], th, p);
    J.makeCompressed();
    if (!analyzed) {
      lu.analyzePattern(J);
      analyzed = true;
    }
    lu.factorize(J);
    if (lu.info() != Eigen::Success)
      throw SolveError("desing: sparse factorization failed");
    const Eigen::VectorXd step = lu.solve(-F);

    double alpha = 1.0;
    bool accepted = false;
    for (int ls = 0; ls < 40; ++ls) {
      const Eigen::VectorXd trial = u + alpha * step;
      const Eigen::VectorXd Ft = residual(trial);
      if (Ft.norm() < fNorm * (1.0 - 1e-4 * alpha)) {
        u = trial;
        F = Ft;
        fNorm = F.norm();
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted)
      throw SolveError("desing: Newton line search stalled at residual " +
                       std::to_string(fNorm));
  }
  if (F.lpNorm<Eigen::Infinity>() < tol) return F.lpNorm<Eigen::Infinity>();
  throw SolveError("desing: Newton did not reach tolerance, residual " +
                   std::to_string(F.lpNorm<Eigen::Infinity>()));
}

void classifyGrid(GridSolution& grid, const Domain& dom,
                  const DesingParams& params) {
  const auto [lo, hi] = dom.boundingBox();
  const double h = params.gridH;
  const double pad = 2.0 * h;
  grid.h = h;
  grid.origin = lo - Vec2(pad, pad);
  grid.nx = static_cast<int>(std::ceil((hi.x() - lo.x() + 2 * pad) / h)) + 1;
  grid.ny = static_cast<int>(std::ceil((hi.y() - lo.y() + 2 * pad) / h)) + 1;
  grid.interiorIndex.assign(grid.nx * grid.ny, -1);
  int count = 0;
  for (int j = 0; j < grid.ny; ++j)
    for (int i = 0; i < grid.nx; ++i)
      if (dom.contains(grid.node(i, j)))
        grid.interiorIndex[grid.idx(i, j)] = count++;
}

void extractBlobs(GridSolution& grid, const Configuration& xStar,
                  const Thresholds& th, double p) {
  const double h = grid.h;
  const int nx = grid.nx, ny = grid.ny;
  grid.omega.assign(nx * ny, 0.0);
  std::vector<int> fires(nx * ny, 0);
  bool overlap = false;
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int k = grid.idx(i, j);
      if (grid.interiorIndex[k] < 0) continue;
      const double psi = grid.psi[k];
      int nFire = 0;
      double om = 0.0;
      for (std::size_t v = 0; v < th.c.size(); ++v) {
        const double fv = fNonlinear(psi + th.c[v], th.sign[v], p);
        if (fv != 0.0) {
          ++nFire;
          om += fv;
        }
      }
      if (nFire > 1) overlap = true;
      fires[k] = nFire;
      grid.omega[k] = om / (grid.eps * grid.eps);
    }
  }
  if (overlap)
    throw SolveError(
        "desing: overlapping blob supports (several nonlinearities fire at "
        "one node); decrease eps or refine the equilibrium");

  // Connected components of {omega != 0} by BFS over the 4-neighbor graph.
  std::vector<int> comp(nx * ny, -1);
  int nComp = 0;
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int k0 = grid.idx(i, j);
      if (grid.omega[k0] == 0.0 || comp[k0] >= 0) continue;
      std::deque<std::pair<int, int>> queue{{i, j}};
      comp[k0] = nComp;
      std::vector<std::pair<int, int>> members;
      while (!queue.empty()) {
        const auto [ci, cj] = queue.front();
        queue.pop_front();
        members.emplace_back(ci, cj);
        const int dI[4] = {1, -1, 0, 0}, dJ[4] = {0, 0, 1, -1};
        for (int d = 0; d < 4; ++d) {
          const int ni = ci + dI[d], nj = cj + dJ[d];
          if (ni < 0 || nj < 0 || ni >= nx || nj >= ny) continue;
          const int nk = grid.idx(ni, nj);
          if (grid.omega[nk] == 0.0 || comp[nk] >= 0) continue;
          comp[nk] = nComp;
          queue.emplace_back(ni, nj);
        }
      }
      Blob blob;
      double mx = 0.0, my = 0.0;
      for (const auto& [bi, bj] : members) {
        const double w = grid.omega[grid.idx(bi, bj)] * h * h;
        const Vec2 pos = grid.node(bi, bj);
        blob.circulation += w;
        mx += w * pos.x();
        my += w * pos.y();
      }
      blob.cells = static_cast<int>(members.size());
      blob.centroid = Vec2(mx, my) / blob.circulation;
      double diam = 0.0;
      for (std::size_t aIdx = 0; aIdx < members.size(); ++aIdx)
        for (std::size_t bIdx = aIdx + 1; bIdx < members.size(); ++bIdx)
          diam = std::max(
              diam, (grid.node(members[aIdx].first, members[aIdx].second) -
                     grid.node(members[bIdx].first, members[bIdx].second))
                        .norm());
      blob.supportDiameter = diam + h;
      int nearest = -1;
      double bestDist = std::numeric_limits<double>::max();
      for (std::size_t v = 0; v < xStar.size(); ++v) {
        const double d = (blob.centroid - xStar[v]).norm();
        if (d < bestDist) {
          bestDist = d;
          nearest = static_cast<int>(v);
        }
      }
      blob.vortexIndex = nearest;
      grid.blobs.push_back(blob);
      ++nComp;
    }
  }
}

Eigen::VectorXd ansatz(const GridSolution& grid, const HamiltonianModel& m,
                       const Configuration& xStar, const DesingParams& params,
                       const GridOperator& op) {
  const double lnEps = std::log(params.eps);
  const double s = std::abs(lnEps) / kTwoPi;
  const double delta = params.delta();
  const GreenBackend& gb = m.backend();

  // One profile per distinct |Gamma| (plateau level a = |Gamma|).
  std::map<double, RadialProfile> profiles;
  for (int v = 0; v < m.vortexCount(); ++v) {
    const double a = std::abs(m.strengths()[v]);
    if (!profiles.count(a))
      profiles.emplace(a, radialProfile(delta, a, params.R, params.p));
  }

  Eigen::VectorXd u(op.unknowns);
  for (int j = 0; j < grid.ny; ++j) {
    for (int i = 0; i < grid.nx; ++i) {
      const int row = grid.interiorIndex[grid.idx(i, j)];
      if (row < 0) continue;
      const Vec2 x = grid.node(i, j);
      double val = m.flux().eval(x);
      for (int v = 0; v < m.vortexCount(); ++v) {
        const double gamma = m.strengths()[v];
        const RadialProfile& prof = profiles.at(std::abs(gamma));
        const double rr = (x - xStar[v]).norm();
        // Projected profile: W - kappa log R + 2 pi kappa g(x, x_v).
        double pw = prof.value(rr) - prof.outerCoefficient * std::log(params.R);
        if (rr > 1e-12)
          pw += kTwoPi * prof.outerCoefficient * gb.regularPart(x, xStar[v]);
        else
          pw += kTwoPi * prof.outerCoefficient * gb.evalRobin(xStar[v]).h;
        val += (gamma > 0.0 ? 1.0 : -1.0) * s * pw;
      }
      u[row] = val;
    }
  }
  return u;
}

void fillSolutionFields(GridSolution& grid, const Eigen::VectorXd& u,
                        const HarmonicPoly& flux) {
  grid.psi.assign(grid.nx * grid.ny, kNan);
  for (int j = 0; j < grid.ny; ++j) {
    for (int i = 0; i < grid.nx; ++i) {
      const int row = grid.interiorIndex[grid.idx(i, j)];
      if (row >= 0) grid.psi[grid.idx(i, j)] = u[row];
    }
  }
  (void)flux;
}

GridSolution solveCore(const HamiltonianModel* m, const Domain& dom,
                       const HarmonicPoly& flux, const Configuration& xStar,
                       const DesingParams& params, int depth) {
  params.validate();
  GridSolution grid;
  grid.eps = params.eps;
  grid.p = params.p;
  classifyGrid(grid, dom, params);
  const GridOperator op = buildLaplacian(grid, dom, flux);

  Thresholds th;
  if (m) {
    const double lnEps = std::log(params.eps);
    for (int v = 0; v < m->vortexCount(); ++v) {
      th.c.push_back(m->strengths()[v] * kInvTwoPi * lnEps);
      th.sign.push_back(m->strengths()[v] > 0.0 ? 1.0 : -1.0);
    }
  }

  Eigen::VectorXd u;
  if (m) {
    u = ansatz(grid, *m, xStar, params, op);
  } else {
    // No vortices: linear Dirichlet problem.
    u = Eigen::VectorXd::Zero(op.unknowns);
  }

  try {
    grid.newtonResidual = newtonSolve(u, op, th, params.eps, params.p,
                                      params.newtonTol, params.newtonMaxIter);
  } catch (const SolveError&) {
    if (!m || depth >= params.maxContinuationDepth) throw;
    // Continuation: solve at a milder eps and restart from that solution.
    DesingParams easier = params;
    easier.eps = std::min(0.9, params.eps * 2.0);
    const GridSolution coarse = solveCore(m, dom, flux, xStar, easier, depth + 1);
    for (int k = 0; k < grid.nx * grid.ny; ++k) {
      const int row = grid.interiorIndex[k];
      if (row >= 0) u[row] = coarse.psi[k];
    }
    grid.newtonResidual = newtonSolve(u, op, th, params.eps, params.p,
                                      params.newtonTol, params.newtonMaxIter);
  }

  fillSolutionFields(grid, u, flux);
  if (m) extractBlobs(grid, xStar, th, params.p);
  return grid;
}

}  // namespace

GridSolution solveSteadyState(const HamiltonianModel& m,
                              const Configuration& xStar,
                              const DesingParams& params) {
  m.validate(xStar);
  return solveCore(&m, m.domain(), m.flux(), xStar, params, 0);
}

GridSolution solveSteadyState(const Domain& dom, const HarmonicPoly& flux,
                              const DesingParams& params) {
  return solveCore(nullptr, dom, flux, {}, params, 0);
}

VelocityPressureField velocityAndPressure(const GridSolution& sol,
                                          const HamiltonianModel& m) {
  VelocityPressureField out;
  const int n = sol.nx * sol.ny;
  out.vx.assign(n, kNan);
  out.vy.assign(n, kNan);
  out.pressure.assign(n, kNan);
  out.divergence.assign(n, kNan);

  const double lnEps = std::log(sol.eps);
  std::vector<double> c, sgn;
  for (int v = 0; v < m.vortexCount(); ++v) {
    c.push_back(m.strengths()[v] * kInvTwoPi * lnEps);
    sgn.push_back(m.strengths()[v] > 0.0 ? 1.0 : -1.0);
  }

  const double inv2h = 1.0 / (2.0 * sol.h);
  for (int j = 1; j + 1 < sol.ny; ++j) {
    for (int i = 1; i + 1 < sol.nx; ++i) {
      if (!sol.isInterior(i, j) || !sol.isInterior(i + 1, j) ||
          !sol.isInterior(i - 1, j) || !sol.isInterior(i, j + 1) ||
          !sol.isInterior(i, j - 1))
        continue;
      const int k = sol.idx(i, j);
      const double dpx =
          (sol.psi[sol.idx(i + 1, j)] - sol.psi[sol.idx(i - 1, j)]) * inv2h;
      const double dpy =
          (sol.psi[sol.idx(i, j + 1)] - sol.psi[sol.idx(i, j - 1)]) * inv2h;
      // v = J grad psi with J(w1,w2) = (w2,-w1).
      out.vx[k] = dpy;
      out.vy[k] = -dpx;
      double F = 0.0;
      for (std::size_t v = 0; v < c.size(); ++v)
        F += fAntiderivative(sol.psi[k] + c[v], sgn[v], sol.p) /
             (sol.eps * sol.eps);
      out.pressure[k] = F - 0.5 * (dpx * dpx + dpy * dpy);
    }
  }
  for (int j = 2; j + 2 < sol.ny; ++j) {
    for (int i = 2; i + 2 < sol.nx; ++i) {
      const int k = sol.idx(i, j);
      if (std::isnan(out.vx[sol.idx(i + 1, j)]) ||
          std::isnan(out.vx[sol.idx(i - 1, j)]) ||
          std::isnan(out.vy[sol.idx(i, j + 1)]) ||
          std::isnan(out.vy[sol.idx(i, j - 1)]))
        continue;
      out.divergence[k] =
          (out.vx[sol.idx(i + 1, j)] - out.vx[sol.idx(i - 1, j)]) * inv2h +
          (out.vy[sol.idx(i, j + 1)] - out.vy[sol.idx(i, j - 1)]) * inv2h;
    }
  }
  return out;
}

}  // namespace vortex
