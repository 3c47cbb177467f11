#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <vector>

#include "vortex/green.hpp"

namespace vortex {

// Interior Dirichlet problem for the regular part g(.,y), boundary data
// (1/2pi) log|s-y|, represented by a double-layer potential
//   g(x) = int mu(s) K(x,s) ds,  K(x,s) = (1/2pi) (x-s).n_s / |x-s|^2
// with n_s the outward normal. The interior trace gives the second-kind
// equation (-I/2 + K) mu = beta, collocated at panel midpoints.
//
// Disc boundaries use the Nystrom rule on the exact circle (nodes double as
// quadrature points; the kernel is smooth up to the diagonal, where it tends
// to -kappa/4pi). Polygonal boundaries use piecewise-constant densities with
// the exact subtended-angle panel integrals, so no quadrature error enters.

namespace {

struct Node {
  Vec2 s;       // node position on the boundary
  Vec2 n;       // outward unit normal
  double w;     // quadrature weight (arc length share); unused in polygon mode
};

double kernelK(const Vec2& x, const Vec2& s, const Vec2& n) {
  const Vec2 d = x - s;
  return kInvTwoPi * d.dot(n) / d.squaredNorm();
}

Vec2 kernelGradX(const Vec2& x, const Vec2& s, const Vec2& n) {
  const Vec2 d = x - s;
  const double r2 = d.squaredNorm();
  return kInvTwoPi * (n / r2 - 2.0 * d.dot(n) / (r2 * r2) * d);
}

// Gauss-Legendre nodes/weights on [-1,1] for small orders.
void gaussLegendre(int order, std::vector<double>& xs, std::vector<double>& ws) {
  switch (order) {
    case 1:
      xs = {0.0};
      ws = {2.0};
      break;
    case 2:
      xs = {-0.5773502691896257, 0.5773502691896257};
      ws = {1.0, 1.0};
      break;
    case 3:
      xs = {-0.7745966692414834, 0.0, 0.7745966692414834};
      ws = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
      break;
    case 4:
      xs = {-0.8611363115940526, -0.3399810435848563, 0.3399810435848563,
            0.8611363115940526};
      ws = {0.3478548451374538, 0.6521451548625461, 0.6521451548625461,
            0.3478548451374538};
      break;
    default:
      throw GeometryError("BEM quadrature order must be in 1..4");
  }
}

}  // namespace

struct BemGreen::Impl {
  bool polygon = false;
  std::vector<Node> nodes;
  const PanelDomain* panels = nullptr;  // polygon mode only
  Eigen::MatrixXd A;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu;
  Eigen::PartialPivLU<Eigen::MatrixXd> luT;

  // Polygon mode: exact double-layer integral of unit density over panel j.
  double panelIntegral(std::size_t j, const Vec2& x) const {
    const Complex a = toComplex(panels->panelStart(j));
    const Complex b = toComplex(panels->panelEnd(j));
    const Complex z = toComplex(x);
    return -kInvTwoPi * std::arg((b - z) / (a - z));
  }

  Vec2 panelIntegralGradX(std::size_t j, const Vec2& x) const {
    const Complex a = toComplex(panels->panelStart(j));
    const Complex b = toComplex(panels->panelEnd(j));
    const Complex z = toComplex(x);
    const Complex fp = -1.0 / (b - z) + 1.0 / (a - z);
    return -kInvTwoPi * Vec2(fp.imag(), fp.real());
  }

  // Influence row: g(x) = row(x) . mu.
  Eigen::VectorXd row(const Vec2& x) const {
    Eigen::VectorXd r(nodes.size());
    if (polygon) {
      for (std::size_t j = 0; j < nodes.size(); ++j)
        r[j] = panelIntegral(j, x);
    } else {
      for (std::size_t j = 0; j < nodes.size(); ++j)
        r[j] = nodes[j].w * kernelK(x, nodes[j].s, nodes[j].n);
    }
    return r;
  }

  Eigen::VectorXd data(const Vec2& y) const {
    Eigen::VectorXd b(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i)
      b[i] = kInvTwoPi * std::log((nodes[i].s - y).norm());
    return b;
  }

  // d/dy of the boundary data, one column per component of y.
  Eigen::MatrixXd dataGradY(const Vec2& y) const {
    Eigen::MatrixXd b(nodes.size(), 2);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const Vec2 g = kInvTwoPi * (y - nodes[i].s) / (nodes[i].s - y).squaredNorm();
      b(i, 0) = g.x();
      b(i, 1) = g.y();
    }
    return b;
  }
};

BemGreen::BemGreen(std::shared_ptr<const Domain> dom, int panelCount,
                   int quadratureOrder)
    : GreenBackend(std::move(dom)), impl_(std::make_unique<Impl>()) {
  switch (dom_->shape()) {
    case DomainShape::UnitDisc: {
      if (panelCount < 8) throw GeometryError("BEM needs at least 8 panels");
      std::vector<double> gx, gw;
      gaussLegendre(quadratureOrder, gx, gw);
      const double dt = kTwoPi / panelCount;
      for (int p = 0; p < panelCount; ++p) {
        for (int q = 0; q < quadratureOrder; ++q) {
          const double t = (p + 0.5 * (1.0 + gx[q])) * dt;
          Node nd;
          nd.s = {std::cos(t), std::sin(t)};
          nd.n = nd.s;
          nd.w = 0.5 * gw[q] * dt;
          impl_->nodes.push_back(nd);
        }
      }
      const std::size_t n = impl_->nodes.size();
      impl_->A.resize(n, n);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          const double kij =
              (i == j) ? -1.0 / (4.0 * kPi)  // diagonal limit -kappa/4pi
                       : kernelK(impl_->nodes[i].s, impl_->nodes[j].s,
                                 impl_->nodes[j].n);
          impl_->A(i, j) = impl_->nodes[j].w * kij - (i == j ? 0.5 : 0.0);
        }
      }
      break;
    }
    case DomainShape::Panel: {
      impl_->polygon = true;
      impl_->panels = static_cast<const PanelDomain*>(dom_.get());
      const std::size_t n = impl_->panels->panelCount();
      for (std::size_t i = 0; i < n; ++i) {
        Node nd;
        nd.s = 0.5 * (impl_->panels->panelStart(i) + impl_->panels->panelEnd(i));
        nd.n = impl_->panels->panelOutwardNormal(i);
        nd.w = (impl_->panels->panelEnd(i) - impl_->panels->panelStart(i)).norm();
        impl_->nodes.push_back(nd);
      }
      impl_->A.resize(n, n);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          const double kij =
              (i == j) ? 0.0 : impl_->panelIntegral(j, impl_->nodes[i].s);
          impl_->A(i, j) = kij - (i == j ? 0.5 : 0.0);
        }
      }
      break;
    }
    case DomainShape::Annulus:
      throw GeometryError(
          "BEM backend supports simply connected boundaries only; "
          "use the image series for the annulus");
  }

  impl_->lu.compute(impl_->A);
  impl_->luT.compute(impl_->A.transpose());
}

BemGreen::~BemGreen() = default;

int BemGreen::nodeCount() const { return static_cast<int>(impl_->nodes.size()); }

double BemGreen::regularPart(const Vec2& x, const Vec2& y) const {
  requireInterior(x);
  requireInterior(y);
  const Eigen::VectorXd mu = impl_->lu.solve(impl_->data(y));
  return impl_->row(x).dot(mu);
}

GreenEval BemGreen::evalG(const Vec2& x, const Vec2& y) const {
  requireInterior(x);
  requireInterior(y);
  requireDistinct(x, y);

  const Eigen::VectorXd mu = impl_->lu.solve(impl_->data(y));
  const Eigen::VectorXd rowX = impl_->row(x);

  GreenEval out;
  const Vec2 diff = x - y;
  const double r2 = diff.squaredNorm();
  out.G = rowX.dot(mu) - kInvTwoPi * 0.5 * std::log(r2);

  Vec2 gx = Vec2::Zero();
  if (impl_->polygon) {
    for (std::size_t j = 0; j < impl_->nodes.size(); ++j)
      gx += mu[j] * impl_->panelIntegralGradX(j, x);
  } else {
    for (std::size_t j = 0; j < impl_->nodes.size(); ++j)
      gx += mu[j] * impl_->nodes[j].w *
            kernelGradX(x, impl_->nodes[j].s, impl_->nodes[j].n);
  }
  out.gradX = gx - kInvTwoPi * diff / r2;

  const Eigen::VectorXd v = impl_->luT.solve(rowX);
  const Eigen::MatrixXd db = impl_->dataGradY(y);
  out.gradY = Vec2(v.dot(db.col(0)), v.dot(db.col(1))) + kInvTwoPi * diff / r2;
  return out;
}

RobinEval BemGreen::evalRobin(const Vec2& x) const {
  requireInterior(x);
  const Eigen::VectorXd beta = impl_->data(x);
  const Eigen::VectorXd mu = impl_->lu.solve(beta);
  const Eigen::VectorXd rowX = impl_->row(x);

  RobinEval out;
  out.h = rowX.dot(mu);

  Vec2 g1 = Vec2::Zero();
  if (impl_->polygon) {
    for (std::size_t j = 0; j < impl_->nodes.size(); ++j)
      g1 += mu[j] * impl_->panelIntegralGradX(j, x);
  } else {
    for (std::size_t j = 0; j < impl_->nodes.size(); ++j)
      g1 += mu[j] * impl_->nodes[j].w *
            kernelGradX(x, impl_->nodes[j].s, impl_->nodes[j].n);
  }
  const Eigen::VectorXd v = impl_->luT.solve(rowX);
  const Eigen::MatrixXd db = impl_->dataGradY(x);
  const Vec2 g2(v.dot(db.col(0)), v.dot(db.col(1)));
  out.gradH = g1 + g2;
  return out;
}

double BemGreen::boundaryResidual(const Vec2& y) const {
  requireInterior(y);
  const Eigen::VectorXd beta = impl_->data(y);
  const Eigen::VectorXd mu = impl_->lu.solve(beta);
  // Residual of the collocation equations: the interior trace of the
  // double-layer minus the data, i.e. the boundary value of G at the panel
  // midpoints.
  return (impl_->A * mu - beta).lpNorm<Eigen::Infinity>();
}

std::shared_ptr<const GreenBackend> makeBemGreen(
    std::shared_ptr<const Domain> dom, int panelCount, int quadratureOrder) {
  return std::make_shared<BemGreen>(std::move(dom), panelCount, quadratureOrder);
}

}  // namespace vortex
