#include "vortex/hamiltonian.hpp"

#include <cmath>
#include <sstream>

namespace vortex {

Strengths::Strengths(std::vector<double> gamma) : gamma_(std::move(gamma)) {
  if (gamma_.empty()) throw ValidationError("strength vector must be nonempty");
  for (double g : gamma_)
    if (g == 0.0 || !std::isfinite(g))
      throw ValidationError("vortex strengths must be nonzero and finite");
}

HarmonicPoly::HarmonicPoly(std::vector<double> re, std::vector<double> im)
    : re_{}, im_{} {
  if (re.size() > kMaxDegree + 1 || im.size() > kMaxDegree + 1)
    throw ValidationError("harmonic polynomial degree exceeds 6");
  for (std::size_t k = 0; k < re.size(); ++k) re_[k] = re[k];
  for (std::size_t k = 0; k < im.size(); ++k) im_[k] = im[k];
}

HarmonicPoly HarmonicPoly::constant(double c) {
  HarmonicPoly p;
  p.re_[0] = c;
  return p;
}

HarmonicPoly HarmonicPoly::linear(const Vec2& d) {
  HarmonicPoly p;
  p.re_[1] = d.x();  // Re z = x
  p.im_[1] = d.y();  // Im z = y
  return p;
}

bool HarmonicPoly::isZero() const {
  for (int k = 0; k <= kMaxDegree; ++k)
    if (re_[k] != 0.0 || im_[k] != 0.0) return false;
  return true;
}

double HarmonicPoly::eval(const Vec2& x) const {
  const Complex z = toComplex(x);
  Complex zk(1.0, 0.0);
  double val = 0.0;
  for (int k = 0; k <= kMaxDegree; ++k) {
    val += re_[k] * zk.real() + im_[k] * zk.imag();
    zk *= z;
  }
  return val;
}

Vec2 HarmonicPoly::grad(const Vec2& x) const {
  // d/dz z^k = k z^(k-1); grad Re f = (Re f', -Im f'), grad Im f = (Im f', Re f').
  const Complex z = toComplex(x);
  Complex zk(1.0, 0.0);  // z^(k-1) below
  Vec2 g = Vec2::Zero();
  for (int k = 1; k <= kMaxDegree; ++k) {
    const Complex fp = static_cast<double>(k) * zk;
    g.x() += re_[k] * fp.real() + im_[k] * fp.imag();
    g.y() += -re_[k] * fp.imag() + im_[k] * fp.real();
    zk *= z;
  }
  return g;
}

HamiltonianModel::HamiltonianModel(std::shared_ptr<const GreenBackend> backend,
                                   Strengths gamma, HarmonicPoly flux,
                                   std::optional<ExtraTerm> extra)
    : backend_(std::move(backend)),
      gamma_(std::move(gamma)),
      flux_(std::move(flux)),
      extra_(std::move(extra)) {
  if (!backend_) throw ValidationError("hamiltonian model needs a backend");
}

void HamiltonianModel::validate(const Configuration& x) const {
  if (static_cast<int>(x.size()) != gamma_.size()) {
    std::ostringstream os;
    os << "configuration has " << x.size() << " points, expected "
       << gamma_.size();
    throw ConfigurationError(os.str());
  }
  const Domain& dom = backend_->domain();
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!dom.contains(x[i])) {
      std::ostringstream os;
      os << "vortex " << i << " at (" << x[i].x() << ", " << x[i].y()
         << ") is not strictly interior";
      throw ConfigurationError(os.str());
    }
    for (std::size_t j = i + 1; j < x.size(); ++j) {
      if ((x[i] - x[j]).norm() <= kMinSeparation) {
        std::ostringstream os;
        os << "vortices " << i << " and " << j << " closer than the minimum "
           << "separation " << kMinSeparation;
        throw ConfigurationError(os.str());
      }
    }
  }
}

double HamiltonianModel::evalH(const Configuration& x) const {
  validate(x);
  const int n = gamma_.size();
  double val = 0.0;
  for (int i = 0; i < n; ++i) {
    val += gamma_[i] * gamma_[i] * backend_->evalRobin(x[i]).h;
    val += 2.0 * gamma_[i] * flux_.eval(x[i]);
    for (int j = i + 1; j < n; ++j)
      val += 2.0 * gamma_[i] * gamma_[j] * backend_->evalG(x[i], x[j]).G;
  }
  if (extra_) val += extra_->value(x);
  return val;
}

double HamiltonianModel::evalKR(const Configuration& x) const {
  validate(x);
  const int n = gamma_.size();
  double val = 0.0;
  for (int i = 0; i < n; ++i) {
    val += gamma_[i] * gamma_[i] * backend_->evalRobin(x[i]).h;
    val += 2.0 * gamma_[i] * flux_.eval(x[i]);
    for (int j = i + 1; j < n; ++j)
      val += 2.0 * gamma_[i] * gamma_[j] * backend_->evalG(x[i], x[j]).G;
  }
  return val;
}

std::vector<Vec2> HamiltonianModel::gradH(const Configuration& x) const {
  validate(x);
  const int n = gamma_.size();
  std::vector<Vec2> g(n, Vec2::Zero());
  for (int i = 0; i < n; ++i) {
    g[i] = gamma_[i] * gamma_[i] * backend_->evalRobin(x[i]).gradH +
           2.0 * gamma_[i] * flux_.grad(x[i]);
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const GreenEval e = backend_->evalG(x[i], x[j]);
      g[i] += 2.0 * gamma_[i] * gamma_[j] * e.gradX;
      g[j] += 2.0 * gamma_[i] * gamma_[j] * e.gradY;
    }
  }
  if (extra_) {
    const std::vector<Vec2> ge = extra_->grad(x);
    for (int i = 0; i < n; ++i) g[i] += ge[i];
  }
  return g;
}

PhiEval HamiltonianModel::evalPhi(const Configuration& x) const {
  validate(x);
  const int n = gamma_.size();
  PhiEval out;
  out.grad.assign(n, Vec2::Zero());
  for (int i = 0; i < n; ++i) {
    const RobinEval r = backend_->evalRobin(x[i]);
    out.phi += gamma_[i] * gamma_[i] * r.h;
    out.grad[i] = gamma_[i] * gamma_[i] * r.gradH;
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const GreenEval e = backend_->evalG(x[i], x[j]);
      const double c = std::abs(gamma_[i] * gamma_[j]);
      out.phi -= 2.0 * c * e.G;
      out.grad[i] -= 2.0 * c * e.gradX;
      out.grad[j] -= 2.0 * c * e.gradY;
    }
  }
  return out;
}

HamiltonianModel::FullEval HamiltonianModel::evalAll(
    const Configuration& x) const {
  validate(x);
  const int n = gamma_.size();
  FullEval out;
  out.gradH.assign(n, Vec2::Zero());
  out.gradPhi.assign(n, Vec2::Zero());
  for (int i = 0; i < n; ++i) {
    const RobinEval r = backend_->evalRobin(x[i]);
    const double g2 = gamma_[i] * gamma_[i];
    out.H += g2 * r.h + 2.0 * gamma_[i] * flux_.eval(x[i]);
    out.phi += g2 * r.h;
    out.gradH[i] = g2 * r.gradH + 2.0 * gamma_[i] * flux_.grad(x[i]);
    out.gradPhi[i] = g2 * r.gradH;
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const GreenEval e = backend_->evalG(x[i], x[j]);
      const double c = gamma_[i] * gamma_[j];
      const double ca = std::abs(c);
      out.H += 2.0 * c * e.G;
      out.phi -= 2.0 * ca * e.G;
      out.gradH[i] += 2.0 * c * e.gradX;
      out.gradH[j] += 2.0 * c * e.gradY;
      out.gradPhi[i] -= 2.0 * ca * e.gradX;
      out.gradPhi[j] -= 2.0 * ca * e.gradY;
    }
  }
  if (extra_) {
    out.H += extra_->value(x);
    const std::vector<Vec2> ge = extra_->grad(x);
    for (int i = 0; i < n; ++i) out.gradH[i] += ge[i];
  }
  return out;
}

}  // namespace vortex
