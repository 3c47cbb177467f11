#pragma once

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "vortex/green.hpp"
#include "vortex/types.hpp"

namespace vortex {

/// Vortex strength vector; every entry nonzero.
class Strengths {
 public:
  Strengths() = default;
  Strengths(std::initializer_list<double> g) : Strengths(std::vector<double>(g)) {}
  explicit Strengths(std::vector<double> gamma);

  int size() const { return static_cast<int>(gamma_.size()); }
  double operator[](int i) const { return gamma_[i]; }
  const std::vector<double>& values() const { return gamma_; }

 private:
  std::vector<double> gamma_;
};

/// N distinct interior points; validity is checked by HamiltonianModel.
using Configuration = std::vector<Vec2>;

/// Harmonic polynomial psi0 = sum_k re_k Re(z^k) + im_k Im(z^k), k <= 6.
/// Harmonic by construction, with closed-form gradients.
class HarmonicPoly {
 public:
  static constexpr int kMaxDegree = 6;

  HarmonicPoly() : re_{}, im_{} {}
  HarmonicPoly(std::vector<double> re, std::vector<double> im);

  static HarmonicPoly zero() { return {}; }
  static HarmonicPoly constant(double c);
  /// psi0(x) = d . x (linear, harmonic).
  static HarmonicPoly linear(const Vec2& d);

  double eval(const Vec2& x) const;
  Vec2 grad(const Vec2& x) const;
  bool isZero() const;

  std::array<double, kMaxDegree + 1> re_, im_;
};

/// Optional smooth perturbation term with its gradient.
struct ExtraTerm {
  std::function<double(const Configuration&)> value;
  std::function<std::vector<Vec2>(const Configuration&)> grad;
};

struct PhiEval {
  double phi = 0.0;
  std::vector<Vec2> grad;
};

/// Hamiltonian of the N-vortex type:
///   H(x) = sum Gamma_i^2 h(x_i) + sum_{i != j} Gamma_i Gamma_j G(x_i,x_j)
///          + 2 sum Gamma_i psi0(x_i) + extra(x)
/// together with the barrier functional
///   Phi(x) = sum Gamma_i^2 h(x_i) - sum_{i != j} |Gamma_i Gamma_j| G(x_i,x_j).
class HamiltonianModel {
 public:
  HamiltonianModel(std::shared_ptr<const GreenBackend> backend,
                   Strengths gamma,
                   HarmonicPoly flux = HarmonicPoly::zero(),
                   std::optional<ExtraTerm> extra = std::nullopt);

  int vortexCount() const { return gamma_.size(); }
  const Strengths& strengths() const { return gamma_; }
  const GreenBackend& backend() const { return *backend_; }
  std::shared_ptr<const GreenBackend> backendPtr() const { return backend_; }
  const Domain& domain() const { return backend_->domain(); }
  const HarmonicPoly& flux() const { return flux_; }
  bool hasExtra() const { return extra_.has_value(); }

  /// Throws ConfigurationError unless all points are strictly interior and
  /// pairwise separated by more than the minimum separation guard.
  void validate(const Configuration& x) const;

  double evalH(const Configuration& x) const;
  std::vector<Vec2> gradH(const Configuration& x) const;
  PhiEval evalPhi(const Configuration& x) const;

  /// Kirchhoff-Routh path function: H without the extra term.
  double evalKR(const Configuration& x) const;

  /// One-pass evaluation sharing the Green calls; the flow integrator's
  /// hot path.
  struct FullEval {
    double H = 0.0;
    double phi = 0.0;
    std::vector<Vec2> gradH;
    std::vector<Vec2> gradPhi;
  };
  FullEval evalAll(const Configuration& x) const;

  static constexpr double kMinSeparation = 1e-12;

 private:
  std::shared_ptr<const GreenBackend> backend_;
  Strengths gamma_;
  HarmonicPoly flux_;
  std::optional<ExtraTerm> extra_;
};

}  // namespace vortex
