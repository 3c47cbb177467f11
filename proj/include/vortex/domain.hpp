#pragma once

#include <memory>
#include <vector>

#include "vortex/types.hpp"

namespace vortex {

/// Boundary-geometry data of a point in the collar: distance, projected
/// boundary point, interior unit normal at the projection, and the normal
/// reflection across the boundary.
struct BoundaryFrame {
  double d = 0.0;  ///< distance to the boundary
  Vec2 p;          ///< nearest boundary point, p = x - d*nu
  Vec2 nu;         ///< interior unit normal at p
  Vec2 xbar;       ///< reflected point, xbar = x - 2*d*nu
};

enum class DomainShape { UnitDisc, Annulus, Panel };

/// A bounded planar domain with boundary-geometry queries. Immutable after
/// construction; all queries are safe for concurrent use.
class Domain {
 public:
  virtual ~Domain() = default;

  virtual DomainShape shape() const = 0;
  virtual std::string describe() const = 0;

  /// Strict interior test.
  virtual bool contains(const Vec2& x) const = 0;

  /// Distance from a point of the closed domain to the boundary.
  /// Throws DomainError if x lies outside.
  double distToBoundary(const Vec2& x) const;

  /// Nearest boundary point. Defined for any x close enough to the boundary
  /// that the nearest point is unique (always inside the collar, both sides).
  virtual Vec2 nearestBoundaryPoint(const Vec2& x) const = 0;

  /// Boundary frame of an interior collar point (0 < d < stripWidth()).
  BoundaryFrame boundaryFrame(const Vec2& x) const;

  /// Normal reflection across the boundary, x -> 2 p(x) - x. Valid on both
  /// sides of the boundary within the collar; an involution there.
  Vec2 reflect(const Vec2& x) const;

  /// Width of the collar where the reflection is well defined.
  double stripWidth() const { return eps0_; }

  /// Radius of the largest inscribed disc (exact for disc/annulus,
  /// an estimate for panel boundaries).
  virtual double inradius() const = 0;

  /// Axis-aligned bounding box {min, max}.
  virtual std::pair<Vec2, Vec2> boundingBox() const = 0;

  /// Unsigned distance to the boundary, valid for any point in the plane.
  virtual double unsignedBoundaryDistance(const Vec2& x) const = 0;

 protected:
  double eps0_ = 0.0;
};

class UnitDiscDomain final : public Domain {
 public:
  UnitDiscDomain();
  DomainShape shape() const override { return DomainShape::UnitDisc; }
  std::string describe() const override { return "unit disc"; }
  bool contains(const Vec2& x) const override;
  Vec2 nearestBoundaryPoint(const Vec2& x) const override;
  double inradius() const override { return 1.0; }
  std::pair<Vec2, Vec2> boundingBox() const override;
  double unsignedBoundaryDistance(const Vec2& x) const override;
};

class AnnulusDomain final : public Domain {
 public:
  /// Annulus innerRadius < |x| < 1 with innerRadius in (0,1).
  explicit AnnulusDomain(double innerRadius);
  DomainShape shape() const override { return DomainShape::Annulus; }
  std::string describe() const override;
  bool contains(const Vec2& x) const override;
  Vec2 nearestBoundaryPoint(const Vec2& x) const override;
  double inradius() const override { return 0.5 * (1.0 - q_); }
  std::pair<Vec2, Vec2> boundingBox() const override;
  double unsignedBoundaryDistance(const Vec2& x) const override;
  double innerRadius() const { return q_; }

 private:
  double q_;
};

/// Domain bounded by a closed, simple, positively oriented polyline.
class PanelDomain final : public Domain {
 public:
  explicit PanelDomain(std::vector<Vec2> boundaryPoints);
  DomainShape shape() const override { return DomainShape::Panel; }
  std::string describe() const override;
  bool contains(const Vec2& x) const override;
  Vec2 nearestBoundaryPoint(const Vec2& x) const override;
  double inradius() const override { return inradius_; }
  std::pair<Vec2, Vec2> boundingBox() const override;
  double unsignedBoundaryDistance(const Vec2& x) const override;

  const std::vector<Vec2>& vertices() const { return pts_; }
  std::size_t panelCount() const { return pts_.size(); }
  Vec2 panelStart(std::size_t i) const { return pts_[i]; }
  Vec2 panelEnd(std::size_t i) const { return pts_[(i + 1) % pts_.size()]; }
  /// Outward unit normal of panel i (interior lies on the left of the
  /// oriented panel).
  Vec2 panelOutwardNormal(std::size_t i) const;
  /// Outward unit normal at a vertex, averaged over the adjacent panels.
  Vec2 vertexOutwardNormal(std::size_t i) const;

 private:
  std::vector<Vec2> pts_;
  Vec2 bbMin_, bbMax_;
  double inradius_ = 0.0;
};

std::shared_ptr<const Domain> makeUnitDisc();
std::shared_ptr<const Domain> makeAnnulus(double innerRadius);
std::shared_ptr<const Domain> makePanelDomain(std::vector<Vec2> boundaryPoints);
/// Regular n-gon vertices on a circle; phase shifts the vertices by
/// phase * (2 pi / n) (phase 0.5 puts panel midpoints on the axes).
std::vector<Vec2> regularPolygon(int n, double radius = 1.0,
                                 double phase = 0.0);

}  // namespace vortex
