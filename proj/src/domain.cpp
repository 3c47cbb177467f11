#include "vortex/domain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace vortex {

namespace {

// Nearest point of the segment [a,b] to x.
Vec2 closestOnSegment(const Vec2& a, const Vec2& b, const Vec2& x) {
  const Vec2 ab = b - a;
  const double len2 = ab.squaredNorm();
  if (len2 == 0.0) return a;
  double t = (x - a).dot(ab) / len2;
  t = std::clamp(t, 0.0, 1.0);
  return a + t * ab;
}

bool segmentsIntersect(const Vec2& a, const Vec2& b, const Vec2& c,
                       const Vec2& d) {
  const double d1 = cross2(b - a, c - a);
  const double d2 = cross2(b - a, d - a);
  const double d3 = cross2(d - c, a - c);
  const double d4 = cross2(d - c, b - c);
  return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0));
}

}  // namespace

double Domain::distToBoundary(const Vec2& x) const {
  if (!contains(x)) {
    const double d = unsignedBoundaryDistance(x);
    if (d > 0.0) {
      std::ostringstream os;
      os << "distToBoundary: point (" << x.x() << ", " << x.y()
         << ") is not in the closed domain";
      throw DomainError(os.str());
    }
  }
  return unsignedBoundaryDistance(x);
}

BoundaryFrame Domain::boundaryFrame(const Vec2& x) const {
  if (!contains(x)) throw CollarError("boundaryFrame: point not interior");
  const double d = unsignedBoundaryDistance(x);
  if (!(d > 0.0 && d < eps0_)) {
    std::ostringstream os;
    os << "boundaryFrame: dist " << d << " outside collar (0, " << eps0_ << ")";
    throw CollarError(os.str());
  }
  BoundaryFrame f;
  f.d = d;
  f.p = nearestBoundaryPoint(x);
  f.nu = (x - f.p) / d;
  f.xbar = x - 2.0 * d * f.nu;
  return f;
}

Vec2 Domain::reflect(const Vec2& x) const {
  const double d = unsignedBoundaryDistance(x);
  if (!(d < eps0_)) throw CollarError("reflect: point outside collar");
  return 2.0 * nearestBoundaryPoint(x) - x;
}

// ---------------------------------------------------------------------------
// Unit disc

UnitDiscDomain::UnitDiscDomain() { eps0_ = 0.2; }

bool UnitDiscDomain::contains(const Vec2& x) const { return x.norm() < 1.0; }

Vec2 UnitDiscDomain::nearestBoundaryPoint(const Vec2& x) const {
  const double r = x.norm();
  if (r == 0.0) return {1.0, 0.0};  // any boundary point; center is not in the collar
  return x / r;
}

std::pair<Vec2, Vec2> UnitDiscDomain::boundingBox() const {
  return {Vec2(-1.0, -1.0), Vec2(1.0, 1.0)};
}

double UnitDiscDomain::unsignedBoundaryDistance(const Vec2& x) const {
  return std::abs(1.0 - x.norm());
}

// ---------------------------------------------------------------------------
// Annulus

AnnulusDomain::AnnulusDomain(double innerRadius) : q_(innerRadius) {
  if (!(q_ > 0.0 && q_ < 1.0))
    throw GeometryError("annulus inner radius must lie in (0,1)");
  eps0_ = 0.2 * inradius();
}

std::string AnnulusDomain::describe() const {
  std::ostringstream os;
  os << "annulus(" << q_ << ")";
  return os.str();
}

bool AnnulusDomain::contains(const Vec2& x) const {
  const double r = x.norm();
  return r > q_ && r < 1.0;
}

Vec2 AnnulusDomain::nearestBoundaryPoint(const Vec2& x) const {
  const double r = x.norm();
  if (r == 0.0) return {q_, 0.0};
  const Vec2 u = x / r;
  return (1.0 - r <= std::abs(r - q_)) ? Vec2(u) : Vec2(q_ * u);
}

std::pair<Vec2, Vec2> AnnulusDomain::boundingBox() const {
  return {Vec2(-1.0, -1.0), Vec2(1.0, 1.0)};
}

double AnnulusDomain::unsignedBoundaryDistance(const Vec2& x) const {
  const double r = x.norm();
  return std::min(std::abs(1.0 - r), std::abs(r - q_));
}

// ---------------------------------------------------------------------------
// Panel boundary

PanelDomain::PanelDomain(std::vector<Vec2> boundaryPoints)
    : pts_(std::move(boundaryPoints)) {
  const std::size_t n = pts_.size();
  if (n < 3) throw GeometryError("panel boundary needs at least 3 points");

  // Signed area: must be positive (counterclockwise orientation).
  double area2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) area2 += cross2(pts_[i], pts_[(i + 1) % n]);
  if (area2 <= 0.0)
    throw GeometryError("panel boundary must be positively oriented");

  // Simplicity: no two non-adjacent panels intersect.
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;  // adjacent around the seam
      if (segmentsIntersect(pts_[i], pts_[(i + 1) % n], pts_[j],
                            pts_[(j + 1) % n]))
        throw GeometryError("panel boundary is self-intersecting");
    }
  }

  bbMin_ = pts_[0];
  bbMax_ = pts_[0];
  for (const Vec2& p : pts_) {
    bbMin_ = bbMin_.cwiseMin(p);
    bbMax_ = bbMax_.cwiseMax(p);
  }

  // Inradius estimate: max boundary distance over a coarse interior grid.
  const int m = 48;
  double best = 0.0;
  for (int i = 0; i <= m; ++i) {
    for (int j = 0; j <= m; ++j) {
      Vec2 x(bbMin_.x() + (bbMax_.x() - bbMin_.x()) * i / m,
             bbMin_.y() + (bbMax_.y() - bbMin_.y()) * j / m);
      if (contains(x)) best = std::max(best, unsignedBoundaryDistance(x));
    }
  }
  if (best == 0.0) throw GeometryError("panel boundary encloses no area");
  inradius_ = best;

  // Collar width: start from 0.2*inradius and shrink until sampled
  // nearest-point uniqueness holds along panel-midpoint normals, then halve.
  double eps = 0.2 * inradius_;
  for (int attempt = 0; attempt < 20; ++attempt) {
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i) {
      const Vec2 mid = 0.5 * (panelStart(i) + panelEnd(i));
      const Vec2 nrm = panelOutwardNormal(i);
      for (double t : {0.25, 0.5, 0.9}) {
        const Vec2 x = mid - t * eps * nrm;  // step toward the interior
        if (!contains(x)) continue;
        const Vec2 p = nearestBoundaryPoint(x);
        if ((p - mid).norm() > t * eps + 1e-12) {
          ok = false;
          break;
        }
      }
    }
    if (ok) break;
    eps *= 0.5;
  }
  eps0_ = 0.5 * eps;
}

std::string PanelDomain::describe() const {
  std::ostringstream os;
  os << "panel boundary (" << pts_.size() << " panels)";
  return os.str();
}

bool PanelDomain::contains(const Vec2& x) const {
  if (x.x() < bbMin_.x() || x.x() > bbMax_.x() || x.y() < bbMin_.y() ||
      x.y() > bbMax_.y())
    return false;
  // Crossing-number test against the horizontal ray to +infinity.
  const std::size_t n = pts_.size();
  bool inside = false;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& a = pts_[i];
    const Vec2& b = pts_[(i + 1) % n];
    if ((a.y() > x.y()) != (b.y() > x.y())) {
      const double xc = a.x() + (x.y() - a.y()) / (b.y() - a.y()) * (b.x() - a.x());
      if (x.x() < xc) inside = !inside;
    }
  }
  return inside && unsignedBoundaryDistance(x) > 0.0;
}

Vec2 PanelDomain::nearestBoundaryPoint(const Vec2& x) const {
  double best = std::numeric_limits<double>::max();
  Vec2 bestP = pts_[0];
  const std::size_t n = pts_.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 p = closestOnSegment(pts_[i], pts_[(i + 1) % n], x);
    const double d = (x - p).squaredNorm();
    if (d < best) {
      best = d;
      bestP = p;
    }
  }
  return bestP;
}

std::pair<Vec2, Vec2> PanelDomain::boundingBox() const { return {bbMin_, bbMax_}; }

double PanelDomain::unsignedBoundaryDistance(const Vec2& x) const {
  return (x - nearestBoundaryPoint(x)).norm();
}

Vec2 PanelDomain::panelOutwardNormal(std::size_t i) const {
  const Vec2 t = (panelEnd(i) - panelStart(i)).normalized();
  return {t.y(), -t.x()};  // interior on the left for CCW orientation
}

Vec2 PanelDomain::vertexOutwardNormal(std::size_t i) const {
  const std::size_t n = pts_.size();
  const Vec2 nPrev = panelOutwardNormal((i + n - 1) % n);
  const Vec2 nNext = panelOutwardNormal(i);
  Vec2 avg = nPrev + nNext;
  const double len = avg.norm();
  return len > 1e-14 ? Vec2(avg / len) : nNext;
}

// ---------------------------------------------------------------------------

std::shared_ptr<const Domain> makeUnitDisc() {
  return std::make_shared<UnitDiscDomain>();
}

std::shared_ptr<const Domain> makeAnnulus(double innerRadius) {
  return std::make_shared<AnnulusDomain>(innerRadius);
}

std::shared_ptr<const Domain> makePanelDomain(std::vector<Vec2> boundaryPoints) {
  return std::make_shared<PanelDomain>(std::move(boundaryPoints));
}

std::vector<Vec2> regularPolygon(int n, double radius, double phase) {
  std::vector<Vec2> pts;
  pts.reserve(n);
  for (int i = 0; i < n; ++i) {
    const double t = kTwoPi * (i + phase) / n;
    pts.emplace_back(radius * std::cos(t), radius * std::sin(t));
  }
  return pts;
}

}  // namespace vortex
