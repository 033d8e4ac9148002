#include "covlab/manifold.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace covlab {

namespace {

constexpr double kTol = 1e-12;
constexpr double kPi = std::numbers::pi;

double unit_ball_volume(int d) {
  return std::pow(kPi, d / 2.0) / std::tgamma(1.0 + d / 2.0);
}

Point cross(const Point& a, const Point& b) {
  return Point{a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

double great_circle(const Point& x, const Point& y) {
  return std::atan2(norm(cross(x, y)), dot(x, y));
}

const Point& north_pole() {
  static const Point pole{0.0, 0.0, 1.0};
  return pole;
}

// Closest point of the spherical cap {y : angle(y, axis) <= psi} to x.
Point project_to_cap(const Point& x, const Point& axis, double psi) {
  const double t = great_circle(x, axis);
  if (t <= psi) return x;
  Point w = x;
  const double c = dot(x, axis);
  for (int i = 0; i < 3; ++i) w[i] -= c * axis[i];
  double wn = norm(w);
  if (wn < 1e-300) {
    // x is antipodal to the axis; every boundary point is equally close.
    w = std::fabs(axis[0]) < 0.9 ? Point{1.0, 0.0, 0.0} : Point{0.0, 1.0, 0.0};
    const double c2 = dot(w, axis);
    for (int i = 0; i < 3; ++i) w[i] -= c2 * axis[i];
    wn = norm(w);
  }
  Point p = Point::zeros(3);
  for (int i = 0; i < 3; ++i) p[i] = std::cos(psi) * axis[i] + std::sin(psi) * w[i] / wn;
  return p;
}

Point normalized(const Point& x) {
  const double n = norm(x);
  return n > 0.0 ? scaled(x, 1.0 / n) : north_pole();
}

Point project_to_euclidean_ball(const Point& x, const Point& center, double radius) {
  const double r = euclidean_distance(x, center);
  if (r <= radius) return x;
  return lerp(center, x, radius / r);
}

Point clamp_box(const Point& x, double lo, double hi) {
  Point p = x;
  for (int i = 0; i < x.dim(); ++i) p[i] = std::clamp(x[i], lo, hi);
  return p;
}

// Projection onto A (or onto the closure of A^(delta) when delta > 0).
Point project_to_body(const ManifoldSpec& spec, const Point& x, double delta) {
  switch (spec.family()) {
    case Family::UnitSquare:
      return clamp_box(x, delta, 1.0 - delta);
    case Family::UnitDisk:
    case Family::SolidBall:
      return project_to_euclidean_ball(x, Point::zeros(spec.ambient_dim()), 1.0 - delta);
    case Family::UnitSphere:
      return normalized(x);
    case Family::SphericalCap:
      return project_to_cap(normalized(x), north_pole(), spec.cap_angle() - delta);
  }
  return x;
}

bool center_is_pole(const Point& c) { return euclidean_distance(c, north_pole()) < 1e-12; }

}  // namespace

Point::Point(std::initializer_list<double> coords) {
  if (coords.size() > static_cast<std::size_t>(kMaxDim)) throw Error("Point: too many coordinates");
  std::copy(coords.begin(), coords.end(), x_.begin());
  dim_ = static_cast<int>(coords.size());
}

Point Point::zeros(int dim) {
  if (dim < 0 || dim > kMaxDim) throw Error("Point: bad dimension");
  Point p;
  p.dim_ = dim;
  return p;
}

bool operator==(const Point& a, const Point& b) {
  if (a.dim_ != b.dim_) return false;
  for (int i = 0; i < a.dim_; ++i)
    if (a[i] != b[i]) return false;
  return true;
}

double dot(const Point& a, const Point& b) {
  double s = 0.0;
  for (int i = 0; i < a.dim(); ++i) s += a[i] * b[i];
  return s;
}

double norm(const Point& a) { return std::sqrt(dot(a, a)); }

double euclidean_distance(const Point& a, const Point& b) {
  double s = 0.0;
  for (int i = 0; i < a.dim(); ++i) {
    const double t = a[i] - b[i];
    s += t * t;
  }
  return std::sqrt(s);
}

Point lerp(const Point& a, const Point& b, double t) {
  Point p = a;
  for (int i = 0; i < a.dim(); ++i) p[i] = a[i] + t * (b[i] - a[i]);
  return p;
}

Point scaled(const Point& a, double s) {
  Point p = a;
  for (int i = 0; i < a.dim(); ++i) p[i] *= s;
  return p;
}

ManifoldSpec ManifoldSpec::unit_square(int d) {
  if (d < 2 || d > kMaxDim) throw Error("unit_square: dimension must be in [2, 8]");
  return {Family::UnitSquare, d, d, 0.0};
}
ManifoldSpec ManifoldSpec::unit_disk() { return {Family::UnitDisk, 2, 2, 0.0}; }
ManifoldSpec ManifoldSpec::solid_ball() { return {Family::SolidBall, 3, 3, 0.0}; }
ManifoldSpec ManifoldSpec::unit_sphere() { return {Family::UnitSphere, 2, 3, kPi}; }
ManifoldSpec ManifoldSpec::spherical_cap(double alpha) {
  if (!(alpha > 0.0 && alpha < kPi)) throw Error("spherical_cap: polar angle must lie in (0, pi)");
  return {Family::SphericalCap, 2, 3, alpha};
}

std::string ManifoldSpec::name() const {
  switch (family_) {
    case Family::UnitSquare: return "unit_square";
    case Family::UnitDisk: return "unit_disk";
    case Family::SolidBall: return "solid_ball";
    case Family::UnitSphere: return "unit_sphere";
    case Family::SphericalCap: return "spherical_cap";
  }
  return "?";
}

std::string to_string(Metric metric) {
  return metric == Metric::Geodesic ? "geodesic" : "euclidean";
}

Metric metric_from_string(const std::string& s) {
  if (s == "geodesic") return Metric::Geodesic;
  if (s == "euclidean" || s == "ambient_euclidean") return Metric::AmbientEuclidean;
  throw Error("unknown metric '" + s + "'");
}

RegionSpec RegionSpec::geodesic_ball(const Point& center, double radius) {
  RegionSpec r;
  r.kind = Kind::GeodesicBall;
  r.center = center;
  r.radius = radius;
  return r;
}

RegionSpec RegionSpec::interior_body(double delta) {
  RegionSpec r;
  r.kind = Kind::InteriorBody;
  r.delta = delta;
  return r;
}

void validate_region(const ManifoldSpec& spec, const RegionSpec& region) {
  switch (region.kind) {
    case RegionSpec::Kind::All:
      return;
    case RegionSpec::Kind::GeodesicBall:
      if (region.center.dim() != spec.ambient_dim() || !contains(spec, region.center))
        throw Error("geodesic_ball region: center must lie in A");
      if (!(region.radius > 0.0)) throw Error("geodesic_ball region: radius must be positive");
      return;
    case RegionSpec::Kind::InteriorBody: {
      if (!(region.delta > 0.0)) throw Error("interior_body region: delta must be positive");
      double limit = std::numeric_limits<double>::infinity();
      switch (spec.family()) {
        case Family::UnitSquare: limit = 0.5; break;
        case Family::UnitDisk:
        case Family::SolidBall: limit = 1.0; break;
        case Family::SphericalCap: limit = spec.cap_angle(); break;
        case Family::UnitSphere: break;
      }
      if (!(region.delta < limit)) throw Error("interior_body region: A^(delta) is empty");
      return;
    }
  }
}

double volume(const ManifoldSpec& spec) {
  switch (spec.family()) {
    case Family::UnitSquare: return 1.0;
    case Family::UnitDisk: return kPi;
    case Family::SolidBall: return 4.0 * kPi / 3.0;
    case Family::UnitSphere: return 4.0 * kPi;
    case Family::SphericalCap: return 2.0 * kPi * (1.0 - std::cos(spec.cap_angle()));
  }
  return 0.0;
}

double boundary_measure(const ManifoldSpec& spec) {
  switch (spec.family()) {
    case Family::UnitSquare: return 2.0 * spec.dim();
    case Family::UnitDisk: return 2.0 * kPi;
    case Family::SolidBall: return 4.0 * kPi;
    case Family::UnitSphere: return 0.0;
    case Family::SphericalCap: return 2.0 * kPi * std::sin(spec.cap_angle());
  }
  return 0.0;
}

double diameter(const ManifoldSpec& spec) {
  switch (spec.family()) {
    case Family::UnitSquare: return std::sqrt(static_cast<double>(spec.dim()));
    case Family::UnitDisk:
    case Family::SolidBall: return 2.0;
    case Family::UnitSphere: return kPi;
    case Family::SphericalCap: return spec.cap_angle() <= kPi / 2 ? 2.0 * spec.cap_angle() : kPi;
  }
  return 0.0;
}

bool on_manifold(const ManifoldSpec& spec, const Point& x) {
  if (x.dim() != spec.ambient_dim()) return false;
  if (spec.is_spherical()) return std::fabs(norm(x) - 1.0) <= kTol;
  return true;
}

bool contains(const ManifoldSpec& spec, const Point& x) {
  if (x.dim() != spec.ambient_dim()) return false;
  switch (spec.family()) {
    case Family::UnitSquare:
      for (int i = 0; i < x.dim(); ++i)
        if (!(x[i] >= 0.0 && x[i] <= 1.0)) return false;
      return true;
    case Family::UnitDisk:
    case Family::SolidBall:
      return dot(x, x) <= 1.0 + kTol;
    case Family::UnitSphere:
      return on_manifold(spec, x);
    case Family::SphericalCap:
      return on_manifold(spec, x) && x[2] >= std::cos(spec.cap_angle()) - kTol;
  }
  return false;
}

double dist(const ManifoldSpec& spec, const Point& x, const Point& y, Metric metric) {
  if (metric == Metric::AmbientEuclidean || !spec.is_spherical()) return euclidean_distance(x, y);
  return great_circle(x, y);
}

double polar_angle(const Point& x) {
  return std::atan2(std::hypot(x[0], x[1]), x[2]);
}

double interior_margin(const ManifoldSpec& spec, const Point& x) {
  switch (spec.family()) {
    case Family::UnitSquare: {
      double m = std::numeric_limits<double>::infinity();
      for (int i = 0; i < x.dim(); ++i) m = std::min({m, x[i], 1.0 - x[i]});
      return std::max(0.0, m);
    }
    case Family::UnitDisk:
    case Family::SolidBall:
      return std::max(0.0, 1.0 - norm(x));
    case Family::UnitSphere:
      return std::numeric_limits<double>::infinity();
    case Family::SphericalCap:
      return std::max(0.0, spec.cap_angle() - polar_angle(x));
  }
  return 0.0;
}

std::optional<double> dist_to_boundary(const ManifoldSpec& spec, const Point& x) {
  if (!spec.has_boundary()) return std::nullopt;
  return interior_margin(spec, x);
}

bool region_contains(const ManifoldSpec& spec, const RegionSpec& region, const Point& x) {
  if (!contains(spec, x)) return false;
  switch (region.kind) {
    case RegionSpec::Kind::All:
      return true;
    case RegionSpec::Kind::InteriorBody:
      return interior_margin(spec, x) >= region.delta - kTol;
    case RegionSpec::Kind::GeodesicBall:
      return dist(spec, x, region.center, Metric::Geodesic) <= region.radius * (1.0 + kTol) + kTol;
  }
  return false;
}

bool region_touches_boundary(const ManifoldSpec& spec, const RegionSpec& region) {
  if (!spec.has_boundary()) return false;
  switch (region.kind) {
    case RegionSpec::Kind::All: return true;
    case RegionSpec::Kind::InteriorBody: return false;
    case RegionSpec::Kind::GeodesicBall: return interior_margin(spec, region.center) <= region.radius;
  }
  return true;
}

RegionMeasures region_measures(const ManifoldSpec& spec, const RegionSpec& region) {
  validate_region(spec, region);
  const Family fam = spec.family();
  switch (region.kind) {
    case RegionSpec::Kind::All:
      return {volume(spec), boundary_measure(spec)};
    case RegionSpec::Kind::InteriorBody: {
      const double delta = region.delta;
      switch (fam) {
        case Family::UnitSquare: return {std::pow(1.0 - 2.0 * delta, spec.dim()), 0.0};
        case Family::UnitDisk: return {kPi * (1.0 - delta) * (1.0 - delta), 0.0};
        case Family::SolidBall: return {4.0 * kPi / 3.0 * std::pow(1.0 - delta, 3), 0.0};
        case Family::UnitSphere: return {volume(spec), 0.0};
        case Family::SphericalCap:
          return {2.0 * kPi * (1.0 - std::cos(spec.cap_angle() - delta)), 0.0};
      }
      break;
    }
    case RegionSpec::Kind::GeodesicBall: {
      const double r = region.radius;
      if (fam == Family::UnitSphere) return {2.0 * kPi * (1.0 - std::cos(std::min(r, kPi))), 0.0};
      if (interior_margin(spec, region.center) > r) {
        if (fam == Family::SphericalCap) return {2.0 * kPi * (1.0 - std::cos(r)), 0.0};
        return {unit_ball_volume(spec.dim()) * std::pow(r, spec.dim()), 0.0};
      }
      const bool at_origin = norm(region.center) < kTol;
      if ((fam == Family::UnitDisk || fam == Family::SolidBall) && at_origin && r >= 1.0)
        return {volume(spec), boundary_measure(spec)};
      if (fam == Family::SphericalCap && center_is_pole(region.center) && r >= spec.cap_angle())
        return {volume(spec), boundary_measure(spec)};
      if (fam == Family::UnitSquare && spec.dim() == 2 && r <= 1.0) {
        const bool corner = (region.center[0] == 0.0 || region.center[0] == 1.0) &&
                            (region.center[1] == 0.0 || region.center[1] == 1.0);
        if (corner) return {kPi * r * r / 4.0, 2.0 * r};
      }
      break;
    }
  }
  throw Error("region_measures: no closed form for this region on " + spec.name());
}

Point project_to_region(const ManifoldSpec& spec, const RegionSpec& region, const Point& x) {
  switch (region.kind) {
    case RegionSpec::Kind::All:
      return project_to_body(spec, x, 0.0);
    case RegionSpec::Kind::InteriorBody:
      if (!spec.has_boundary()) return project_to_body(spec, x, 0.0);
      return project_to_body(spec, x, region.delta);
    case RegionSpec::Kind::GeodesicBall:
      break;
  }

  const Point& c = region.center;
  const double r = region.radius;
  if (spec.is_spherical()) {
    const Point y = normalized(x);
    if (spec.family() == Family::UnitSphere || interior_margin(spec, c) >= r)
      return project_to_cap(y, c, std::min(r, kPi));
    if (center_is_pole(c)) return project_to_cap(y, north_pole(), std::min(r, spec.cap_angle()));
    throw Error("project_to_region: geodesic ball crossing the cap boundary is unsupported");
  }

  // Flat families: A and the ball are both convex; Dykstra's alternating
  // projections converge to the projection onto the intersection.
  Point y = x;
  Point p = Point::zeros(x.dim());
  Point q = Point::zeros(x.dim());
  for (int iter = 0; iter < 500; ++iter) {
    Point ya = y;
    for (int i = 0; i < x.dim(); ++i) ya[i] += p[i];
    const Point a = project_to_body(spec, ya, 0.0);
    for (int i = 0; i < x.dim(); ++i) p[i] = ya[i] - a[i];
    Point aq = a;
    for (int i = 0; i < x.dim(); ++i) aq[i] += q[i];
    const Point next = project_to_euclidean_ball(aq, c, r);
    for (int i = 0; i < x.dim(); ++i) q[i] = aq[i] - next[i];
    const double moved = euclidean_distance(next, y);
    y = next;
    if (moved < 1e-15 && contains(spec, y)) break;
  }
  y = project_to_body(spec, y, 0.0);
  if (!region_contains(spec, region, y)) {
    // Pull toward the center, which is feasible.
    for (double t = 1e-12; t <= 1.0 && !region_contains(spec, region, y); t *= 10.0)
      y = lerp(y, c, t);
  }
  return y;
}

}  // namespace covlab
