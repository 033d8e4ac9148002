#pragma once

#include <array>
#include <initializer_list>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>

namespace covlab {

/// Thrown for invalid inputs and unsupported combinations.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Thrown when a configuration is well-formed but the requested law is
/// degenerate or undefined for it. The CLI maps this to exit code 2.
class Refusal : public Error {
 public:
  using Error::Error;
};

inline constexpr int kMaxDim = 8;

/// Ambient coordinates of a point in R^m, m <= kMaxDim.
class Point {
 public:
  Point() = default;
  Point(std::initializer_list<double> coords);
  static Point zeros(int dim);

  int dim() const { return dim_; }
  double& operator[](int i) { return x_[static_cast<std::size_t>(i)]; }
  double operator[](int i) const { return x_[static_cast<std::size_t>(i)]; }
  std::span<const double> coords() const { return {x_.data(), static_cast<std::size_t>(dim_)}; }

  friend bool operator==(const Point& a, const Point& b);

 private:
  std::array<double, kMaxDim> x_{};
  int dim_ = 0;
};

double dot(const Point& a, const Point& b);
double norm(const Point& a);
double euclidean_distance(const Point& a, const Point& b);
Point lerp(const Point& a, const Point& b, double t);
Point scaled(const Point& a, double s);

enum class Family { UnitSquare, UnitDisk, SolidBall, UnitSphere, SphericalCap };

/// A compact manifold-with-boundary A inside an ambient manifold M in R^m.
///
///   UnitSquare(d)      A = [0,1]^d,                 M = R^d
///   UnitDisk           A = closed unit disk,         M = R^2
///   SolidBall          A = closed unit ball,         M = R^3
///   UnitSphere         A = M = S^2 in R^3, no boundary
///   SphericalCap(a)    A = {x in S^2 : polar angle <= a}, pole (0,0,1)
class ManifoldSpec {
 public:
  static ManifoldSpec unit_square(int d = 2);
  static ManifoldSpec unit_disk();
  static ManifoldSpec solid_ball();
  static ManifoldSpec unit_sphere();
  static ManifoldSpec spherical_cap(double alpha);

  Family family() const { return family_; }
  int dim() const { return d_; }
  int ambient_dim() const { return m_; }
  /// Polar angle of the cap; pi for the full sphere, 0 otherwise.
  double cap_angle() const { return alpha_; }
  bool is_spherical() const {
    return family_ == Family::UnitSphere || family_ == Family::SphericalCap;
  }
  bool has_boundary() const { return family_ != Family::UnitSphere; }

  std::string name() const;
  friend bool operator==(const ManifoldSpec&, const ManifoldSpec&) = default;

 private:
  ManifoldSpec(Family f, int d, int m, double alpha) : family_(f), d_(d), m_(m), alpha_(alpha) {}
  Family family_;
  int d_;
  int m_;
  double alpha_;
};

enum class Metric { Geodesic, AmbientEuclidean };

std::string to_string(Metric metric);
Metric metric_from_string(const std::string& s);

/// The target set B of the coverage problem.
struct RegionSpec {
  enum class Kind { All, GeodesicBall, InteriorBody };

  Kind kind = Kind::All;
  Point center;         // GeodesicBall only
  double radius = 0.0;  // GeodesicBall only
  double delta = 0.0;   // InteriorBody only

  static RegionSpec all() { return {}; }
  /// B = A intersected with the closed geodesic ball B(center, radius).
  static RegionSpec geodesic_ball(const Point& center, double radius);
  /// B = closure of A^(delta), the points at distance >= delta from the boundary.
  static RegionSpec interior_body(double delta);

  friend bool operator==(const RegionSpec&, const RegionSpec&) = default;
};

struct RegionMeasures {
  double volume;           // v(B)
  double boundary_volume;  // surface measure of B intersected with the boundary of A
};

/// Validates the region against the manifold; throws Error on violation.
void validate_region(const ManifoldSpec& spec, const RegionSpec& region);

double volume(const ManifoldSpec& spec);
double boundary_measure(const ManifoldSpec& spec);
/// Geodesic diameter of A.
double diameter(const ManifoldSpec& spec);

/// True when x lies on M (unit norm for spherical families), tolerance 1e-12.
bool on_manifold(const ManifoldSpec& spec, const Point& x);
/// Membership x in A.
bool contains(const ManifoldSpec& spec, const Point& x);

double dist(const ManifoldSpec& spec, const Point& x, const Point& y, Metric metric);

/// Geodesic distance from x in A to the boundary of A; nullopt when A has
/// no boundary.
std::optional<double> dist_to_boundary(const ManifoldSpec& spec, const Point& x);

/// dist(x, M \ interior(A)) for any x on M: the boundary distance inside A,
/// zero outside, +infinity for the sphere. 1-Lipschitz on M.
double interior_margin(const ManifoldSpec& spec, const Point& x);

bool region_contains(const ManifoldSpec& spec, const RegionSpec& region, const Point& x);
RegionMeasures region_measures(const ManifoldSpec& spec, const RegionSpec& region);
/// Whether B meets the boundary of A.
bool region_touches_boundary(const ManifoldSpec& spec, const RegionSpec& region);

/// Closest point of B to x on M (geodesic). Throws Error for region
/// shapes that have no supported projection.
Point project_to_region(const ManifoldSpec& spec, const RegionSpec& region, const Point& x);

/// Polar angle of a point of S^2 measured from (0,0,1).
double polar_angle(const Point& x);

}  // namespace covlab
