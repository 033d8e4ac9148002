#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "covlab/manifold.hpp"
#include "covlab/rng.hpp"

namespace covlab {

/// Probability density f on A with respect to the Riemannian volume.
class DensitySpec {
 public:
  using Fn = std::function<double(const Point&)>;

  static DensitySpec uniform();
  /// Arbitrary density; sup_bound must dominate f on A (checked at every
  /// proposal during rejection sampling).
  static DensitySpec custom(Fn f, double sup_bound, std::string label = "custom");
  /// f(x) proportional to 1 + <coeffs, x>, normalized in closed form over A.
  /// Throws Error unless 1 + <coeffs, x> > 0 on A.
  static DensitySpec affine(const ManifoldSpec& spec, std::vector<double> coeffs);

  bool is_uniform() const { return !fn_; }
  double operator()(const ManifoldSpec& spec, const Point& x) const;
  double sup_bound(const ManifoldSpec& spec) const;
  const std::string& label() const { return label_; }
  const std::vector<double>& coeffs() const { return coeffs_; }

  /// inf of f over A and over the boundary of A when known in closed form
  /// (uniform and affine densities); nullopt for custom densities and for
  /// the boundary of a boundaryless manifold.
  std::optional<double> inf_on_body(const ManifoldSpec& spec) const;
  std::optional<double> inf_on_boundary(const ManifoldSpec& spec) const;

 private:
  Fn fn_;
  double sup_ = 0.0;
  std::string label_ = "uniform";
  std::vector<double> coeffs_;
  std::optional<double> inf_body_;
  std::optional<double> inf_boundary_;
};

/// Monte Carlo estimate of the integral of f over A (should be 1).
double density_mass(const ManifoldSpec& spec, const DensitySpec& dens, std::size_t samples,
                    std::uint64_t seed);
/// Throws Error when a custom density's mass differs from 1 by more than 2%.
void validate_density(const ManifoldSpec& spec, const DensitySpec& dens);

struct PointCloud {
  enum class Origin { Binomial, Poisson, External };

  std::vector<Point> points;
  Origin origin = Origin::External;
  std::uint64_t requested = 0;  // n for Binomial
  double intensity = 0.0;       // t for Poisson
  std::uint64_t seed = 0;

  std::size_t size() const { return points.size(); }
};

/// One uniform point of A drawn from rng.
Point uniform_point(const ManifoldSpec& spec, StreamRng& rng);

/// Point i of every sampler is drawn from its own stream derive_seed(seed, 0, i),
/// so a Poisson cloud with the same seed is the first Z points of the
/// binomial sequence.
PointCloud uniform_sample(const ManifoldSpec& spec, std::uint64_t n, std::uint64_t seed);
PointCloud density_sample(const ManifoldSpec& spec, const DensitySpec& dens, std::uint64_t n,
                          std::uint64_t seed);
PointCloud poisson_sample(const ManifoldSpec& spec, const DensitySpec& dens, double t,
                          std::uint64_t seed);

void write_cloud_csv(std::ostream& out, const PointCloud& cloud);
/// Reads `idx,x1..xm` rows; the column count must match ambient_dim.
PointCloud read_cloud_csv(std::istream& in, const ManifoldSpec& spec);

}  // namespace covlab
