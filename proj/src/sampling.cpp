#include "covlab/sampling.hpp"

#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>

namespace covlab {

namespace {

constexpr std::uint64_t kPointStream = 0;
constexpr std::uint64_t kCountStream = 1;
constexpr std::uint64_t kMassStream = 2;

Point random_direction(int dim, StreamRng& rng) {
  Point g = Point::zeros(dim);
  double n2 = 0.0;
  do {
    for (int i = 0; i < dim; ++i) g[i] = rng.normal();
    n2 = dot(g, g);
  } while (n2 < 1e-300);
  return scaled(g, 1.0 / std::sqrt(n2));
}

struct LinearRange {
  double max;
  double min;
  std::optional<double> boundary_min;
};

LinearRange linear_range(const ManifoldSpec& spec, const std::vector<double>& c) {
  double cn = 0.0;
  for (double v : c) cn += v * v;
  cn = std::sqrt(cn);
  switch (spec.family()) {
    case Family::UnitSquare: {
      double hi = 0.0, lo = 0.0;
      for (double v : c) {
        hi += std::max(v, 0.0);
        lo += std::min(v, 0.0);
      }
      return {hi, lo, lo};
    }
    case Family::UnitDisk:
    case Family::SolidBall:
      return {cn, -cn, -cn};
    case Family::UnitSphere:
      return {cn, -cn, std::nullopt};
    case Family::SphericalCap: {
      const double a = spec.cap_angle();
      const double horiz = std::hypot(c[0], c[1]);
      auto cap_max = [&](double cz, double sign) {
        // max over the cap of sign * <c, x>
        if (cn == 0.0) return 0.0;
        const double polar = std::atan2(horiz, sign * cz);
        if (polar <= a) return cn;
        return std::sin(a) * horiz + sign * cz * std::cos(a);
      };
      const double hi = cap_max(c[2], 1.0);
      const double lo = -cap_max(c[2], -1.0);
      const double bmin = -std::sin(a) * horiz + c[2] * std::cos(a);
      return {hi, lo, bmin};
    }
  }
  return {0.0, 0.0, std::nullopt};
}

double first_moment(const ManifoldSpec& spec, int axis) {
  switch (spec.family()) {
    case Family::UnitSquare: return 0.5;
    case Family::SphericalCap:
      return axis == 2 ? std::numbers::pi * std::pow(std::sin(spec.cap_angle()), 2) : 0.0;
    default: return 0.0;
  }
}

}  // namespace

DensitySpec DensitySpec::uniform() { return DensitySpec{}; }

DensitySpec DensitySpec::custom(Fn f, double sup_bound, std::string label) {
  if (!f) throw Error("custom density: empty function");
  if (!(sup_bound > 0.0)) throw Error("custom density: sup bound must be positive");
  DensitySpec d;
  d.fn_ = std::move(f);
  d.sup_ = sup_bound;
  d.label_ = std::move(label);
  return d;
}

DensitySpec DensitySpec::affine(const ManifoldSpec& spec, std::vector<double> coeffs) {
  if (static_cast<int>(coeffs.size()) != spec.ambient_dim())
    throw Error("affine density: need one coefficient per ambient coordinate");
  const LinearRange range = linear_range(spec, coeffs);
  if (!(1.0 + range.min > 0.0)) throw Error("affine density: 1 + <c,x> must be positive on A");
  double mass = volume(spec);
  for (int i = 0; i < spec.ambient_dim(); ++i)
    mass += coeffs[static_cast<std::size_t>(i)] * first_moment(spec, i);

  DensitySpec d;
  auto c = coeffs;
  d.fn_ = [c, mass](const Point& x) {
    double v = 1.0;
    for (int i = 0; i < x.dim(); ++i) v += c[static_cast<std::size_t>(i)] * x[i];
    return v / mass;
  };
  // Slack for rounding in the bound comparison.
  d.sup_ = (1.0 + range.max) / mass * (1.0 + 1e-12);
  d.label_ = "affine";
  d.coeffs_ = std::move(coeffs);
  d.inf_body_ = (1.0 + range.min) / mass;
  if (range.boundary_min) d.inf_boundary_ = (1.0 + *range.boundary_min) / mass;
  return d;
}

double DensitySpec::operator()(const ManifoldSpec& spec, const Point& x) const {
  if (!fn_) return 1.0 / volume(spec);
  return fn_(x);
}

double DensitySpec::sup_bound(const ManifoldSpec& spec) const {
  return fn_ ? sup_ : 1.0 / volume(spec);
}

std::optional<double> DensitySpec::inf_on_body(const ManifoldSpec& spec) const {
  if (!fn_) return 1.0 / volume(spec);
  return inf_body_;
}

std::optional<double> DensitySpec::inf_on_boundary(const ManifoldSpec& spec) const {
  if (!spec.has_boundary()) return std::nullopt;
  if (!fn_) return 1.0 / volume(spec);
  return inf_boundary_;
}

double density_mass(const ManifoldSpec& spec, const DensitySpec& dens, std::size_t samples,
                    std::uint64_t seed) {
  StreamRng rng(derive_seed(seed, kMassStream));
  double sum = 0.0;
  for (std::size_t i = 0; i < samples; ++i) sum += dens(spec, uniform_point(spec, rng));
  return volume(spec) * sum / static_cast<double>(samples);
}

void validate_density(const ManifoldSpec& spec, const DensitySpec& dens) {
  if (dens.is_uniform()) return;
  const double mass = density_mass(spec, dens, 20000, 0x5eed);
  if (std::fabs(mass - 1.0) > 0.02) {
    std::ostringstream msg;
    msg << "density '" << dens.label() << "' integrates to " << mass << ", not 1";
    throw Error(msg.str());
  }
}

Point uniform_point(const ManifoldSpec& spec, StreamRng& rng) {
  switch (spec.family()) {
    case Family::UnitSquare: {
      Point x = Point::zeros(spec.dim());
      for (int i = 0; i < spec.dim(); ++i) x[i] = rng.uniform();
      return x;
    }
    case Family::UnitDisk:
    case Family::SolidBall: {
      const int d = spec.dim();
      const double r = std::pow(rng.uniform(), 1.0 / d);
      return scaled(random_direction(d, rng), r);
    }
    case Family::UnitSphere:
      return random_direction(3, rng);
    case Family::SphericalCap: {
      const double phi = 2.0 * std::numbers::pi * rng.uniform();
      const double cos_a = std::cos(spec.cap_angle());
      const double z = cos_a + rng.uniform() * (1.0 - cos_a);
      const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
      return Point{s * std::cos(phi), s * std::sin(phi), z};
    }
  }
  return {};
}

namespace {

Point draw_point(const ManifoldSpec& spec, const DensitySpec& dens, std::uint64_t seed,
                 std::uint64_t index) {
  StreamRng rng(derive_seed(seed, kPointStream, index));
  if (dens.is_uniform()) return uniform_point(spec, rng);
  const double bound = dens.sup_bound(spec);
  for (;;) {
    const Point x = uniform_point(spec, rng);
    const double fx = dens(spec, x);
    if (fx > bound) {
      std::ostringstream msg;
      msg << "density '" << dens.label() << "' value " << fx << " exceeds sup bound " << bound
          << " at (";
      for (int i = 0; i < x.dim(); ++i) msg << (i ? "," : "") << x[i];
      msg << ")";
      throw Error(msg.str());
    }
    if (rng.uniform() * bound < fx) return x;
  }
}

}  // namespace

PointCloud uniform_sample(const ManifoldSpec& spec, std::uint64_t n, std::uint64_t seed) {
  return density_sample(spec, DensitySpec::uniform(), n, seed);
}

PointCloud density_sample(const ManifoldSpec& spec, const DensitySpec& dens, std::uint64_t n,
                          std::uint64_t seed) {
  PointCloud cloud;
  cloud.origin = PointCloud::Origin::Binomial;
  cloud.requested = n;
  cloud.seed = seed;
  cloud.points.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) cloud.points.push_back(draw_point(spec, dens, seed, i));
  return cloud;
}

PointCloud poisson_sample(const ManifoldSpec& spec, const DensitySpec& dens, double t,
                          std::uint64_t seed) {
  if (!(t > 0.0)) throw Error("poisson_sample: intensity must be positive");
  StreamRng counter(derive_seed(seed, kCountStream));
  const std::uint64_t count = counter.poisson(t);
  PointCloud cloud = density_sample(spec, dens, count, seed);
  cloud.origin = PointCloud::Origin::Poisson;
  cloud.requested = 0;
  cloud.intensity = t;
  return cloud;
}

void write_cloud_csv(std::ostream& out, const PointCloud& cloud) {
  const int m = cloud.points.empty() ? 0 : cloud.points.front().dim();
  out << "idx";
  for (int i = 1; i <= m; ++i) out << ",x" << i;
  out << "\n";
  const auto old_precision = out.precision(17);
  for (std::size_t i = 0; i < cloud.points.size(); ++i) {
    out << i;
    for (int j = 0; j < m; ++j) out << "," << cloud.points[i][j];
    out << "\n";
  }
  out.precision(old_precision);
}

PointCloud read_cloud_csv(std::istream& in, const ManifoldSpec& spec) {
  PointCloud cloud;
  std::string line;
  if (!std::getline(in, line)) throw Error("cloud csv: empty input");
  const int m = spec.ambient_dim();
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string cell;
    std::vector<double> values;
    while (std::getline(row, cell, ',')) values.push_back(std::stod(cell));
    if (static_cast<int>(values.size()) != m + 1)
      throw Error("cloud csv: line " + std::to_string(lineno) + " has wrong column count");
    Point x = Point::zeros(m);
    for (int j = 0; j < m; ++j) x[j] = values[static_cast<std::size_t>(j) + 1];
    if (!contains(spec, x))
      throw Error("cloud csv: line " + std::to_string(lineno) + " lies outside A");
    cloud.points.push_back(x);
  }
  return cloud;
}

}  // namespace covlab
