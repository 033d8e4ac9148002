#include "covlab/selftest.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <ostream>
#include <sstream>

#include "covlab/coverage.hpp"
#include "covlab/limits.hpp"
#include "covlab/manifold.hpp"
#include "covlab/rng.hpp"
#include "covlab/sampling.hpp"
#include "covlab/stats.hpp"

namespace covlab {

namespace {

using Body = std::function<std::string()>;  // empty string on success

void run_check(SelftestReport& report, std::ostream* log, const std::string& name,
               const Body& body) {
  SelftestCheck check{name, false, {}};
  try {
    check.detail = body();
    check.passed = check.detail.empty();
  } catch (const std::exception& e) {
    check.detail = std::string("exception: ") + e.what();
  }
  if (log) {
    *log << (check.passed ? "PASS " : "FAIL ") << name;
    if (!check.passed) *log << ": " << check.detail;
    *log << '\n';
  }
  report.checks.push_back(std::move(check));
}

std::string fail(const std::string& what, double got, double want) {
  std::ostringstream os;
  os.precision(17);
  os << what << " got " << got << " want " << want;
  return os.str();
}

Point random_point(const ManifoldSpec& spec, StreamRng& rng) { return uniform_point(spec, rng); }

std::vector<ManifoldSpec> all_specs() {
  return {ManifoldSpec::unit_square(2), ManifoldSpec::unit_square(3), ManifoldSpec::unit_disk(),
          ManifoldSpec::solid_ball(), ManifoldSpec::unit_sphere(),
          ManifoldSpec::spherical_cap(1.0)};
}

}  // namespace

int SelftestReport::passed() const {
  return static_cast<int>(std::count_if(checks.begin(), checks.end(),
                                        [](const SelftestCheck& c) { return c.passed; }));
}

int SelftestReport::failed() const { return static_cast<int>(checks.size()) - passed(); }

SelftestReport run_selftest(std::ostream* log) {
  SelftestReport report;

  run_check(report, log, "manifold.metric_axioms", [] {
    StreamRng rng(derive_seed(11, 0));
    for (const ManifoldSpec& spec : all_specs()) {
      for (int i = 0; i < 2000; ++i) {
        const Point x = random_point(spec, rng), y = random_point(spec, rng),
                    z = random_point(spec, rng);
        const double g = dist(spec, x, y, Metric::Geodesic);
        const double e = dist(spec, x, y, Metric::AmbientEuclidean);
        if (e > g + 1e-12) return fail(spec.name() + " domination", e, g);
        if (std::abs(g - dist(spec, y, x, Metric::Geodesic)) > 1e-15)
          return spec.name() + " symmetry";
        if (g > dist(spec, x, z, Metric::Geodesic) + dist(spec, z, y, Metric::Geodesic) + 1e-12)
          return spec.name() + " triangle inequality";
      }
    }
    return std::string();
  });

  run_check(report, log, "manifold.boundary_distance", [] {
    const ManifoldSpec disk = ManifoldSpec::unit_disk();
    const auto b = dist_to_boundary(disk, Point{0.25, 0.0});
    if (!b || std::abs(*b - 0.75) > 1e-15) return fail("disk", b.value_or(-1), 0.75);
    if (dist_to_boundary(ManifoldSpec::unit_sphere(), Point{0.0, 0.0, 1.0}))
      return std::string("sphere must have no boundary");
    return std::string();
  });

  run_check(report, log, "sampling.support_and_reproducibility", [] {
    for (const ManifoldSpec& spec : all_specs()) {
      const PointCloud a = uniform_sample(spec, 500, 3);
      const PointCloud b = uniform_sample(spec, 500, 3);
      if (a.points != b.points) return spec.name() + " not reproducible";
      for (const Point& p : a.points)
        if (!contains(spec, p)) return spec.name() + " point outside A";
    }
    return std::string();
  });

  run_check(report, log, "sampling.poisson_prefix", [] {
    const ManifoldSpec spec = ManifoldSpec::unit_disk();
    const PointCloud pois = poisson_sample(spec, DensitySpec::uniform(), 200.0, 9);
    const PointCloud bin = uniform_sample(spec, pois.size(), 9);
    if (pois.points != bin.points) return std::string("Poisson cloud is not a binomial prefix");
    return std::string();
  });

  run_check(report, log, "coverage.exact_center", [] {
    PointCloud cloud;
    cloud.points = {Point{0.0, 0.0}};
    const ManifoldSpec disk = ManifoldSpec::unit_disk();
    const EvalGrid grid = build_grid(disk, RegionSpec::all(), 0.01);
    const ThresholdEstimate est = coverage_threshold(cloud, grid, 1, Metric::Geodesic);
    if (!(est.lo <= 1.0 + 1e-12 && 1.0 <= est.hi + 1e-12)) return fail("interval lo", est.lo, 1.0);
    return std::string();
  });

  run_check(report, log, "coverage.monotone_in_k", [] {
    const ManifoldSpec sq = ManifoldSpec::unit_square(2);
    const PointCloud cloud = uniform_sample(sq, 200, 5);
    const EvalGrid grid = build_grid(sq, RegionSpec::all(), 0.02);
    double prev = 0.0;
    for (int k = 1; k <= 4; ++k) {
      const double lo = coverage_threshold(cloud, grid, k, Metric::Geodesic).lo;
      if (lo < prev) return fail("k=" + std::to_string(k), lo, prev);
      prev = lo;
    }
    return std::string();
  });

  run_check(report, log, "limits.constants", [] {
    if (std::abs(c_d(3) - 3.0 * std::numbers::pi * std::numbers::pi / 32.0) > 1e-14)
      return fail("c_3", c_d(3), 3.0 * std::numbers::pi * std::numbers::pi / 32.0);
    const double want = std::pow(std::numbers::pi, 5.0 / 3.0) / 16.0;
    if (std::abs(c_dk(3, 1) / want - 1.0) > 1e-12) return fail("c_{3,1}", c_dk(3, 1), want);
    if (std::abs(c_dk(2, 1) * std::sqrt(std::numbers::pi) - 1.0) > 1e-12)
      return fail("c_{2,1}", c_dk(2, 1), 1.0 / std::sqrt(std::numbers::pi));
    return std::string();
  });

  run_check(report, log, "limits.hatH_inverse", [] {
    for (int i = 0; i <= 20; ++i) {
      for (int j = 1; j <= 20; ++j) {
        const double a = 0.25 * i, x = 0.1 * j;
        const double y = hatH(a, x);
        const double back = a == 0.0 ? y : y * H(a / y);
        if (std::abs(back - x) > 1e-10) return fail("hatH round trip", back, x);
      }
    }
    return std::string();
  });

  run_check(report, log, "stats.ks_inverse_cdf", [] {
    StreamRng rng(derive_seed(21, 0));
    std::vector<double> xs(20000);
    for (double& x : xs) x = -std::log(-std::log(rng.uniform_pos()));
    const double ks = ks_distance(xs, [](double z) { return std::exp(-std::exp(-z)); });
    if (ks > 0.02) return fail("KS", ks, 0.02);
    return std::string();
  });

  return report;
}

}  // namespace covlab
