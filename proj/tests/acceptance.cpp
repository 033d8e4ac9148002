// Acceptance gate: one PASS/FAIL line per criterion.
//   acceptance --pilot FILE          run all criteria, criterion 7 reads FILE
//   acceptance --write-pilot FILE    regenerate the SLLN pilot bands
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "covlab/config.hpp"
#include "covlab/coverage.hpp"
#include "covlab/harness.hpp"
#include "covlab/limits.hpp"
#include "covlab/rng.hpp"
#include "covlab/stats.hpp"

using namespace covlab;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

// 1
Outcome constant_exactness() {
  double worst = 0.0;
  worst = std::max(worst, std::abs(c_d(1) - 1.0));
  worst = std::max(worst, std::abs(c_d(2) - 1.0));
  worst = std::max(worst, std::abs(c_d(3) / (3.0 * kPi * kPi / 32.0) - 1.0));
  for (int k = 1; k <= 8; ++k) {
    const double two = std::pow(2.0, 1 - k) / std::sqrt(kPi) / factorial(k - 1);
    const double three =
        std::pow(2.0, k - 5) * std::pow(3.0, 1 - k) * std::pow(kPi, 5.0 / 3.0) / factorial(k - 1);
    worst = std::max(worst, std::abs(c_dk(2, k) / two - 1.0));
    worst = std::max(worst, std::abs(c_dk(3, k) / three - 1.0));
  }
  worst = std::max(worst, std::abs(c_dk(3, 1) / (std::pow(kPi, 5.0 / 3.0) / 16.0) - 1.0));
  return {worst <= 1e-12, "max relative error " + fmt(worst)};
}

// 2
Outcome transform_algebra() {
  StreamRng rng(derive_seed(2002, 0));
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double n = 20.0 + (1e6 - 20.0) * rng.uniform();
    const double R = 0.6 * rng.uniform() * std::pow(std::log(n) / n, 0.4);
    const double L = std::log(n), LL = std::log(L);
    const double x3 = n * kPi * R * R * R - L - 2.0 * LL;
    const double x2 = n * kPi * R * R - L - LL;
    worst = std::max(worst, std::abs(1.5 * weak_transform(R, n, 3, 1, 1.0) - x3) /
                                std::max(1.0, std::abs(x3)));
    worst = std::max(worst, std::abs(2.0 * weak_transform(R, n, 2, 1, 1.0) - x2) /
                                std::max(1.0, std::abs(x2)));

    // Limit expressions for a unit-volume A with boundary measure s.
    const double s = 1.0 + 9.0 * rng.uniform();
    const double x = -4.0 + 14.0 * rng.uniform();
    LimitLaw two;
    two.d = 2;
    two.vB = 1.0;
    two.svB = s;
    two.touches_boundary = true;
    const double closed2 = std::exp(-std::exp(-x) - s / std::sqrt(kPi) * std::exp(-x / 2.0));
    worst = std::max(worst, std::abs(weak_limit_cdf(two, x / 2.0) - closed2));
    LimitLaw three = two;
    three.d = 3;
    const double closed3 = std::exp(-std::pow(kPi, 5.0 / 3.0) / 16.0 * s * std::exp(-2.0 * x / 3.0));
    worst = std::max(worst, std::abs(weak_limit_cdf(three, 2.0 * x / 3.0) - closed3));
  }
  return {worst <= 1e-12, "max error " + fmt(worst) + " over 1000 inputs"};
}

// 3
Outcome hatH_correctness() {
  double worst = 0.0;
  bool exact_zero = true, monotone = true;
  for (int i = 0; i < 100; ++i) {
    const double a = 0.05 * i;
    double prev = -1.0;
    for (int j = 0; j < 100; ++j) {
      const double x = 0.05 * j;
      const double y = hatH(a, x);
      if (a == 0.0)
        exact_zero &= y == x;
      else
        worst = std::max(worst, std::abs(y * H(a / y) - x));
      monotone &= y > prev;
      prev = y;
    }
  }
  return {worst <= 1e-10 && exact_zero && monotone,
          "max inverse error " + fmt(worst) + (exact_zero ? "" : ", hatH(0,x) != x") +
              (monotone ? "" : ", not strictly increasing")};
}

// 4
Outcome oracle_equivalence() {
  StreamRng rng(derive_seed(4004, 0));
  int bad_contain = 0, bad_width = 0;
  double widest_ratio = 0.0;
  for (int inst = 0; inst < 100; ++inst) {
    const int family = static_cast<int>(rng.uniform() * 3.0);
    const ManifoldSpec spec = family == 0   ? ManifoldSpec::unit_disk()
                              : family == 1 ? ManifoldSpec::unit_square(2)
                                            : ManifoldSpec::spherical_cap(0.5 + 2.0 * rng.uniform());
    const int k = 1 + static_cast<int>(rng.uniform() * 3.0);
    const std::uint64_t n = k + static_cast<std::uint64_t>(rng.uniform() * (501 - k));
    const Metric metric = rng.uniform() < 0.5 ? Metric::Geodesic : Metric::AmbientEuclidean;
    const double h = 0.03 + 0.02 * rng.uniform();
    const PointCloud cloud = uniform_sample(spec, n, derive_seed(4004, 1, inst));
    const ThresholdEstimate coarse =
        coverage_threshold(cloud, build_grid(spec, RegionSpec::all(), h), k, metric);
    const double fine =
        coverage_threshold(cloud, build_grid(spec, RegionSpec::all(), h / 10.0), k, metric).lo;
    if (!(coarse.lo <= fine + 1e-12 && fine <= coarse.hi + 1e-12)) ++bad_contain;
    if (coarse.hi - coarse.lo > h + 1e-15) ++bad_width;
    widest_ratio = std::max(widest_ratio, (coarse.hi - coarse.lo) / h);
  }
  return {bad_contain == 0 && bad_width == 0,
          std::to_string(bad_contain) + " containment and " + std::to_string(bad_width) +
              " width violations in 100 instances, max width/h " + fmt(widest_ratio)};
}

bool brackets(const ThresholdEstimate& e, double v) {
  return e.lo <= v + 1e-12 && v <= e.hi + 1e-12;
}

// 5
Outcome exact_cases() {
  PointCloud origin;
  origin.points = {Point{0.0, 0.0}};
  const ManifoldSpec disk = ManifoldSpec::unit_disk();
  const ManifoldSpec square = ManifoldSpec::unit_square(2);
  bool ok = true;
  std::string detail;
  for (Metric m : {Metric::Geodesic, Metric::AmbientEuclidean}) {
    const ThresholdEstimate g = coverage_threshold(origin, build_grid(disk, RegionSpec::all(), 0.01), 1, m);
    const ThresholdEstimate a = adaptive_threshold(disk, RegionSpec::all(), origin, 1, m, 1e-4);
    const ThresholdEstimate gs = coverage_threshold(origin, build_grid(square, RegionSpec::all(), 0.01), 1, m);
    const ThresholdEstimate as = adaptive_threshold(square, RegionSpec::all(), origin, 1, m, 1e-4);
    ok &= brackets(g, 1.0) && brackets(a, 1.0) && brackets(gs, std::sqrt(2.0)) &&
          brackets(as, std::sqrt(2.0));
    if (m == Metric::Geodesic)
      detail = "disk [" + fmt(a.lo) + ", " + fmt(a.hi) + "], square [" + fmt(as.lo) + ", " +
               fmt(as.hi) + "]";
  }
  return {ok, detail};
}

// 6
Outcome monotonicity_suite() {
  StreamRng rng(derive_seed(6006, 0));
  int add = 0, in_k = 0, metric = 0;
  for (int inst = 0; inst < 200; ++inst) {
    const int family = static_cast<int>(rng.uniform() * 4.0);
    const ManifoldSpec spec = family == 0   ? ManifoldSpec::unit_disk()
                              : family == 1 ? ManifoldSpec::unit_square(2)
                              : family == 2 ? ManifoldSpec::spherical_cap(0.5 + 2.0 * rng.uniform())
                                            : ManifoldSpec::unit_sphere();
    const int k = 1 + static_cast<int>(rng.uniform() * 3.0);
    const std::uint64_t n = 5 + static_cast<std::uint64_t>(rng.uniform() * 200.0);
    const EvalGrid grid = build_grid(spec, RegionSpec::all(), 0.03);
    PointCloud cloud = uniform_sample(spec, n, derive_seed(6006, 1, inst));
    const double geo = coverage_threshold(cloud, grid, k, Metric::Geodesic).lo;
    const double euc = coverage_threshold(cloud, grid, k, Metric::AmbientEuclidean).lo;
    const double next_k = coverage_threshold(cloud, grid, k + 1, Metric::Geodesic).lo;
    StreamRng extra(derive_seed(6006, 2, inst));
    const int added = 1 + static_cast<int>(extra.uniform() * 50.0);
    for (int i = 0; i < added; ++i) cloud.points.push_back(uniform_point(spec, extra));
    const double grown = coverage_threshold(cloud, grid, k, Metric::Geodesic).lo;
    add += grown > geo;
    in_k += next_k < geo;
    metric += euc > geo;
  }
  return {add + in_k + metric == 0, "violations: point addition " + std::to_string(add) +
                                        ", k " + std::to_string(in_k) + ", metric " +
                                        std::to_string(metric)};
}

ExperimentConfig slln_config(std::uint64_t seed) {
  ExperimentConfig c;
  c.spec = ManifoldSpec::unit_square(2);
  c.mode = ExperimentMode::SllnTrace;
  c.sizes = {1e3, 1e4, 1e5};
  c.replications = 100;
  c.seed = seed;
  return c;
}

std::vector<double> slln_medians(std::uint64_t seed) {
  const ExperimentResult r = run_experiment(slln_config(seed));
  std::vector<double> out;
  for (const SizeSummary& s : r.summary) out.push_back(s.median_lo);
  return out;
}

constexpr int kPilotBatches = 5;
constexpr std::uint64_t kPilotSeedBase = 90001;

int write_pilot(const std::string& path) {
  std::vector<std::vector<double>> medians;
  for (int b = 0; b < kPilotBatches; ++b) medians.push_back(slln_medians(kPilotSeedBase + b));
  Json sizes = Json::array();
  const std::vector<double> ns = slln_config(1).sizes;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    std::vector<double> m;
    for (const auto& batch : medians) m.push_back(batch[i]);
    double mean = 0.0;
    for (double v : m) mean += v;
    mean /= static_cast<double>(m.size());
    double var = 0.0;
    for (double v : m) var += (v - mean) * (v - mean);
    const double sd = std::sqrt(var / static_cast<double>(m.size() - 1));
    sizes.push_back({{"size", ns[i]},
                     {"batch_medians", m},
                     {"center", mean},
                     {"sd", sd},
                     {"half_width", std::abs(mean - 1.0) + 3.0 * sd}});
  }
  Json out{{"description",
            "Pilot for the SLLN check: median of n*pi*lo^2/log n on the unit square, k=1, "
            "M=100, from independent batches. half_width = |center - 1| + 3 sd."},
           {"seeds", {kPilotSeedBase, kPilotSeedBase + kPilotBatches - 1}},
           {"per_size", sizes}};
  std::ofstream f(path);
  f << out.dump(2) << '\n';
  std::cout << out.dump(2) << '\n';
  return f ? 0 : 1;
}

// 7
Outcome slln_directional(const std::string& pilot_path) {
  std::ifstream in(pilot_path);
  if (!in) return {false, "pilot file missing: " + pilot_path};
  const Json pilot = Json::parse(in);
  std::vector<double> band;
  for (const Json& e : pilot.at("per_size")) band.push_back(e.at("half_width").get<double>());
  const std::vector<double> med = slln_medians(1);
  bool within = true, shrinking = true, approaching = true;
  std::string detail = "median/band:";
  for (std::size_t i = 0; i < med.size(); ++i) {
    const double dev = std::abs(med[i] - 1.0);
    within &= dev <= band[i];
    if (i > 0) {
      shrinking &= band[i] < band[i - 1];
      approaching &= dev < std::abs(med[i - 1] - 1.0);
    }
    detail += " " + fmt(med[i]) + "/" + fmt(band[i]);
  }
  detail += std::string(within ? "" : ", outside band") + (shrinking ? "" : ", band not shrinking") +
            (approaching ? "" : ", not monotone");
  return {within && shrinking && approaching, detail};
}

ExperimentConfig disk_weak(std::vector<double> sizes, int reps) {
  ExperimentConfig c;
  c.spec = ManifoldSpec::unit_disk();
  c.mode = ExperimentMode::WeakBoundary;
  c.sizes = std::move(sizes);
  c.replications = reps;
  c.seed = 1;
  return c;
}

// 8
Outcome weak_law_sanity() {
  const ExperimentResult r = run_experiment(disk_weak({1e3, 1e4}, 300));
  const SizeSummary& a = r.summary[0];
  const SizeSummary& b = r.summary[1];
  const bool finite = std::isfinite(*a.ks_lo) && std::isfinite(*b.ks_lo);
  return {finite && *b.ks_lo < *a.ks_lo,
          "KS lo/hi n=1e3: " + fmt(*a.ks_lo) + "/" + fmt(*a.ks_hi) + ", n=1e4: " + fmt(*b.ks_lo) +
              "/" + fmt(*b.ks_hi)};
}

std::vector<double> stat_lo(const ExperimentResult& r) {
  std::vector<double> out;
  for (const ResultRow& row : r.rows) out.push_back(row.stat_lo);
  return out;
}

// 9
Outcome poisson_binomial() {
  ExperimentConfig c = disk_weak({1e4}, 200);
  const ExperimentResult bin = run_experiment(c);
  c.sampling = SamplingScheme::Poisson;
  const ExperimentResult pois = run_experiment(c);
  c.seed = 2;
  const ExperimentResult indep = run_experiment(c);
  const double gap = ks_two_sample(stat_lo(bin), stat_lo(pois));
  const double gap_indep = ks_two_sample(stat_lo(bin), stat_lo(indep));
  return {gap <= 0.1, "two-sample KS " + fmt(gap) + " (independent seeds " + fmt(gap_indep) +
                          "), KS to limit binomial " + fmt(*bin.summary[0].ks_lo) + ", Poisson " +
                          fmt(*pois.summary[0].ks_lo)};
}

// 10
Outcome sphere_interior() {
  ExperimentConfig c;
  c.spec = ManifoldSpec::unit_sphere();
  c.mode = ExperimentMode::WeakInterior;
  c.sizes = {1e3, 1e4};
  c.replications = 200;
  c.seed = 1;
  const ExperimentResult r = run_experiment(c);
  int mismatches = 0;
  for (const ResultRow& row : r.rows) {
    const PointCloud cloud = replication_cloud(c, row.size, row.rep);
    const ThresholdEstimate cov =
        adaptive_threshold(c.spec, c.region, cloud, row.k, c.metric, row.h, Objective::Coverage);
    mismatches += cov.lo != row.lo || cov.hi != row.hi;
  }
  bool ks_ok = true;
  std::string detail = std::to_string(mismatches) + " interior/coverage mismatches in " +
                       std::to_string(r.rows.size()) + " rows; KS lo/hi";
  for (const SizeSummary& s : r.summary) {
    ks_ok &= *s.ks_lo >= 0.0 && *s.ks_lo <= 1.0 && *s.ks_hi >= 0.0 && *s.ks_hi <= 1.0;
    detail += " n=" + fmt(s.size) + ": " + fmt(*s.ks_lo) + "/" + fmt(*s.ks_hi);
  }
  return {mismatches == 0 && ks_ok, detail};
}

}  // namespace

int main(int argc, char** argv) {
  std::string pilot;
  for (int i = 1; i + 1 < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--write-pilot") return write_pilot(argv[i + 1]);
    if (arg == "--pilot") pilot = argv[i + 1];
  }
  if (pilot.empty()) {
    std::cerr << "usage: acceptance --pilot FILE | --write-pilot FILE\n";
    return 1;
  }

  struct Criterion {
    int id;
    std::string name;
    double budget_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "constant exactness", 1.0, constant_exactness},
      {2, "transform algebra", 1.0, transform_algebra},
      {3, "hatH correctness", 1.0, hatH_correctness},
      {4, "oracle equivalence", 300.0, oracle_equivalence},
      {5, "deterministic exact cases", 0.0, exact_cases},
      {6, "monotonicity suite", 0.0, monotonicity_suite},
      {7, "SLLN directional check", 0.0, [&] { return slln_directional(pilot); }},
      {8, "weak-law stochastic sanity", 1800.0, weak_law_sanity},
      {9, "Poisson/binomial agreement", 0.0, poisson_binomial},
      {10, "boundaryless interior law", 0.0, sphere_interior},
  };

  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.budget_s > 0.0 && secs > c.budget_s) {
      o.pass = false;
      o.detail += ", over time budget " + fmt(c.budget_s) + " s";
    }
    failures += !o.pass;
    std::printf("criterion %2d %s: %s; %s (%.2f s)\n", c.id, o.pass ? "PASS" : "FAIL",
                c.name.c_str(), o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
