#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "covlab/config.hpp"
#include "covlab/harness.hpp"
#include "covlab/stats.hpp"

using namespace covlab;

namespace {

ExperimentConfig disk_weak(std::vector<double> sizes, int reps) {
  ExperimentConfig c;
  c.spec = ManifoldSpec::unit_disk();
  c.mode = ExperimentMode::WeakBoundary;
  c.sizes = std::move(sizes);
  c.replications = reps;
  c.seed = 21;
  return c;
}

std::string rows_csv(const ExperimentResult& r) {
  std::ostringstream os;
  write_rows_csv(os, r);
  return os.str();
}

}  // namespace

TEST(KSchedule, Values) {
  EXPECT_EQ(KSchedule::constant(3).at(1e5), 3);
  EXPECT_EQ(KSchedule::beta_log(1.0).at(1000.0), 7);
  EXPECT_EQ(KSchedule::beta_log(0.0).at(1000.0), 1);
  EXPECT_EQ(KSchedule::power_law(0.5).at(10000.0), 100);
  EXPECT_TRUE(KSchedule::power_law(0.5).limit_beta().infinite);
  EXPECT_EQ(KSchedule::beta_log(2.0).limit_beta(), Beta::finite(2.0));
}

TEST(Config, ValidationErrors) {
  ExperimentConfig c = disk_weak({10.0}, 1);
  EXPECT_THROW(c.validate(), Error);
  c.sizes = {100.0};
  c.replications = 0;
  EXPECT_THROW(c.validate(), Error);
  c.replications = 1;
  c.h = -1.0;
  EXPECT_THROW(c.validate(), Error);
  c.h.reset();
  c.mode = ExperimentMode::SllnTrace;
  c.sizes = {1000.0, 100.0};
  EXPECT_THROW(c.validate(), Error);
}

TEST(WeakBoundary, MinimalCloud) {
  ExperimentConfig c = disk_weak({16.0}, 1);
  c.k = KSchedule::constant(16);
  const ExperimentResult r = run_experiment(c);
  ASSERT_EQ(r.rows.size(), 1u);
  EXPECT_EQ(r.rows[0].points, 16u);
  EXPECT_LE(r.rows[0].stat_lo, r.rows[0].stat_hi);
}

TEST(WeakBoundary, RowsAndSummaryShape) {
  const ExperimentResult r = run_experiment(disk_weak({200.0, 800.0}, 12));
  ASSERT_EQ(r.rows.size(), 24u);
  ASSERT_EQ(r.summary.size(), 2u);
  for (const ResultRow& row : r.rows) {
    EXPECT_LE(row.lo, row.hi);
    EXPECT_LE(row.hi - row.lo, row.h + 1e-15);
    EXPECT_LE(row.stat_lo, row.stat_hi);
  }
  for (const SizeSummary& s : r.summary) {
    ASSERT_TRUE(s.ks_lo && s.ks_hi && s.cdf_modulus);
    EXPECT_GE(*s.ks_lo, 0.0);
    EXPECT_LE(*s.ks_lo, 1.0);
    EXPECT_LE(std::abs(*s.ks_lo - *s.ks_hi), *s.cdf_modulus + 1e-12);
    EXPECT_EQ(s.ecdf_x.size(), 12u);
    EXPECT_TRUE(std::is_sorted(s.ecdf_x.begin(), s.ecdf_x.end()));
  }
  EXPECT_EQ(r.law.d, 2);
  EXPECT_NEAR(r.law.svB, 2.0 * std::numbers::pi, 1e-15);
}

TEST(WeakBoundary, Deterministic) {
  const ExperimentConfig c = disk_weak({300.0}, 6);
  const ExperimentResult a = run_experiment(c), b = run_experiment(c);
  EXPECT_EQ(rows_csv(a), rows_csv(b));
  Json ja = summary_json(a), jb = summary_json(b);
  ja.erase("wall_clock_s");
  jb.erase("wall_clock_s");
  EXPECT_EQ(ja.dump(), jb.dump());
}

TEST(WeakBoundary, ReplicationIndependentOfSizeList) {
  const ExperimentResult one = run_experiment(disk_weak({300.0}, 4));
  const ExperimentResult two = run_experiment(disk_weak({100.0, 300.0}, 4));
  for (int i = 0; i < 4; ++i) EXPECT_EQ(one.rows[i].lo, two.rows[4 + i].lo);
}

TEST(WeakBoundary, HalvingHShiftsWithinTransformImage) {
  ExperimentConfig c = disk_weak({1000.0}, 20);
  c.h = 4e-3;
  const ExperimentResult coarse = run_experiment(c);
  c.h = 2e-3;
  const ExperimentResult fine = run_experiment(c);
  for (std::size_t i = 0; i < coarse.rows.size(); ++i) {
    const double top = std::max(coarse.rows[i].hi, fine.rows[i].hi);
    const double image = weak_transform_slope(top, 1000.0, 2, 1.0 / std::numbers::pi) * 4e-3;
    EXPECT_LE(std::abs(coarse.rows[i].stat_lo - fine.rows[i].stat_lo), image + 1e-12);
  }
  std::vector<double> a, b;
  for (const ResultRow& r : coarse.rows) a.push_back(r.stat_lo);
  for (const ResultRow& r : fine.rows) b.push_back(r.stat_lo);
  const double worst = weak_transform_slope(0.2, 1000.0, 2, 1.0 / std::numbers::pi) * 4e-3;
  // Every row moves by less than `worst`, so the two ECDFs agree after that shift.
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_LE(std::abs(a[i] - b[i]), worst);
}

TEST(WeakBoundary, AutoResolutionImage) {
  const ExperimentConfig c = disk_weak({1e4}, 1);
  const double h = resolution_for(c, 1e4);
  const double rbar = std::sqrt(std::log(1e4) / 1e4);  // f0 = 1/pi, limit = pi
  EXPECT_NEAR(weak_transform_slope(rbar, 1e4, 2, 1.0 / std::numbers::pi) * h, 0.05, 1e-9);
}

TEST(WeakBoundary, PoissonSamplingRuns) {
  ExperimentConfig c = disk_weak({500.0}, 10);
  c.sampling = SamplingScheme::Poisson;
  const ExperimentResult r = run_experiment(c);
  bool varied = false;
  for (const ResultRow& row : r.rows) varied |= row.points != 500u;
  EXPECT_TRUE(varied);
}

TEST(WeakBoundary, Refusals) {
  ExperimentConfig c = disk_weak({100.0}, 1);
  c.spec = ManifoldSpec::unit_square(2);
  c.region = RegionSpec::interior_body(0.25);
  c.k = KSchedule::constant(2);
  EXPECT_THROW(run_experiment(c), Refusal);
  c.region = RegionSpec::all();
  c.density.kind = "affine";
  c.density.coeffs = {0.5, 0.0};
  EXPECT_THROW(run_experiment(c), Refusal);
  c.density = DensityConfig{};
  c.k = KSchedule::beta_log(1.0);
  EXPECT_THROW(run_experiment(c), Refusal);
}

TEST(WeakInterior, SquareInteriorBodyRuns) {
  ExperimentConfig c = disk_weak({1000.0}, 8);
  c.spec = ManifoldSpec::unit_square(2);
  c.region = RegionSpec::interior_body(0.25);
  c.mode = ExperimentMode::WeakInterior;
  const ExperimentResult r = run_experiment(c);
  EXPECT_NEAR(r.law.vB, 0.25, 1e-15);
  ASSERT_TRUE(r.summary[0].ks_lo);
}

TEST(WeakInterior, MonotoneInK) {
  ExperimentConfig c = disk_weak({1000.0}, 10);
  c.spec = ManifoldSpec::unit_square(2);
  c.region = RegionSpec::interior_body(0.25);
  c.mode = ExperimentMode::WeakInterior;
  c.h = 1e-3;
  const ExperimentResult k1 = run_experiment(c);
  c.k = KSchedule::constant(3);
  const ExperimentResult k3 = run_experiment(c);
  for (std::size_t i = 0; i < k1.rows.size(); ++i) {
    EXPECT_GE(k3.rows[i].lo, k1.rows[i].lo);
    EXPECT_GE(k3.rows[i].hi, k1.rows[i].hi);
  }
}

TEST(WeakInterior, SphereMatchesCoverage) {
  ExperimentConfig c = disk_weak({500.0}, 6);
  c.spec = ManifoldSpec::unit_sphere();
  c.mode = ExperimentMode::WeakInterior;
  const ExperimentResult r = run_experiment(c);
  for (const ResultRow& row : r.rows) {
    const PointCloud cloud = replication_cloud(c, row.size, row.rep);
    const ThresholdEstimate cov =
        adaptive_threshold(c.spec, c.region, cloud, 1, c.metric, row.h, Objective::Coverage);
    EXPECT_EQ(cov.lo, row.lo);
    EXPECT_EQ(cov.hi, row.hi);
  }
}

TEST(Slln, ReferenceValues) {
  ExperimentConfig c = disk_weak({1000.0, 4000.0}, 4);
  c.spec = ManifoldSpec::unit_square(2);
  c.mode = ExperimentMode::SllnTrace;
  const ExperimentResult r = run_experiment(c);
  EXPECT_DOUBLE_EQ(*r.summary[0].reference, 1.0);
  for (const ResultRow& row : r.rows)
    EXPECT_NEAR(row.stat_lo, row.size * std::numbers::pi * row.lo * row.lo / std::log(row.size),
                1e-9);

  c.k = KSchedule::power_law(0.5);
  const ExperimentResult p = run_experiment(c);
  EXPECT_DOUBLE_EQ(*p.summary[0].reference, 2.0);  // max(1/f0, 2/f1), f0 = f1 = 1
  for (const ResultRow& row : p.rows) {
    EXPECT_EQ(row.k, static_cast<int>(std::ceil(std::sqrt(row.size))));
    EXPECT_NEAR(row.stat_lo, row.size * std::numbers::pi * row.lo * row.lo / row.k, 1e-9);
  }

  c.k = KSchedule::beta_log(1.0);
  const ExperimentResult b = run_experiment(c);
  EXPECT_NEAR(*b.summary[0].reference, std::max(hatH(1.0, 1.0), 2.0 * hatH(1.0, 0.5)), 1e-15);
}

TEST(Slln, KAtLeastNIsError) {
  ExperimentConfig c = disk_weak({16.0, 32.0}, 1);
  c.mode = ExperimentMode::SllnTrace;
  c.k = KSchedule::beta_log(10.0);
  EXPECT_THROW(run_experiment(c), Error);
}

TEST(Summary, ExchangeableReplications) {
  std::vector<double> xs{0.3, -0.2, 1.7, 0.4, 2.2, -1.0};
  std::vector<double> ys(xs.rbegin(), xs.rend());
  const auto cdf = [](double z) { return std::exp(-std::exp(-z)); };
  EXPECT_EQ(ks_distance(xs, cdf), ks_distance(ys, cdf));
  EXPECT_EQ(quantile(xs, 0.5), quantile(ys, 0.5));
}

TEST(Rows, CsvHeader) {
  const ExperimentResult r = run_experiment(disk_weak({100.0}, 2));
  const std::string csv = rows_csv(r);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "size,rep,k,metric,lo,hi,h,stat_lo,stat_hi");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3);
}
