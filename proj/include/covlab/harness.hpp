#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "covlab/coverage.hpp"
#include "covlab/limits.hpp"
#include "covlab/manifold.hpp"
#include "covlab/sampling.hpp"

namespace covlab {

enum class ExperimentMode { WeakBoundary, WeakInterior, SllnTrace };
enum class SamplingScheme { Binomial, Poisson };

/// k as a function of the sample size.
struct KSchedule {
  enum class Kind {
    Constant,  // k(n) = k
    BetaLog,   // k(n) = max(1, ceil(beta log n))
    Power,     // k(n) = ceil(n^p), p < 1; the beta = infinity regime
  };
  Kind kind = Kind::Constant;
  int k = 1;
  double beta = 0.0;
  double power = 0.5;

  static KSchedule constant(int k) { return {Kind::Constant, k, 0.0, 0.5}; }
  static KSchedule beta_log(double beta) { return {Kind::BetaLog, 1, beta, 0.5}; }
  static KSchedule power_law(double p) { return {Kind::Power, 1, 0.0, p}; }

  int at(double n) const;
  /// lim k(n)/log n.
  Beta limit_beta() const;
  friend bool operator==(const KSchedule&, const KSchedule&) = default;
};

/// Serializable density description: uniform, or affine with closed-form
/// normalization. f0/f1 override the closed-form infima when given.
struct DensityConfig {
  std::string kind = "uniform";
  std::vector<double> coeffs;
  std::optional<double> f0;
  std::optional<double> f1;

  DensitySpec build(const ManifoldSpec& spec) const;
  friend bool operator==(const DensityConfig&, const DensityConfig&) = default;
};

/// Which threshold an SLLN trace follows.
enum class SllnTarget { Coverage, Interior };

struct ExperimentConfig {
  ManifoldSpec spec = ManifoldSpec::unit_square();
  RegionSpec region;
  DensityConfig density;
  Metric metric = Metric::Geodesic;
  ExperimentMode mode = ExperimentMode::WeakBoundary;
  SamplingScheme sampling = SamplingScheme::Binomial;
  std::vector<double> sizes;
  KSchedule k;
  int replications = 1;
  std::optional<double> h;  // nullopt selects h per size automatically
  std::uint64_t seed = 1;
  SllnTarget slln_target = SllnTarget::Coverage;

  void validate() const;
  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

struct ResultRow {
  double size = 0.0;
  int rep = 0;
  int k = 1;
  std::size_t points = 0;
  Metric metric = Metric::Geodesic;
  double lo = 0.0;
  double hi = 0.0;
  double h = 0.0;
  double stat_lo = 0.0;
  double stat_hi = 0.0;
};

struct SizeSummary {
  double size = 0.0;
  int k = 1;
  double h = 0.0;
  std::vector<double> ecdf_x;       // sorted stat_lo
  std::vector<double> ecdf_p;       // i / M
  std::vector<double> theory;       // limit CDF at ecdf_x (weak modes)
  std::optional<double> ks_lo;      // weak modes
  std::optional<double> ks_hi;
  std::optional<double> cdf_modulus;  // bound on |ks_lo - ks_hi|
  double q25_lo = 0.0, median_lo = 0.0, q75_lo = 0.0;
  double q25_hi = 0.0, median_hi = 0.0, q75_hi = 0.0;
  std::optional<double> reference;  // SLLN limit
};

struct ExperimentResult {
  ExperimentConfig config;
  LimitLaw law;
  std::vector<ResultRow> rows;
  std::vector<SizeSummary> summary;
  double wall_clock_s = 0.0;
};

/// Seed of replication `rep` at `size`; independent of the sampling scheme
/// so binomial and Poisson runs share their point sequences.
std::uint64_t replication_seed(std::uint64_t base, double size, int rep);

/// The cloud a run draws for (size, rep).
PointCloud replication_cloud(const ExperimentConfig& config, double size, int rep);

/// The law parameters a run compares against.
LimitLaw law_for(const ExperimentConfig& config);

/// The grid resolution used at `size`.
double resolution_for(const ExperimentConfig& config, double size);

ExperimentResult run_weak_boundary(const ExperimentConfig& config);
ExperimentResult run_weak_interior(const ExperimentConfig& config);
ExperimentResult run_slln_trace(const ExperimentConfig& config);
/// Dispatches on config.mode.
ExperimentResult run_experiment(const ExperimentConfig& config);

void write_rows_csv(std::ostream& out, const ExperimentResult& result);

}  // namespace covlab
