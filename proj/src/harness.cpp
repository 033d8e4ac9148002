#include "covlab/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <functional>
#include <span>
#include <ostream>

#include "covlab/parallel.hpp"
#include "covlab/stats.hpp"

namespace covlab {

int KSchedule::at(double n) const {
  switch (kind) {
    case Kind::Constant:
      return k;
    case Kind::BetaLog:
      return std::max(1, static_cast<int>(std::ceil(beta * std::log(n) - 1e-12)));
    case Kind::Power:
      return std::max(1, static_cast<int>(std::ceil(std::pow(n, power) - 1e-9)));
  }
  return k;
}

Beta KSchedule::limit_beta() const {
  switch (kind) {
    case Kind::Constant: return Beta::finite(0.0);
    case Kind::BetaLog: return Beta::finite(beta);
    case Kind::Power: return Beta::infinity();
  }
  return Beta::finite(0.0);
}

DensitySpec DensityConfig::build(const ManifoldSpec& spec) const {
  if (kind == "uniform") return DensitySpec::uniform();
  if (kind == "affine") return DensitySpec::affine(spec, coeffs);
  throw Error("unknown density kind '" + kind + "'");
}

void ExperimentConfig::validate() const {
  validate_region(spec, region);
  if (sizes.empty()) throw Error("config: sizes must be nonempty");
  for (double s : sizes)
    if (!(s >= 16.0)) throw Error("config: every size must be at least 16");
  if (replications < 1) throw Error("config: replications must be at least 1");
  if (h && !(*h > 0.0)) throw Error("config: h must be positive");
  switch (k.kind) {
    case KSchedule::Kind::Constant:
      if (k.k < 1) throw Error("config: k must be at least 1");
      break;
    case KSchedule::Kind::BetaLog:
      if (!(k.beta >= 0.0)) throw Error("config: beta must be nonnegative");
      break;
    case KSchedule::Kind::Power:
      if (!(k.power > 0.0 && k.power < 1.0)) throw Error("config: power must lie in (0, 1)");
      break;
  }
  if (mode == ExperimentMode::SllnTrace) {
    for (std::size_t i = 1; i < sizes.size(); ++i)
      if (!(sizes[i] > sizes[i - 1])) throw Error("config: SLLN sizes must increase");
  }
  density.build(spec);
}

std::uint64_t replication_seed(std::uint64_t base, double size, int rep) {
  std::uint64_t bits = 0;
  std::memcpy(&bits, &size, sizeof bits);
  return derive_seed(base, bits, static_cast<std::uint64_t>(rep));
}

PointCloud replication_cloud(const ExperimentConfig& config, double size, int rep) {
  const DensitySpec dens = config.density.build(config.spec);
  const std::uint64_t seed = replication_seed(config.seed, size, rep);
  if (config.sampling == SamplingScheme::Poisson)
    return poisson_sample(config.spec, dens, size, seed);
  return density_sample(config.spec, dens, static_cast<std::uint64_t>(std::llround(size)), seed);
}

namespace {

Regime regime_of(ExperimentMode mode) {
  switch (mode) {
    case ExperimentMode::WeakBoundary: return Regime::WeakBoundary;
    case ExperimentMode::WeakInterior: return Regime::WeakInterior;
    case ExperimentMode::SllnTrace: return Regime::Slln;
  }
  return Regime::Slln;
}

SllnMode slln_mode(const ExperimentConfig& config) {
  if (config.mode == ExperimentMode::WeakBoundary) return SllnMode::Boundary;
  if (config.mode == ExperimentMode::WeakInterior) return SllnMode::Interior;
  return config.slln_target == SllnTarget::Interior ? SllnMode::Interior : SllnMode::Boundary;
}

Objective objective_of(const ExperimentConfig& config) {
  const bool all = config.region.kind == RegionSpec::Kind::All;
  if (config.mode == ExperimentMode::WeakInterior && all) return Objective::Interior;
  if (config.mode == ExperimentMode::SllnTrace && config.slln_target == SllnTarget::Interior)
    return Objective::Interior;
  return Objective::Coverage;
}

double slln_denominator(const ExperimentConfig& config, double size, int k) {
  return config.k.limit_beta().infinite ? static_cast<double>(k) : std::log(size);
}

double statistic(const ExperimentConfig& config, const LimitLaw& law, double R, double size,
                 int k) {
  switch (config.mode) {
    case ExperimentMode::WeakBoundary:
      return weak_transform(R, size, law.d, k, law.f0);
    case ExperimentMode::WeakInterior:
      return interior_transform(R, size, law.d, k, law.f0);
    case ExperimentMode::SllnTrace:
      return size * theta(law.d) * std::pow(R, law.d) / slln_denominator(config, size, k);
  }
  return 0.0;
}

void require_weak_preconditions(const ExperimentConfig& config) {
  if (config.density.kind != "uniform")
    throw Refusal("weak-law experiments require the uniform density");
  if (config.k.kind != KSchedule::Kind::Constant)
    throw Refusal("weak-law experiments require a constant k");
}

}  // namespace

LimitLaw law_for(const ExperimentConfig& config) {
  const ManifoldSpec& spec = config.spec;
  const DensitySpec dens = config.density.build(spec);
  LimitLaw law;
  law.d = spec.dim();
  law.k = config.k.kind == KSchedule::Kind::Constant ? config.k.k : 1;
  law.regime = regime_of(config.mode);
  law.beta = config.k.limit_beta();
  law.touches_boundary = region_touches_boundary(spec, config.region);

  const auto body_inf = config.density.f0 ? config.density.f0 : dens.inf_on_body(spec);
  if (!body_inf) throw Error("config: density needs an explicit f0");
  if (config.region.kind != RegionSpec::Kind::All && !dens.is_uniform() && !config.density.f0)
    throw Error("config: non-uniform density on a proper subregion needs an explicit f0");
  law.f0 = *body_inf;

  if (law.touches_boundary) {
    auto boundary_inf = config.density.f1 ? config.density.f1 : dens.inf_on_boundary(spec);
    if (config.region.kind != RegionSpec::Kind::All && !dens.is_uniform() && !config.density.f1)
      boundary_inf.reset();
    if (!boundary_inf) throw Error("config: density needs an explicit f1");
    law.f1 = boundary_inf;
  }

  try {
    const RegionMeasures m = region_measures(spec, config.region);
    law.vB = m.volume;
    law.svB = m.boundary_volume;
  } catch (const Error&) {
    if (config.mode != ExperimentMode::SllnTrace) throw;
    law.vB = volume(spec);
    law.svB = 0.0;
  }
  law.validate();
  return law;
}

double resolution_for(const ExperimentConfig& config, double size) {
  if (config.h) return *config.h;
  const LimitLaw law = law_for(config);
  const int d = law.d;
  const int k = config.k.at(size);
  const double limit = slln_limit(d, config.k.limit_beta(), law.f0, law.f1, slln_mode(config));
  const double denom = slln_denominator(config, size, k);
  const double r_bar = std::pow(limit * denom / (size * theta(d)), 1.0 / d);

  double slope = 0.0;
  double image = 0.05;
  switch (config.mode) {
    case ExperimentMode::WeakBoundary:
      slope = weak_transform_slope(r_bar, size, d, law.f0);
      break;
    case ExperimentMode::WeakInterior:
      slope = interior_transform_slope(r_bar, size, d, law.f0);
      break;
    case ExperimentMode::SllnTrace:
      slope = size * theta(d) * d * std::pow(r_bar, d - 1) / denom;
      image = 0.005;
      break;
  }
  return std::min(image / slope, 0.05 * diameter(config.spec));
}

namespace {

SizeSummary summarize(const ExperimentConfig& config, const LimitLaw& law,
                      std::span<const ResultRow> rows) {
  SizeSummary s;
  s.size = rows.front().size;
  s.k = rows.front().k;
  s.h = rows.front().h;
  std::vector<double> lo, hi;
  double widest = 0.0;
  for (const ResultRow& r : rows) {
    lo.push_back(r.stat_lo);
    hi.push_back(r.stat_hi);
    widest = std::max(widest, r.stat_hi - r.stat_lo);
  }
  s.q25_lo = quantile(lo, 0.25);
  s.median_lo = quantile(lo, 0.5);
  s.q75_lo = quantile(lo, 0.75);
  s.q25_hi = quantile(hi, 0.25);
  s.median_hi = quantile(hi, 0.5);
  s.q75_hi = quantile(hi, 0.75);

  s.ecdf_x = lo;
  std::sort(s.ecdf_x.begin(), s.ecdf_x.end());
  const double m = static_cast<double>(s.ecdf_x.size());
  for (std::size_t i = 0; i < s.ecdf_x.size(); ++i)
    s.ecdf_p.push_back(static_cast<double>(i + 1) / m);

  if (config.mode == ExperimentMode::SllnTrace) {
    s.reference = slln_limit(law.d, config.k.limit_beta(), law.f0, law.f1, slln_mode(config));
    return s;
  }
  std::function<double(double)> cdf;
  if (config.mode == ExperimentMode::WeakBoundary)
    cdf = [&law](double z) { return weak_limit_cdf(law, z); };
  else
    cdf = [&law](double z) { return interior_limit_cdf(law, z); };
  for (double x : s.ecdf_x) s.theory.push_back(cdf(x));
  s.ks_lo = ks_distance(lo, cdf);
  s.ks_hi = ks_distance(hi, cdf);
  s.cdf_modulus = cdf_modulus(cdf, widest);
  return s;
}

ExperimentResult run(const ExperimentConfig& config) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  ExperimentResult result;
  result.config = config;
  result.law = law_for(config);
  const LimitLaw& law = result.law;

  if (config.mode == ExperimentMode::WeakBoundary) {
    const bool degenerate = law.svB == 0.0 && !(law.d == 2 && law.k == 1);
    if (degenerate)
      throw Refusal("weak boundary law is degenerate: B meets no boundary and (d,k) != (2,1)");
  }
  // Evaluates the CDF once so refusals surface before any sampling.
  if (config.mode == ExperimentMode::WeakBoundary) weak_limit_cdf(law, 0.0);

  const std::size_t reps = static_cast<std::size_t>(config.replications);
  std::vector<double> resolutions;
  for (double size : config.sizes) {
    const int k = config.k.at(size);
    if (config.mode == ExperimentMode::SllnTrace && !(static_cast<double>(k) < size))
      throw Error("k(n) >= n at n = " + std::to_string(size) + "; k(n)/n must vanish");
    resolutions.push_back(resolution_for(config, size));
  }

  result.rows.resize(config.sizes.size() * reps);
  const Objective objective = objective_of(config);
  parallel_for(result.rows.size(), [&](std::size_t job) {
    const std::size_t si = job / reps;
    const int rep = static_cast<int>(job % reps);
    const double size = config.sizes[si];
    const int k = config.k.at(size);
    const PointCloud cloud = replication_cloud(config, size, rep);
    const ThresholdEstimate est = adaptive_threshold(config.spec, config.region, cloud, k,
                                                     config.metric, resolutions[si], objective);
    ResultRow& row = result.rows[job];
    row.size = size;
    row.rep = rep;
    row.k = k;
    row.points = cloud.size();
    row.metric = config.metric;
    row.lo = est.lo;
    row.hi = est.hi;
    row.h = resolutions[si];
    row.stat_lo = statistic(config, law, est.lo, size, k);
    row.stat_hi = statistic(config, law, est.hi, size, k);
  });

  for (std::size_t si = 0; si < config.sizes.size(); ++si)
    result.summary.push_back(
        summarize(config, law, std::span<const ResultRow>(result.rows).subspan(si * reps, reps)));
  result.wall_clock_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

}  // namespace

ExperimentResult run_weak_boundary(const ExperimentConfig& config) {
  if (config.mode != ExperimentMode::WeakBoundary)
    throw Error("run_weak_boundary: config mode is not weak_boundary");
  require_weak_preconditions(config);
  return run(config);
}

ExperimentResult run_weak_interior(const ExperimentConfig& config) {
  if (config.mode != ExperimentMode::WeakInterior)
    throw Error("run_weak_interior: config mode is not weak_interior");
  require_weak_preconditions(config);
  return run(config);
}

ExperimentResult run_slln_trace(const ExperimentConfig& config) {
  if (config.mode != ExperimentMode::SllnTrace)
    throw Error("run_slln_trace: config mode is not slln");
  return run(config);
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  switch (config.mode) {
    case ExperimentMode::WeakBoundary: return run_weak_boundary(config);
    case ExperimentMode::WeakInterior: return run_weak_interior(config);
    case ExperimentMode::SllnTrace: return run_slln_trace(config);
  }
  throw Error("unknown mode");
}

void write_rows_csv(std::ostream& out, const ExperimentResult& result) {
  const auto old = out.precision(17);
  out << "size,rep,k,metric,lo,hi,h,stat_lo,stat_hi\n";
  for (const ResultRow& r : result.rows) {
    out << r.size << ',' << r.rep << ',' << r.k << ',' << to_string(r.metric) << ',' << r.lo << ','
        << r.hi << ',' << r.h << ',' << r.stat_lo << ',' << r.stat_hi << '\n';
  }
  out.precision(old);
}

}  // namespace covlab
