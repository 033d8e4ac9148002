#include "covlab/config.hpp"

#include <cmath>

namespace covlab {

namespace {

const char* mode_name(ExperimentMode m) {
  switch (m) {
    case ExperimentMode::WeakBoundary: return "weak_boundary";
    case ExperimentMode::WeakInterior: return "weak_interior";
    case ExperimentMode::SllnTrace: return "slln";
  }
  return "?";
}

ExperimentMode mode_from(const std::string& s) {
  if (s == "weak_boundary" || s == "weak") return ExperimentMode::WeakBoundary;
  if (s == "weak_interior" || s == "interior") return ExperimentMode::WeakInterior;
  if (s == "slln" || s == "slln_trace") return ExperimentMode::SllnTrace;
  throw Error("unknown mode '" + s + "'");
}

Json schedule_json(const KSchedule& k) {
  switch (k.kind) {
    case KSchedule::Kind::Constant: return {{"schedule", "constant"}, {"k", k.k}};
    case KSchedule::Kind::BetaLog: return {{"schedule", "beta_log"}, {"beta", k.beta}};
    case KSchedule::Kind::Power: return {{"schedule", "power"}, {"p", k.power}};
  }
  return {};
}

KSchedule schedule_from(const Json& j) {
  if (j.is_number_integer()) return KSchedule::constant(j.get<int>());
  const std::string kind = j.value("schedule", "constant");
  if (kind == "constant") return KSchedule::constant(j.at("k").get<int>());
  if (kind == "beta_log") return KSchedule::beta_log(j.at("beta").get<double>());
  if (kind == "power") return KSchedule::power_law(j.at("p").get<double>());
  throw Error("unknown k schedule '" + kind + "'");
}

Json beta_json(const Beta& b) {
  if (b.infinite) return "inf";
  return b.value;
}

}  // namespace

std::string to_string(ExperimentMode mode) { return mode_name(mode); }

Json to_json(const Point& x) {
  Json j = Json::array();
  for (double v : x.coords()) j.push_back(v);
  return j;
}

Point point_from_json(const Json& j) {
  if (!j.is_array() || j.size() > static_cast<std::size_t>(kMaxDim))
    throw Error("point must be an array of at most 8 numbers");
  Point p = Point::zeros(static_cast<int>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) p[static_cast<int>(i)] = j[i].get<double>();
  return p;
}

Json to_json(const ManifoldSpec& spec) {
  Json j{{"family", spec.name()}};
  if (spec.family() == Family::UnitSquare) j["d"] = spec.dim();
  if (spec.family() == Family::SphericalCap) j["alpha"] = spec.cap_angle();
  return j;
}

ManifoldSpec spec_from_json(const Json& j) {
  const std::string family = j.at("family").get<std::string>();
  if (family == "unit_square") return ManifoldSpec::unit_square(j.value("d", 2));
  if (family == "unit_disk") return ManifoldSpec::unit_disk();
  if (family == "solid_ball") return ManifoldSpec::solid_ball();
  if (family == "unit_sphere") return ManifoldSpec::unit_sphere();
  if (family == "spherical_cap") return ManifoldSpec::spherical_cap(j.at("alpha").get<double>());
  throw Error("unknown manifold family '" + family + "'");
}

Json to_json(const RegionSpec& region) {
  switch (region.kind) {
    case RegionSpec::Kind::All:
      return {{"kind", "all"}};
    case RegionSpec::Kind::InteriorBody:
      return {{"kind", "interior_body"}, {"delta", region.delta}};
    case RegionSpec::Kind::GeodesicBall:
      return {{"kind", "geodesic_ball"}, {"center", to_json(region.center)},
              {"radius", region.radius}};
  }
  return {};
}

RegionSpec region_from_json(const Json& j) {
  const std::string kind = j.value("kind", "all");
  if (kind == "all") return RegionSpec::all();
  if (kind == "interior_body") return RegionSpec::interior_body(j.at("delta").get<double>());
  if (kind == "geodesic_ball")
    return RegionSpec::geodesic_ball(point_from_json(j.at("center")),
                                     j.at("radius").get<double>());
  throw Error("unknown region kind '" + kind + "'");
}

Json to_json(const ThresholdEstimate& est) {
  return {{"lo", est.lo},         {"hi", est.hi},   {"h", est.h},
          {"k", est.k},           {"metric", to_string(est.metric)},
          {"argmax", to_json(est.argmax)}};
}

Json to_json(const LimitLaw& law) {
  Json j{{"d", law.d},   {"k", law.k},     {"f0", law.f0},
         {"vB", law.vB}, {"svB", law.svB}, {"beta", beta_json(law.beta)}};
  j["f1"] = law.f1 ? Json(*law.f1) : Json("none");
  return j;
}

Json to_json(const ExperimentConfig& c) {
  Json density{{"kind", c.density.kind}};
  if (!c.density.coeffs.empty()) density["coeffs"] = c.density.coeffs;
  if (c.density.f0) density["f0"] = *c.density.f0;
  if (c.density.f1) density["f1"] = *c.density.f1;
  Json j{{"spec", to_json(c.spec)},
         {"region", to_json(c.region)},
         {"density", density},
         {"metric", to_string(c.metric)},
         {"mode", mode_name(c.mode)},
         {"sampling", c.sampling == SamplingScheme::Poisson ? "poisson" : "binomial"},
         {"sizes", c.sizes},
         {"k", schedule_json(c.k)},
         {"replications", c.replications},
         {"seed", c.seed},
         {"slln_target", c.slln_target == SllnTarget::Interior ? "interior" : "coverage"}};
  j["h"] = c.h ? Json(*c.h) : Json("auto");
  return j;
}

ExperimentConfig config_from_json(const Json& j) {
  ExperimentConfig c;
  try {
    c.spec = spec_from_json(j.at("spec"));
    if (j.contains("region")) c.region = region_from_json(j.at("region"));
    if (j.contains("density")) {
      const Json& d = j.at("density");
      c.density.kind = d.value("kind", "uniform");
      if (d.contains("coeffs")) c.density.coeffs = d.at("coeffs").get<std::vector<double>>();
      if (d.contains("f0")) c.density.f0 = d.at("f0").get<double>();
      if (d.contains("f1")) c.density.f1 = d.at("f1").get<double>();
    }
    c.metric = metric_from_string(j.value("metric", "geodesic"));
    c.mode = mode_from(j.value("mode", "weak_boundary"));
    const std::string sampling = j.value("sampling", "binomial");
    if (sampling == "poisson")
      c.sampling = SamplingScheme::Poisson;
    else if (sampling == "binomial")
      c.sampling = SamplingScheme::Binomial;
    else
      throw Error("unknown sampling '" + sampling + "'");
    c.sizes = j.at("sizes").get<std::vector<double>>();
    if (j.contains("k")) c.k = schedule_from(j.at("k"));
    c.replications = j.value("replications", 1);
    c.seed = j.value("seed", std::uint64_t{1});
    if (j.contains("h") && !j.at("h").is_string()) c.h = j.at("h").get<double>();
    const std::string target = j.value("slln_target", "coverage");
    if (target == "interior")
      c.slln_target = SllnTarget::Interior;
    else if (target == "coverage")
      c.slln_target = SllnTarget::Coverage;
    else
      throw Error("unknown slln_target '" + target + "'");
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("config: ") + e.what());
  }
  c.validate();
  return c;
}

Json summary_json(const ExperimentResult& r) {
  Json sizes = Json::array();
  for (const SizeSummary& s : r.summary) {
    Json e{{"size", s.size},
           {"k", s.k},
           {"h", s.h},
           {"quantiles_lo", {{"q25", s.q25_lo}, {"median", s.median_lo}, {"q75", s.q75_lo}}},
           {"quantiles_hi", {{"q25", s.q25_hi}, {"median", s.median_hi}, {"q75", s.q75_hi}}},
           {"ecdf", {{"x", s.ecdf_x}, {"p", s.ecdf_p}}}};
    if (s.ks_lo) e["ks"] = {{"lo", *s.ks_lo}, {"hi", *s.ks_hi}, {"cdf_modulus", *s.cdf_modulus}};
    if (!s.theory.empty()) e["ecdf"]["theory"] = s.theory;
    if (s.reference) e["reference"] = *s.reference;
    sizes.push_back(std::move(e));
  }
  return {{"config", to_json(r.config)},
          {"law", to_json(r.law)},
          {"per_size", sizes},
          {"wall_clock_s", r.wall_clock_s}};
}

Json cloud_sidecar(const ManifoldSpec& spec, const std::string& density_label,
                   const PointCloud& cloud) {
  Json origin;
  switch (cloud.origin) {
    case PointCloud::Origin::Binomial:
      origin = {{"kind", "binomial"}, {"n", cloud.requested}};
      break;
    case PointCloud::Origin::Poisson:
      origin = {{"kind", "poisson"}, {"t", cloud.intensity}, {"realized_count", cloud.size()}};
      break;
    case PointCloud::Origin::External:
      origin = {{"kind", "external"}, {"count", cloud.size()}};
      break;
  }
  return {{"spec", to_json(spec)},
          {"density", density_label},
          {"seed", cloud.seed},
          {"origin", origin}};
}

}  // namespace covlab
