#include <gtest/gtest.h>

#include <numbers>

#include "covlab/config.hpp"

using namespace covlab;

TEST(ConfigJson, RoundTripVariants) {
  std::vector<ExperimentConfig> configs(4);
  configs[0].sizes = {100, 1000};
  configs[1].spec = ManifoldSpec::spherical_cap(1.1);
  configs[1].region = RegionSpec::geodesic_ball(Point{0.0, 0.0, 1.0}, 2.0);
  configs[1].metric = Metric::AmbientEuclidean;
  configs[1].sampling = SamplingScheme::Poisson;
  configs[1].sizes = {500};
  configs[1].h = 0.003;
  configs[2].spec = ManifoldSpec::unit_square(3);
  configs[2].region = RegionSpec::interior_body(0.1);
  configs[2].mode = ExperimentMode::SllnTrace;
  configs[2].k = KSchedule::beta_log(1.5);
  configs[2].density.kind = "affine";
  configs[2].density.coeffs = {0.5, 0.0, 0.0};
  configs[2].density.f0 = 0.8;
  configs[2].sizes = {100, 1000};
  configs[2].slln_target = SllnTarget::Interior;
  configs[3].spec = ManifoldSpec::solid_ball();
  configs[3].mode = ExperimentMode::WeakInterior;
  configs[3].k = KSchedule::power_law(0.3);
  configs[3].sizes = {64};
  configs[3].replications = 9;
  configs[3].seed = 0xfeedfacecafebeefULL;
  for (const ExperimentConfig& c : configs) {
    const Json j = to_json(c);
    const ExperimentConfig back = config_from_json(Json::parse(j.dump()));
    EXPECT_EQ(back, c) << j.dump();
  }
}

TEST(ConfigJson, DefaultsAndErrors) {
  const Json j = Json::parse(R"({"spec":{"family":"unit_disk"},"sizes":[100]})");
  const ExperimentConfig c = config_from_json(j);
  EXPECT_EQ(c.spec, ManifoldSpec::unit_disk());
  EXPECT_EQ(c.k, KSchedule::constant(1));
  EXPECT_FALSE(c.h.has_value());
  EXPECT_THROW(config_from_json(Json::parse(R"({"sizes":[100]})")), Error);
  EXPECT_THROW(config_from_json(Json::parse(R"({"spec":{"family":"torus"},"sizes":[100]})")),
               Error);
  EXPECT_THROW(
      config_from_json(Json::parse(R"({"spec":{"family":"unit_disk"},"sizes":[100],"metric":"l1"})")),
      Error);
  EXPECT_THROW(config_from_json(Json::parse(R"({"spec":{"family":"unit_disk"},"sizes":[8]})")),
               Error);
}

TEST(ConfigJson, ThresholdAndLaw) {
  ThresholdEstimate e;
  e.lo = 0.5;
  e.hi = 0.51;
  e.h = 0.01;
  e.k = 2;
  e.argmax = Point{0.1, 0.2};
  const Json j = to_json(e);
  EXPECT_EQ(j["metric"], "geodesic");
  EXPECT_EQ(j["argmax"].size(), 2u);
  LimitLaw law;
  law.beta = Beta::infinity();
  const Json l = to_json(law);
  EXPECT_EQ(l["beta"], "inf");
  EXPECT_EQ(l["f1"], "none");
}

TEST(ConfigJson, SidecarNeverSerializesInfinity) {
  const ManifoldSpec sphere = ManifoldSpec::unit_sphere();
  const PointCloud cloud = poisson_sample(sphere, DensitySpec::uniform(), 50.0, 2);
  const Json j = cloud_sidecar(sphere, "uniform", cloud);
  EXPECT_EQ(j["origin"]["kind"], "poisson");
  EXPECT_EQ(j["origin"]["realized_count"], cloud.size());
  EXPECT_EQ(j.dump().find("inf"), std::string::npos);
}
