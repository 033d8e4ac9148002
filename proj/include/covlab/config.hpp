#pragma once

#include <string>

#include <json.hpp>

#include "covlab/coverage.hpp"
#include "covlab/harness.hpp"
#include "covlab/limits.hpp"
#include "covlab/manifold.hpp"
#include "covlab/sampling.hpp"

namespace covlab {

using Json = nlohmann::json;

Json to_json(const Point& x);
Point point_from_json(const Json& j);

/// {"family":"unit_disk"}, {"family":"unit_square","d":2},
/// {"family":"spherical_cap","alpha":1.0472}
Json to_json(const ManifoldSpec& spec);
ManifoldSpec spec_from_json(const Json& j);

/// {"kind":"all"}, {"kind":"interior_body","delta":0.2},
/// {"kind":"geodesic_ball","center":[...],"radius":0.3}
Json to_json(const RegionSpec& region);
RegionSpec region_from_json(const Json& j);

Json to_json(const ThresholdEstimate& est);
Json to_json(const LimitLaw& law);

Json to_json(const ExperimentConfig& config);
ExperimentConfig config_from_json(const Json& j);

/// Config echo, law parameters, per-size KS pair and quantiles, wall-clock.
Json summary_json(const ExperimentResult& result);

/// Sidecar describing a dumped cloud.
Json cloud_sidecar(const ManifoldSpec& spec, const std::string& density_label,
                   const PointCloud& cloud);

std::string to_string(ExperimentMode mode);

}  // namespace covlab
