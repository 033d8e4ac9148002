// covlab command-line entry point.
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "covlab/config.hpp"
#include "covlab/coverage.hpp"
#include "covlab/harness.hpp"
#include "covlab/limits.hpp"
#include "covlab/selftest.hpp"

namespace {

using covlab::Json;

constexpr const char* kUsage =
    "usage: covlab <subcommand> [options]\n"
    "subcommands:\n"
    "  constants --d 2..5 --k 1..4\n"
    "  cover --cloud pts.csv --spec disk|square|ball|sphere|cap [--alpha A] [--dim D]\n"
    "        --k K --h H [--metric geodesic|euclidean] [--delta D] [--adaptive]\n"
    "        [--objective coverage|interior]\n"
    "  weak|interior|slln --config cfg.json [--seed S] [--out DIR] [--reps M]\n"
    "        [--sizes a,b,c] [--metric geodesic|euclidean]\n"
    "  selftest\n";

std::pair<int, int> parse_range(const std::string& s) {
  const auto dots = s.find("..");
  try {
    if (dots == std::string::npos) {
      const int v = std::stoi(s);
      return {v, v};
    }
    return {std::stoi(s.substr(0, dots)), std::stoi(s.substr(dots + 2))};
  } catch (const std::exception&) {
    throw covlab::Error("bad range '" + s + "', expected a..b");
  }
}

std::vector<double> parse_sizes(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw covlab::Error("bad size '" + item + "'");
    }
  }
  return out;
}

covlab::ManifoldSpec spec_from_name(const std::string& name, double alpha, int dim) {
  if (name == "disk") return covlab::ManifoldSpec::unit_disk();
  if (name == "square") return covlab::ManifoldSpec::unit_square(dim);
  if (name == "ball") return covlab::ManifoldSpec::solid_ball();
  if (name == "sphere") return covlab::ManifoldSpec::unit_sphere();
  if (name == "cap") return covlab::ManifoldSpec::spherical_cap(alpha);
  throw covlab::Error("unknown spec '" + name + "'");
}

int cmd_constants(const std::string& d_range, const std::string& k_range) {
  const auto [d0, d1] = parse_range(d_range);
  const auto [k0, k1] = parse_range(k_range);
  if (d0 < 2 || d1 < d0 || k0 < 1 || k1 < k0) throw covlab::Error("need 2 <= d0 <= d1, 1 <= k0 <= k1");
  Json rows = Json::array();
  for (int d = d0; d <= d1; ++d) {
    Json cdk = Json::object();
    for (int k = k0; k <= k1; ++k) cdk[std::to_string(k)] = covlab::c_dk(d, k);
    rows.push_back({{"d", d}, {"theta_d", covlab::theta(d)}, {"c_d", covlab::c_d(d)},
                    {"c_dk", cdk}});
  }
  std::cout << Json{{"constants", rows}}.dump(2) << '\n';
  return 0;
}

struct CoverArgs {
  std::string cloud;
  std::string spec = "disk";
  double alpha = 1.0;
  int dim = 2;
  int k = 1;
  double h = 0.01;
  std::string metric = "geodesic";
  double delta = -1.0;
  bool adaptive = false;
  std::string objective = "coverage";
};

int cmd_cover(const CoverArgs& a) {
  const covlab::ManifoldSpec spec = spec_from_name(a.spec, a.alpha, a.dim);
  std::ifstream in(a.cloud);
  if (!in) throw covlab::Error("cannot open cloud file '" + a.cloud + "'");
  const covlab::PointCloud cloud = covlab::read_cloud_csv(in, spec);
  const covlab::Metric metric = covlab::metric_from_string(a.metric);
  const covlab::RegionSpec region =
      a.delta >= 0.0 ? covlab::RegionSpec::interior_body(a.delta) : covlab::RegionSpec::all();
  covlab::validate_region(spec, region);
  covlab::ThresholdEstimate est;
  if (a.objective == "interior") {
    est = covlab::adaptive_threshold(spec, region, cloud, a.k, metric, a.h,
                                     covlab::Objective::Interior);
  } else if (a.objective != "coverage") {
    throw covlab::Error("unknown objective '" + a.objective + "'");
  } else if (a.adaptive) {
    est = covlab::adaptive_threshold(spec, region, cloud, a.k, metric, a.h);
  } else {
    est = covlab::coverage_threshold(cloud, covlab::build_grid(spec, region, a.h), a.k, metric);
  }
  std::cout << covlab::to_json(est).dump(2) << '\n';
  return 0;
}

struct RunArgs {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out = ".";
  std::optional<int> reps;
  std::optional<std::string> sizes;
  std::optional<std::string> metric;
};

int cmd_run(covlab::ExperimentMode mode, const RunArgs& a) {
  std::ifstream in(a.config);
  if (!in) throw covlab::Error("cannot open config '" + a.config + "'");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw covlab::Error(std::string("config parse: ") + e.what());
  }
  j["mode"] = covlab::to_string(mode);
  if (a.seed) j["seed"] = *a.seed;
  if (a.reps) j["replications"] = *a.reps;
  if (a.sizes) j["sizes"] = parse_sizes(*a.sizes);
  if (a.metric) j["metric"] = *a.metric;
  const covlab::ExperimentConfig config = covlab::config_from_json(j);

  const covlab::ExperimentResult result = covlab::run_experiment(config);

  std::filesystem::create_directories(a.out);
  const std::filesystem::path dir(a.out);
  std::ofstream rows(dir / "rows.csv");
  covlab::write_rows_csv(rows, result);
  std::ofstream summary(dir / "summary.json");
  summary << covlab::summary_json(result).dump(2) << '\n';
  if (!rows || !summary) throw covlab::Error("cannot write outputs to '" + a.out + "'");
  for (const covlab::SizeSummary& s : result.summary) {
    std::cerr << "size " << s.size << " k " << s.k << " h " << s.h;
    if (s.ks_lo) std::cerr << " ks_lo " << *s.ks_lo << " ks_hi " << *s.ks_hi;
    if (s.reference) std::cerr << " median " << s.median_lo << " reference " << *s.reference;
    std::cerr << '\n';
  }
  return 0;
}

int cmd_selftest() {
  const covlab::SelftestReport report = covlab::run_selftest(&std::cout);
  std::cout << report.passed() << " passed, " << report.failed() << " failed\n";
  return report.failed() == 0 ? 0 : 1;
}

void add_run_options(CLI::App* sub, RunArgs& a) {
  sub->add_option("--config", a.config, "experiment config JSON")->required();
  sub->add_option("--seed", a.seed, "base seed override");
  sub->add_option("--out", a.out, "output directory");
  sub->add_option("--reps", a.reps, "replication count override");
  sub->add_option("--sizes", a.sizes, "comma-separated sizes override");
  sub->add_option("--metric", a.metric, "geodesic|euclidean");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"covlab: k-coverage thresholds on manifolds"};
  app.require_subcommand(1);

  std::string d_range = "2..5", k_range = "1..4";
  CLI::App* constants = app.add_subcommand("constants", "print theta_d, c_d, c_{d,k}");
  constants->add_option("--d", d_range, "dimension range a..b");
  constants->add_option("--k", k_range, "k range a..b");

  CoverArgs cover_args;
  CLI::App* cover = app.add_subcommand("cover", "threshold of a point cloud file");
  cover->set_help_flag("--help", "print help");
  cover->add_option("--cloud", cover_args.cloud, "CSV with idx,x1..xm")->required();
  cover->add_option("--spec", cover_args.spec, "disk|square|ball|sphere|cap");
  cover->add_option("--alpha", cover_args.alpha, "cap polar angle");
  cover->add_option("--dim", cover_args.dim, "square dimension");
  cover->add_option("--k", cover_args.k, "coverage multiplicity");
  cover->add_option("--h", cover_args.h, "grid resolution");
  cover->add_option("--metric", cover_args.metric, "geodesic|euclidean");
  cover->add_option("--delta", cover_args.delta, "restrict B to the delta-interior");
  cover->add_flag("--adaptive", cover_args.adaptive, "branch-and-bound instead of a grid");
  cover->add_option("--objective", cover_args.objective, "coverage|interior");

  RunArgs weak_args, interior_args, slln_args;
  CLI::App* weak = app.add_subcommand("weak", "boundary weak-law experiment");
  add_run_options(weak, weak_args);
  CLI::App* interior = app.add_subcommand("interior", "interior weak-law experiment");
  add_run_options(interior, interior_args);
  CLI::App* slln = app.add_subcommand("slln", "strong-law trace");
  add_run_options(slln, slln_args);

  CLI::App* selftest = app.add_subcommand("selftest", "run invariant suites");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n' << kUsage;
    return 1;
  }

  try {
    if (*constants) return cmd_constants(d_range, k_range);
    if (*cover) return cmd_cover(cover_args);
    if (*weak) return cmd_run(covlab::ExperimentMode::WeakBoundary, weak_args);
    if (*interior) return cmd_run(covlab::ExperimentMode::WeakInterior, interior_args);
    if (*slln) return cmd_run(covlab::ExperimentMode::SllnTrace, slln_args);
    if (*selftest) return cmd_selftest();
  } catch (const covlab::Refusal& e) {
    std::cerr << "refused: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  std::cerr << kUsage;
  return 1;
}
