#pragma once

#include <cstdint>
#include <vector>

#include "covlab/manifold.hpp"
#include "covlab/sampling.hpp"

namespace covlab {

/// Finite node set in B with a certified covering radius: every point of B
/// lies within geodesic distance h of some node.
struct EvalGrid {
  std::vector<Point> nodes;
  double h = 0.0;
  ManifoldSpec spec = ManifoldSpec::unit_square();
  RegionSpec region;
};

/// Interval [lo, hi] known to contain a coverage threshold.
struct ThresholdEstimate {
  double lo = 0.0;
  double hi = 0.0;
  Metric metric = Metric::Geodesic;
  int k = 1;
  double h = 0.0;
  Point argmax;
};

inline constexpr std::size_t kDefaultNodeCap = 4'000'000;

/// Structured grid over B: vertex lattice for boxes, concentric rings for
/// disk, cap and sphere, projected lattice for everything else. Grids for
/// h and h/10 are nested on the square, disk and cap.
EvalGrid build_grid(const ManifoldSpec& spec, const RegionSpec& region, double h,
                    std::size_t max_nodes = kDefaultNodeCap);

/// k-th smallest distance from x to the cloud by full scan.
double knn_distance(const ManifoldSpec& spec, const Point& x, const PointCloud& cloud, int k,
                    Metric metric);

/// lo = max over grid nodes of the k-NN distance, hi = lo + h. The k-NN
/// distance is 1-Lipschitz in the geodesic metric, so the threshold lies in
/// [lo, hi].
ThresholdEstimate coverage_threshold(const PointCloud& cloud, const EvalGrid& grid, int k,
                                     Metric metric);

/// Threshold for covering B intersected with A^(r) at radius r, found by
/// bisection on the grid predicate "every node with boundary distance > r
/// has k-NN distance <= r". The interval has width <= tol + h.
ThresholdEstimate interior_threshold(const PointCloud& cloud, const ManifoldSpec& spec,
                                     const RegionSpec& region, int k, Metric metric, double h,
                                     double tol);

/// Indices of grid nodes with at least k cloud points within distance r.
std::vector<std::size_t> covered_region(const PointCloud& cloud, const EvalGrid& grid, int k,
                                        double r, Metric metric);

/// Greedy lower bound for the packing number: the count of disjoint closed
/// geodesic radius-r balls centred in B with mu-measure at most a.
std::size_t packing_estimate(const ManifoldSpec& spec, const RegionSpec& region, double r,
                             double a, const DensitySpec& dens, std::uint64_t seed = 1);

/// Greedy upper bound for the covering number of a finite point set by
/// geodesic radius-r balls centred on set points.
std::size_t covering_estimate(const ManifoldSpec& spec, const std::vector<Point>& setpoints,
                              double r);

/// Which Lipschitz field adaptive_threshold maximizes over B.
enum class Objective {
  Coverage,  // k-NN distance
  Interior,  // min(k-NN distance, distance to the boundary)
};

struct AdaptiveStats {
  std::size_t evaluations = 0;
  std::size_t root_cells = 0;
};

/// Branch-and-bound maximization of the objective over B. Cells carry a
/// certified radius rho around their centre c; a cell is split while
/// field(c) + rho exceeds the best value seen at a point of B by more than h.
/// Returns an interval with hi - lo <= h containing the threshold.
ThresholdEstimate adaptive_threshold(const ManifoldSpec& spec, const RegionSpec& region,
                                     const PointCloud& cloud, int k, Metric metric, double h,
                                     Objective objective = Objective::Coverage,
                                     AdaptiveStats* stats = nullptr,
                                     std::size_t max_evaluations = 40'000'000);

}  // namespace covlab
