#include "covlab/coverage.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>

#include "covlab/knn_index.hpp"
#include "covlab/parallel.hpp"

namespace covlab {

namespace {

constexpr double kPi = std::numbers::pi;
// Covering radius of a ring grid with radial step 1 and 7j nodes on ring j:
// half a step radially plus the chord pi/7 along the ring.
constexpr double kRingCover = 0.5 + kPi / 7.0;

// Smallest member of {1..9} x 10^j that is >= x. Scaling x by 10 scales the
// result by 10, which makes grids for h and h/10 nested.
std::size_t nice_ceil(double x) {
  if (x <= 1.0) return 1;
  double scale = 1.0;
  while (x > 9.0 * scale) scale *= 10.0;
  const double mant = std::ceil(x / scale - 1e-9);
  return static_cast<std::size_t>(std::max(1.0, mant) * scale);
}

[[noreturn]] void node_cap_error(double required, std::size_t cap) {
  std::ostringstream msg;
  msg << "build_grid: about " << static_cast<long long>(required) << " nodes required, cap is "
      << cap;
  throw Error(msg.str());
}

void lattice(int d, const double* lo, const double* hi, std::size_t per_axis,
             const std::function<void(const Point&)>& emit) {
  std::vector<std::size_t> idx(static_cast<std::size_t>(d), 0);
  Point x = Point::zeros(d);
  for (;;) {
    for (int a = 0; a < d; ++a) {
      const double t = static_cast<double>(idx[static_cast<std::size_t>(a)]) /
                       static_cast<double>(per_axis - 1);
      x[a] = per_axis == 1 ? 0.5 * (lo[a] + hi[a]) : lo[a] + t * (hi[a] - lo[a]);
    }
    emit(x);
    int a = 0;
    while (a < d && ++idx[static_cast<std::size_t>(a)] == per_axis) {
      idx[static_cast<std::size_t>(a)] = 0;
      ++a;
    }
    if (a == d) break;
  }
}

// Concentric rings around `axis` out to geodesic radius `reach`. Flat rings
// when `spherical` is false (axis ignored, centre at origin).
void rings(bool spherical, const Point& axis, double reach, double h, std::size_t cap,
           std::vector<Point>& out, double& certified) {
  const std::size_t count = nice_ceil(reach * kRingCover / h);
  const double step = reach / static_cast<double>(count);
  certified = step * kRingCover;
  const double approx = 3.5 * static_cast<double>(count) * static_cast<double>(count + 1) + 1;
  if (approx > static_cast<double>(cap)) node_cap_error(approx, cap);

  // Orthonormal frame (e1, e2, axis) for the spherical case.
  Point e1, e2;
  if (spherical) {
    e1 = std::fabs(axis[2]) < 0.9 ? Point{0.0, 0.0, 1.0} : Point{1.0, 0.0, 0.0};
    const double c = dot(e1, axis);
    for (int i = 0; i < 3; ++i) e1[i] -= c * axis[i];
    e1 = scaled(e1, 1.0 / norm(e1));
    e2 = Point{axis[1] * e1[2] - axis[2] * e1[1], axis[2] * e1[0] - axis[0] * e1[2],
               axis[0] * e1[1] - axis[1] * e1[0]};
  }

  for (std::size_t j = 0; j <= count; ++j) {
    const double rad = step * static_cast<double>(j);
    const bool degenerate = j == 0 || (spherical && std::sin(rad) < 1e-12);
    const std::size_t nodes = degenerate ? 1 : 7 * j;
    for (std::size_t i = 0; i < nodes; ++i) {
      const double phi = 2.0 * kPi * static_cast<double>(i) / static_cast<double>(nodes);
      if (!spherical) {
        out.push_back(Point{rad * std::cos(phi), rad * std::sin(phi)});
      } else {
        const double s = std::sin(rad), c = std::cos(rad);
        Point p = Point::zeros(3);
        for (int a = 0; a < 3; ++a)
          p[a] = c * axis[a] + s * (std::cos(phi) * e1[a] + std::sin(phi) * e2[a]);
        out.push_back(p);
      }
    }
  }
}

struct Box {
  double lo[kMaxDim];
  double hi[kMaxDim];
};

Box region_bbox(const ManifoldSpec& spec, const RegionSpec& region) {
  Box b{};
  const int d = spec.ambient_dim();
  double inset = region.kind == RegionSpec::Kind::InteriorBody ? region.delta : 0.0;
  for (int a = 0; a < d; ++a) {
    if (spec.family() == Family::UnitSquare) {
      b.lo[a] = inset;
      b.hi[a] = 1.0 - inset;
    } else {
      b.lo[a] = -(1.0 - inset);
      b.hi[a] = 1.0 - inset;
    }
    if (region.kind == RegionSpec::Kind::GeodesicBall) {
      b.lo[a] = std::max(b.lo[a], region.center[a] - region.radius);
      b.hi[a] = std::min(b.hi[a], region.center[a] + region.radius);
    }
  }
  return b;
}

bool is_box_region(const ManifoldSpec& spec, const RegionSpec& region) {
  return spec.family() == Family::UnitSquare && region.kind != RegionSpec::Kind::GeodesicBall;
}

}  // namespace

EvalGrid build_grid(const ManifoldSpec& spec, const RegionSpec& region, double h,
                    std::size_t max_nodes) {
  if (!(h > 0.0)) throw Error("build_grid: h must be positive");
  validate_region(spec, region);
  EvalGrid grid;
  grid.spec = spec;
  grid.region = region;

  const Family fam = spec.family();
  const bool ball_region = region.kind == RegionSpec::Kind::GeodesicBall;
  const double delta = region.kind == RegionSpec::Kind::InteriorBody ? region.delta : 0.0;

  if (is_box_region(spec, region) || (!spec.is_spherical() && fam != Family::UnitDisk) ||
      (fam == Family::UnitDisk && ball_region)) {
    // Vertex lattice; outside vertices are projected onto B, which keeps
    // the covering radius because projection onto a convex set is 1-Lipschitz.
    const int d = spec.ambient_dim();
    const Box box = region_bbox(spec, region);
    double longest = 0.0;
    for (int a = 0; a < d; ++a) longest = std::max(longest, box.hi[a] - box.lo[a]);
    const double spacing = 2.0 * h / std::sqrt(static_cast<double>(d));
    const std::size_t cells = nice_ceil(longest / spacing);
    const double required = std::pow(static_cast<double>(cells + 1), d);
    if (required > static_cast<double>(max_nodes)) node_cap_error(required, max_nodes);
    // Lattice spacing is the same on every axis.
    const double step = longest / static_cast<double>(cells);
    Box lat = box;
    std::size_t per_axis = cells + 1;
    for (int a = 0; a < d; ++a) {
      const double mid = 0.5 * (box.lo[a] + box.hi[a]);
      lat.lo[a] = mid - 0.5 * longest;
      lat.hi[a] = mid + 0.5 * longest;
    }
    grid.h = step * std::sqrt(static_cast<double>(d)) / 2.0;
    const bool exact_box = is_box_region(spec, region);
    lattice(d, lat.lo, lat.hi, per_axis, [&](const Point& v) {
      if (exact_box) {
        grid.nodes.push_back(v);
        return;
      }
      const Point p = project_to_region(spec, region, v);
      if (euclidean_distance(p, v) <= grid.h) grid.nodes.push_back(p);
    });
    return grid;
  }

  if (fam == Family::UnitDisk) {
    rings(false, Point{}, 1.0 - delta, h, max_nodes, grid.nodes, grid.h);
    return grid;
  }

  // Spherical families: rings around the pole or around the ball centre.
  static const Point pole{0.0, 0.0, 1.0};
  if (!ball_region) {
    const double reach = spec.family() == Family::UnitSphere ? kPi : spec.cap_angle() - delta;
    rings(true, pole, reach, h, max_nodes, grid.nodes, grid.h);
    return grid;
  }
  const Point& c = region.center;
  if (fam == Family::UnitSphere || interior_margin(spec, c) >= region.radius) {
    rings(true, scaled(c, 1.0 / norm(c)), std::min(region.radius, kPi), h, max_nodes,
          grid.nodes, grid.h);
    return grid;
  }
  if (euclidean_distance(c, pole) < 1e-12) {
    rings(true, pole, std::min(region.radius, spec.cap_angle()), h, max_nodes, grid.nodes,
          grid.h);
    return grid;
  }
  throw Error("build_grid: geodesic ball crossing the cap boundary is unsupported");
}

double knn_distance(const ManifoldSpec& spec, const Point& x, const PointCloud& cloud, int k,
                    Metric metric) {
  if (k < 1) throw Error("knn_distance: k must be at least 1");
  if (cloud.size() < static_cast<std::size_t>(k))
    throw Error("knn_distance: cloud has fewer than k points");
  std::vector<double> d;
  d.reserve(cloud.size());
  for (const Point& p : cloud.points) d.push_back(dist(spec, x, p, metric));
  auto kth = d.begin() + (k - 1);
  std::nth_element(d.begin(), kth, d.end());
  return *kth;
}

ThresholdEstimate coverage_threshold(const PointCloud& cloud, const EvalGrid& grid, int k,
                                     Metric metric) {
  if (grid.nodes.empty()) throw Error("coverage_threshold: empty grid");
  const KnnIndex index(grid.spec, cloud.points, k);
  std::vector<double> values(grid.nodes.size());
  parallel_for(grid.nodes.size(),
               [&](std::size_t i) { values[i] = index.kth_distance(grid.nodes[i], k, metric); });
  const auto best = std::max_element(values.begin(), values.end());
  ThresholdEstimate est;
  est.lo = *best;
  est.hi = est.lo + grid.h;
  est.metric = metric;
  est.k = k;
  est.h = grid.h;
  est.argmax = grid.nodes[static_cast<std::size_t>(best - values.begin())];
  return est;
}

ThresholdEstimate interior_threshold(const PointCloud& cloud, const ManifoldSpec& spec,
                                     const RegionSpec& region, int k, Metric metric, double h,
                                     double tol) {
  if (!(tol > 0.0)) throw Error("interior_threshold: tol must be positive");
  const EvalGrid grid = build_grid(spec, region, h);
  const KnnIndex index(spec, cloud.points, k);
  const std::size_t n = grid.nodes.size();
  std::vector<double> knn(n), margin(n);
  parallel_for(n, [&](std::size_t i) {
    knn[i] = index.kth_distance(grid.nodes[i], k, metric);
    margin[i] = interior_margin(spec, grid.nodes[i]);
  });

  // Returns the first node violating the predicate at r, or n if none.
  auto violator = [&](double r) {
    for (std::size_t i = 0; i < n; ++i)
      if (margin[i] > r && knn[i] > r) return i;
    return n;
  };

  double lo = 0.0;
  double hi = diameter(spec);
  if (violator(hi) != n) throw Error("interior_threshold: predicate false at diam(A)");
  std::size_t witness = 0;
  if (violator(0.0) == n) {
    hi = 0.0;
  } else {
    witness = violator(0.0);
    while (hi - lo > tol) {
      const double mid = 0.5 * (lo + hi);
      const std::size_t v = violator(mid);
      if (v == n) {
        hi = mid;
      } else {
        lo = mid;
        witness = v;
      }
    }
  }

  ThresholdEstimate est;
  est.lo = lo;
  est.hi = hi + grid.h;
  est.metric = metric;
  est.k = k;
  est.h = grid.h;
  est.argmax = grid.nodes[witness];
  return est;
}

std::vector<std::size_t> covered_region(const PointCloud& cloud, const EvalGrid& grid, int k,
                                        double r, Metric metric) {
  std::vector<std::size_t> out;
  if (k < 1 || cloud.size() < static_cast<std::size_t>(k)) return out;
  const KnnIndex index(grid.spec, cloud.points, k);
  for (std::size_t i = 0; i < grid.nodes.size(); ++i)
    if (index.kth_distance(grid.nodes[i], k, metric) <= r) out.push_back(i);
  return out;
}

std::size_t packing_estimate(const ManifoldSpec& spec, const RegionSpec& region, double r,
                             double a, const DensitySpec& dens, std::uint64_t seed) {
  if (!(r > 0.0) || !(a > 0.0)) throw Error("packing_estimate: r and a must be positive");
  const EvalGrid candidates = build_grid(spec, region, r / 4.0);

  // Monte Carlo reference sample for balls that meet the boundary.
  constexpr std::size_t kMc = 10000;
  const PointCloud mc = uniform_sample(spec, kMc, derive_seed(seed, 0x9ac));
  const double vol = volume(spec);

  const double exact_ball =
      spec.is_spherical() ? 2.0 * kPi * (1.0 - std::cos(std::min(r, kPi)))
                          : std::pow(kPi, spec.dim() / 2.0) / std::tgamma(1.0 + spec.dim() / 2.0) *
                                std::pow(r, spec.dim());

  auto measure_ok = [&](const Point& x) {
    if (dens.is_uniform() && interior_margin(spec, x) >= r)
      return exact_ball / vol <= a * (1.0 + 1e-12);
    double sum = 0.0, sum2 = 0.0;
    std::size_t hits = 0;
    for (const Point& y : mc.points) {
      if (dist(spec, x, y, Metric::Geodesic) <= r) {
        const double w = vol * dens(spec, y);
        sum += w;
        sum2 += w * w;
        ++hits;
      }
    }
    const double nn = static_cast<double>(kMc);
    const double mean = sum / nn;
    const double var = std::max(0.0, sum2 / nn - mean * mean);
    double margin = 2.0 * std::sqrt(var / nn);
    if (hits == 0) margin = 3.0 * vol * dens.sup_bound(spec) / nn;
    return mean + margin <= a;
  };

  std::vector<Point> accepted;
  for (const Point& x : candidates.nodes) {
    bool disjoint = true;
    for (const Point& y : accepted) {
      if (dist(spec, x, y, Metric::Geodesic) <= 2.0 * r) {
        disjoint = false;
        break;
      }
    }
    if (disjoint && measure_ok(x)) accepted.push_back(x);
  }
  return accepted.size();
}

std::size_t covering_estimate(const ManifoldSpec& spec, const std::vector<Point>& setpoints,
                              double r) {
  if (!(r > 0.0)) throw Error("covering_estimate: r must be positive");
  const std::size_t n = setpoints.size();
  if (n == 0) return 0;

  // Neighbour lists within r; the first coordinate gap bounds the distance.
  std::vector<std::size_t> by_x(n);
  for (std::size_t i = 0; i < n; ++i) by_x[i] = i;
  std::sort(by_x.begin(), by_x.end(),
            [&](std::size_t a, std::size_t b) { return setpoints[a][0] < setpoints[b][0]; });
  std::vector<std::vector<std::size_t>> nbrs(n);
  for (std::size_t ai = 0; ai < n; ++ai) {
    const std::size_t i = by_x[ai];
    for (std::size_t bi = ai; bi < n; ++bi) {
      const std::size_t j = by_x[bi];
      if (setpoints[j][0] - setpoints[i][0] > r) break;
      if (dist(spec, setpoints[i], setpoints[j], Metric::Geodesic) <= r) {
        nbrs[i].push_back(j);
        if (j != i) nbrs[j].push_back(i);
      }
    }
  }
  for (auto& list : nbrs) std::sort(list.begin(), list.end());

  std::vector<char> covered(n, 0);
  std::size_t balls = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (covered[i]) continue;
    // Centre the ball at the neighbour of i that covers the most new points.
    std::size_t best = i, best_gain = 0;
    for (std::size_t c : nbrs[i]) {
      std::size_t gain = 0;
      for (std::size_t j : nbrs[c]) gain += covered[j] ? 0 : 1;
      if (gain > best_gain) {
        best_gain = gain;
        best = c;
      }
    }
    for (std::size_t j : nbrs[best]) covered[j] = 1;
    ++balls;
  }
  return balls;
}

}  // namespace covlab
