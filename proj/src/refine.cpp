// Certified maximization of a 1-Lipschitz field over B.
//
// Flat families are tiled by axis-aligned cubes; spherical families by the
// six faces of the cube-sphere, each split in gnomonic coordinates so cell
// edges are great-circle arcs. A cell is a convex set with centre c and
// radius rho (largest distance from c to the cell, attained at a vertex).
// For any 1-Lipschitz field phi, sup over the cell of phi <= phi(c) + rho.
// The projection p of c onto B gives a feasible value phi(p), and a cell
// with dist(c, B) > rho cannot meet B.

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>

#include "covlab/coverage.hpp"
#include "covlab/knn_index.hpp"

namespace covlab {

namespace {

struct Cell {
  std::array<double, kMaxDim> lo;  // lower corner (flat) or (u, v) (sphere)
  double size;
  int face;  // -1 for flat cells
  double upper;
};

struct ByUpper {
  bool operator()(const Cell& a, const Cell& b) const { return a.upper < b.upper; }
};

Point face_point(int face, double u, double v) {
  const int axis = face / 2;
  const double sign = (face % 2 == 0) ? 1.0 : -1.0;
  Point p = Point::zeros(3);
  p[axis] = sign;
  p[(axis + 1) % 3] = u;
  p[(axis + 2) % 3] = v;
  return scaled(p, 1.0 / norm(p));
}

double great_circle(const Point& a, const Point& b) {
  const Point c{a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
  return std::atan2(norm(c), dot(a, b));
}

class Maximizer {
 public:
  Maximizer(const ManifoldSpec& spec, const RegionSpec& region, const PointCloud& cloud, int k,
            Metric metric, double h, Objective objective, std::size_t budget)
      : spec_(spec),
        region_(region),
        index_(spec, cloud.points, k),
        k_(k),
        metric_(metric),
        h_(h),
        objective_(objective),
        budget_(budget) {}

  ThresholdEstimate run(AdaptiveStats* stats) {
    seed_roots();
    if (stats) stats->root_cells = roots_;
    while (!queue_.empty() && queue_.top().upper > best_ + h_) {
      const Cell cell = queue_.top();
      queue_.pop();
      split(cell);
    }
    if (best_ == -std::numeric_limits<double>::infinity())
      throw Error("adaptive_threshold: region contains no evaluable point");
    double hi = std::max(best_, dropped_upper_);
    if (!queue_.empty()) hi = std::max(hi, queue_.top().upper);
    if (stats) stats->evaluations = evaluations_;

    ThresholdEstimate est;
    est.lo = best_;
    est.hi = hi;
    est.metric = metric_;
    est.k = k_;
    est.h = h_;
    est.argmax = argmax_;
    return est;
  }

 private:
  double field(const Point& x) {
    if (++evaluations_ > budget_) {
      std::ostringstream msg;
      msg << "adaptive_threshold: evaluation budget " << budget_ << " exhausted";
      throw Error(msg.str());
    }
    const double g = index_.kth_distance(x, k_, metric_);
    if (objective_ == Objective::Coverage) return g;
    return std::min(g, interior_margin(spec_, x));
  }

  Point center_of(const Cell& c) const {
    if (c.face >= 0) return face_point(c.face, c.lo[0] + 0.5 * c.size, c.lo[1] + 0.5 * c.size);
    Point p = Point::zeros(spec_.ambient_dim());
    for (int a = 0; a < p.dim(); ++a) p[a] = c.lo[static_cast<std::size_t>(a)] + 0.5 * c.size;
    return p;
  }

  double radius_of(const Cell& c, const Point& center) const {
    if (c.face < 0) return 0.5 * c.size * std::sqrt(static_cast<double>(spec_.ambient_dim()));
    double r = 0.0;
    for (int i = 0; i < 4; ++i) {
      const double u = c.lo[0] + (i & 1 ? c.size : 0.0);
      const double v = c.lo[1] + (i & 2 ? c.size : 0.0);
      r = std::max(r, great_circle(center, face_point(c.face, u, v)));
    }
    return r;
  }

  void consider(Cell cell) {
    const Point c = center_of(cell);
    const double rho = radius_of(cell, c);
    const Point p = project_to_region(spec_, region_, c);
    const double gap = dist(spec_, c, p, Metric::Geodesic);
    if (gap > rho * (1.0 + 1e-12) + 1e-12) return;

    const double at_p = field(p);
    if (at_p > best_) {
      best_ = at_p;
      argmax_ = p;
    }
    const double at_c = gap == 0.0 ? at_p : field(c);
    cell.upper = std::min(at_c + rho, at_p + gap + rho);
    if (cell.upper <= best_ + h_) {
      dropped_upper_ = std::max(dropped_upper_, cell.upper);
      return;
    }
    queue_.push(cell);
  }

  void split(const Cell& cell) {
    const double half = 0.5 * cell.size;
    const int axes = cell.face >= 0 ? 2 : spec_.ambient_dim();
    for (int mask = 0; mask < (1 << axes); ++mask) {
      Cell child = cell;
      child.size = half;
      for (int a = 0; a < axes; ++a)
        if (mask & (1 << a)) child.lo[static_cast<std::size_t>(a)] += half;
      consider(child);
    }
  }

  void seed_roots() {
    const double n = static_cast<double>(index_.size());
    const double target = std::clamp(4.0 * n, 64.0, 1048576.0);
    if (spec_.is_spherical()) {
      const int per_face = std::max(1, static_cast<int>(std::ceil(std::sqrt(target / 6.0))));
      const double size = 2.0 / per_face;
      for (int face = 0; face < 6; ++face)
        for (int i = 0; i < per_face; ++i)
          for (int j = 0; j < per_face; ++j) {
            Cell c{};
            c.face = face;
            c.size = size;
            c.lo[0] = -1.0 + i * size;
            c.lo[1] = -1.0 + j * size;
            ++roots_;
            consider(c);
          }
      return;
    }

    const int d = spec_.ambient_dim();
    double lo[kMaxDim], hi[kMaxDim];
    for (int a = 0; a < d; ++a) {
      if (spec_.family() == Family::UnitSquare) {
        lo[a] = 0.0;
        hi[a] = 1.0;
      } else {
        lo[a] = -1.0;
        hi[a] = 1.0;
      }
      if (region_.kind == RegionSpec::Kind::GeodesicBall) {
        lo[a] = std::max(lo[a], region_.center[a] - region_.radius);
        hi[a] = std::min(hi[a], region_.center[a] + region_.radius);
      }
    }
    double box_volume = 1.0;
    for (int a = 0; a < d; ++a) box_volume *= std::max(hi[a] - lo[a], 1e-12);
    const double size = std::pow(box_volume / target, 1.0 / d);
    int counts[kMaxDim];
    for (int a = 0; a < d; ++a)
      counts[a] = std::max(1, static_cast<int>(std::ceil((hi[a] - lo[a]) / size)));

    std::array<int, kMaxDim> idx{};
    for (;;) {
      Cell c{};
      c.face = -1;
      c.size = size;
      for (int a = 0; a < d; ++a) c.lo[static_cast<std::size_t>(a)] = lo[a] + idx[static_cast<std::size_t>(a)] * size;
      ++roots_;
      consider(c);
      int a = 0;
      while (a < d && ++idx[static_cast<std::size_t>(a)] == counts[a]) {
        idx[static_cast<std::size_t>(a)] = 0;
        ++a;
      }
      if (a == d) break;
    }
  }

  const ManifoldSpec& spec_;
  const RegionSpec& region_;
  KnnIndex index_;
  int k_;
  Metric metric_;
  double h_;
  Objective objective_;
  std::size_t budget_;

  std::priority_queue<Cell, std::vector<Cell>, ByUpper> queue_;
  double best_ = -std::numeric_limits<double>::infinity();
  double dropped_upper_ = -std::numeric_limits<double>::infinity();
  Point argmax_;
  std::size_t evaluations_ = 0;
  std::size_t roots_ = 0;
};

}  // namespace

ThresholdEstimate adaptive_threshold(const ManifoldSpec& spec, const RegionSpec& region,
                                     const PointCloud& cloud, int k, Metric metric, double h,
                                     Objective objective, AdaptiveStats* stats,
                                     std::size_t max_evaluations) {
  if (!(h > 0.0)) throw Error("adaptive_threshold: h must be positive");
  validate_region(spec, region);
  if (k < 1 || cloud.size() < static_cast<std::size_t>(k))
    throw Error("adaptive_threshold: cloud has fewer than k points");
  Maximizer m(spec, region, cloud, k, metric, h, objective, max_evaluations);
  return m.run(stats);
}

}  // namespace covlab
