#include "covlab/knn_index.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace covlab {

namespace {
constexpr std::size_t kMaxBuckets = std::size_t{1} << 22;
}

KnnIndex::KnnIndex(const ManifoldSpec& spec, std::span<const Point> points, int k_hint)
    : spec_(spec), points_(points.begin(), points.end()) {
  axes_ = std::min(3, spec.ambient_dim());
  if (points_.empty()) {
    start_.assign(2, 0);
    return;
  }

  double lo[3], hi[3];
  for (int a = 0; a < axes_; ++a) {
    lo[a] = std::numeric_limits<double>::infinity();
    hi[a] = -lo[a];
  }
  for (const Point& p : points_) {
    for (int a = 0; a < axes_; ++a) {
      lo[a] = std::min(lo[a], p[a]);
      hi[a] = std::max(hi[a], p[a]);
    }
  }

  // Aim for a few points per bucket at the sample's intrinsic dimension.
  const double per_bucket = std::max(2.0, static_cast<double>(k_hint));
  const double n = static_cast<double>(points_.size());
  cell_ = std::pow(volume(spec) * per_bucket / n, 1.0 / spec.dim());
  cell_ = std::max(cell_, 1e-9);
  for (;;) {
    std::size_t total = 1;
    for (int a = 0; a < axes_; ++a) {
      extent_[a] = static_cast<int>(std::floor((hi[a] - lo[a]) / cell_)) + 1;
      total *= static_cast<std::size_t>(extent_[a]);
    }
    if (total <= kMaxBuckets) break;
    cell_ *= 1.5;
  }
  for (int a = 0; a < axes_; ++a) origin_[a] = lo[a];

  std::size_t buckets = 1;
  for (int a = 0; a < axes_; ++a) buckets *= static_cast<std::size_t>(extent_[a]);
  auto bucket_of = [&](const Point& p) {
    std::size_t id = 0;
    for (int a = axes_ - 1; a >= 0; --a) {
      int b = static_cast<int>(std::floor((p[a] - origin_[a]) / cell_));
      b = std::clamp(b, 0, extent_[a] - 1);
      id = id * static_cast<std::size_t>(extent_[a]) + static_cast<std::size_t>(b);
    }
    return id;
  };

  start_.assign(buckets + 1, 0);
  std::vector<std::size_t> ids(points_.size());
  for (std::size_t i = 0; i < points_.size(); ++i) {
    ids[i] = bucket_of(points_[i]);
    ++start_[ids[i] + 1];
  }
  for (std::size_t b = 0; b < buckets; ++b) start_[b + 1] += start_[b];
  order_.resize(points_.size());
  std::vector<std::uint32_t> fill(start_.begin(), start_.end() - 1);
  for (std::size_t i = 0; i < points_.size(); ++i) order_[fill[ids[i]]++] = static_cast<std::uint32_t>(i);
}

double KnnIndex::kth_distance(const Point& x, int k, Metric metric) const {
  if (k < 1) throw Error("knn: k must be at least 1");
  if (static_cast<std::size_t>(k) > points_.size())
    throw Error("knn: cloud has " + std::to_string(points_.size()) + " points, fewer than k = " +
                std::to_string(k));

  // Max-heap of the k smallest squared ambient distances, with their owners.
  std::vector<std::pair<double, std::uint32_t>> heap;
  heap.reserve(static_cast<std::size_t>(k) + 1);
  auto offer = [&](std::uint32_t idx) {
    const Point& p = points_[idx];
    double s = 0.0;
    for (int i = 0; i < x.dim(); ++i) {
      const double t = p[i] - x[i];
      s += t * t;
    }
    if (heap.size() < static_cast<std::size_t>(k)) {
      heap.emplace_back(s, idx);
      std::push_heap(heap.begin(), heap.end());
    } else if (std::make_pair(s, idx) < heap.front()) {
      std::pop_heap(heap.begin(), heap.end());
      heap.back() = {s, idx};
      std::push_heap(heap.begin(), heap.end());
    }
  };

  int home[3] = {0, 0, 0};
  int reach = 0;
  for (int a = 0; a < axes_; ++a) {
    const double f = std::floor((x[a] - origin_[a]) / cell_);
    home[a] = static_cast<int>(std::clamp(f, -1e9, 1e9));
    reach = std::max({reach, std::abs(home[a]), std::abs(home[a] - (extent_[a] - 1))});
  }

  auto visit = [&](int i0, int i1, int i2) {
    const int idx[3] = {i0, i1, i2};
    std::size_t id = 0;
    for (int a = axes_ - 1; a >= 0; --a) {
      if (idx[a] < 0 || idx[a] >= extent_[a]) return;
      id = id * static_cast<std::size_t>(extent_[a]) + static_cast<std::size_t>(idx[a]);
    }
    for (std::uint32_t j = start_[id]; j < start_[id + 1]; ++j) offer(order_[j]);
  };

  for (int ring = 0; ring <= reach; ++ring) {
    if (axes_ == 1) {
      visit(home[0] - ring, 0, 0);
      if (ring > 0) visit(home[0] + ring, 0, 0);
    } else if (axes_ == 2) {
      for (int dy = -ring; dy <= ring; ++dy) {
        if (std::abs(dy) == ring) {
          for (int dx = -ring; dx <= ring; ++dx) visit(home[0] + dx, home[1] + dy, 0);
        } else {
          visit(home[0] - ring, home[1] + dy, 0);
          visit(home[0] + ring, home[1] + dy, 0);
        }
      }
    } else {
      for (int dz = -ring; dz <= ring; ++dz) {
        for (int dy = -ring; dy <= ring; ++dy) {
          if (std::abs(dz) == ring || std::abs(dy) == ring) {
            for (int dx = -ring; dx <= ring; ++dx) visit(home[0] + dx, home[1] + dy, home[2] + dz);
          } else {
            visit(home[0] - ring, home[1] + dy, home[2] + dz);
            visit(home[0] + ring, home[1] + dy, home[2] + dz);
          }
        }
      }
    }
    // Unvisited points differ from x by at least ring * cell_ in some axis.
    if (heap.size() == static_cast<std::size_t>(k)) {
      const double bound = static_cast<double>(ring) * cell_;
      if (heap.front().first <= bound * bound) break;
    }
  }

  return dist(spec_, x, points_[heap.front().second], metric);
}

}  // namespace covlab
