#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "covlab/manifold.hpp"

namespace covlab {

/// Uniform bucket grid over the ambient coordinates of a point set,
/// answering exact k-th nearest neighbour distances.
///
/// Candidates are ranked by ambient Euclidean distance; on the sphere the
/// geodesic distance is a monotone function of the chord, so the same
/// ranking serves both metrics. Only the first three coordinates are
/// bucketed.
class KnnIndex {
 public:
  KnnIndex(const ManifoldSpec& spec, std::span<const Point> points, int k_hint = 1);

  std::size_t size() const { return points_.size(); }

  /// k-th smallest distance from x to the indexed points under `metric`.
  /// Throws Error when k is out of range.
  double kth_distance(const Point& x, int k, Metric metric) const;

 private:
  ManifoldSpec spec_;
  std::vector<Point> points_;
  int axes_ = 0;
  double cell_ = 1.0;
  double origin_[3] = {0, 0, 0};
  int extent_[3] = {1, 1, 1};
  std::vector<std::uint32_t> start_;  // CSR offsets, one per bucket plus one
  std::vector<std::uint32_t> order_;  // point indices grouped by bucket
};

}  // namespace covlab
