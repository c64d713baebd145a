#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace qboost {

struct NeighborHit {
  std::size_t index = 0;  // position in the vectors handed to KdIndex
  double distance = 0.0;  // Manhattan distance to the query
  std::size_t visited = 0;  // nodes entered during the search
};

/// Balanced k-d tree under the L1 metric. Each node splits on the axis of
/// widest spread at the median point; every node keeps the bounding box of its
/// subtree so searches can prune on the box's L1 lower bound.
class KdIndex {
 public:
  /// Throws std::invalid_argument on an empty list or mixed widths.
  explicit KdIndex(const std::vector<std::vector<double>>& points);

  std::size_t size() const noexcept { return count_; }
  std::size_t dims() const noexcept { return dims_; }
  std::span<const double> point(std::size_t i) const { return {points_.data() + i * dims_, dims_}; }

  NeighborHit nearest(std::span<const double> query) const { return nearest_approx(query, 0.0); }

  /// Returned distance is within (1 + epsilon) of the exact nearest distance.
  /// A subtree is skipped once its lower bound times (1 + epsilon) reaches the
  /// best distance found so far.
  NeighborHit nearest_approx(std::span<const double> query, double epsilon) const;

  std::vector<NeighborHit> nearest_batch(std::span<const std::vector<double>> queries,
                                         double epsilon = 0.0) const;

 private:
  struct Node {
    std::size_t point = 0;
    std::size_t axis = 0;
    int left = -1;
    int right = -1;
  };

  int build(std::vector<std::size_t>& order, std::size_t begin, std::size_t end);
  double box_distance(int node, std::span<const double> query) const;
  void search(int node, std::span<const double> query, double slack, NeighborHit& best) const;

  std::size_t dims_ = 0;
  std::size_t count_ = 0;
  std::vector<double> points_;
  std::vector<Node> nodes_;
  std::vector<double> box_lo_;
  std::vector<double> box_hi_;
};

/// Relative sparsity bonus: distance / m clamped to [0, 1].
/// Throws std::invalid_argument unless m > 0 and distance >= 0.
double sparsity_delta(double distance, double max_distance);

/// True when sparsity_delta(distance, m) had to clamp.
inline bool delta_clamped(double distance, double max_distance) {
  return distance > max_distance;
}

}  // namespace qboost
