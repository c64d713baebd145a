#include "qboost/neighbors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "qboost/parallel.hpp"

namespace qboost {

KdIndex::KdIndex(const std::vector<std::vector<double>>& points) {
  if (points.empty()) throw std::invalid_argument("KdIndex: cannot index an empty set");
  dims_ = points.front().size();
  count_ = points.size();
  points_.reserve(count_ * dims_);
  for (const auto& p : points) {
    if (p.size() != dims_) throw std::invalid_argument("KdIndex: vectors differ in length");
    points_.insert(points_.end(), p.begin(), p.end());
  }
  nodes_.reserve(count_);
  box_lo_.reserve(count_ * dims_);
  box_hi_.reserve(count_ * dims_);
  std::vector<std::size_t> order(count_);
  std::iota(order.begin(), order.end(), 0);
  build(order, 0, count_);
}

int KdIndex::build(std::vector<std::size_t>& order, std::size_t begin, std::size_t end) {
  if (begin >= end) return -1;
  const int id = static_cast<int>(nodes_.size());
  nodes_.emplace_back();
  const std::size_t box = box_lo_.size();
  box_lo_.resize(box + dims_, std::numeric_limits<double>::infinity());
  box_hi_.resize(box + dims_, -std::numeric_limits<double>::infinity());
  for (std::size_t i = begin; i < end; ++i) {
    const auto p = point(order[i]);
    for (std::size_t d = 0; d < dims_; ++d) {
      box_lo_[box + d] = std::min(box_lo_[box + d], p[d]);
      box_hi_[box + d] = std::max(box_hi_[box + d], p[d]);
    }
  }
  std::size_t axis = 0;
  double widest = -1.0;
  for (std::size_t d = 0; d < dims_; ++d) {
    const double spread = box_hi_[box + d] - box_lo_[box + d];
    if (spread > widest) {
      widest = spread;
      axis = d;
    }
  }
  // Lower median; points equal to the pivot that sort before it stay left.
  const std::size_t mid = begin + (end - begin - 1) / 2;
  std::nth_element(order.begin() + static_cast<std::ptrdiff_t>(begin),
                   order.begin() + static_cast<std::ptrdiff_t>(mid),
                   order.begin() + static_cast<std::ptrdiff_t>(end),
                   [&](std::size_t a, std::size_t b) {
                     const double xa = points_[a * dims_ + axis];
                     const double xb = points_[b * dims_ + axis];
                     return xa < xb || (xa == xb && a < b);
                   });
  nodes_[id].point = order[mid];
  nodes_[id].axis = axis;
  const int left = build(order, begin, mid);
  const int right = build(order, mid + 1, end);
  nodes_[id].left = left;
  nodes_[id].right = right;
  return id;
}

double KdIndex::box_distance(int node, std::span<const double> query) const {
  const std::size_t box = static_cast<std::size_t>(node) * dims_;
  double total = 0.0;
  for (std::size_t d = 0; d < dims_; ++d) {
    const double q = query[d];
    if (q < box_lo_[box + d]) {
      total += box_lo_[box + d] - q;
    } else if (q > box_hi_[box + d]) {
      total += q - box_hi_[box + d];
    }
  }
  return total;
}

void KdIndex::search(int node, std::span<const double> query, double slack,
                     NeighborHit& best) const {
  if (node < 0) return;
  if (box_distance(node, query) * slack >= best.distance) return;
  ++best.visited;
  const Node& n = nodes_[static_cast<std::size_t>(node)];
  const auto p = point(n.point);
  double d = 0.0;
  for (std::size_t i = 0; i < dims_; ++i) d += std::abs(p[i] - query[i]);
  if (d < best.distance) {
    best.distance = d;
    best.index = n.point;
  }
  const bool go_left = query[n.axis] <= p[n.axis];
  search(go_left ? n.left : n.right, query, slack, best);
  search(go_left ? n.right : n.left, query, slack, best);
}

NeighborHit KdIndex::nearest_approx(std::span<const double> query, double epsilon) const {
  if (query.size() != dims_) throw std::invalid_argument("KdIndex: query dimension mismatch");
  if (!(epsilon >= 0.0)) throw std::invalid_argument("KdIndex: epsilon must be non-negative");
  NeighborHit best;
  best.distance = std::numeric_limits<double>::infinity();
  search(0, query, 1.0 + epsilon, best);
  return best;
}

std::vector<NeighborHit> KdIndex::nearest_batch(std::span<const std::vector<double>> queries,
                                                double epsilon) const {
  for (const auto& q : queries) {
    if (q.size() != dims_) throw std::invalid_argument("KdIndex: query dimension mismatch");
  }
  std::vector<NeighborHit> out(queries.size());
  parallel_chunks(queries.size(), 1024, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) out[i] = nearest_approx(queries[i], epsilon);
  });
  return out;
}

double sparsity_delta(double distance, double max_distance) {
  if (!(max_distance > 0.0)) throw std::invalid_argument("sparsity_delta: m must be positive");
  if (!(distance >= 0.0)) throw std::invalid_argument("sparsity_delta: negative distance");
  return std::min(distance / max_distance, 1.0);
}

}  // namespace qboost
