#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace qboost {

/// Row-major training matrix with one target per row.
class Dataset {
 public:
  explicit Dataset(std::size_t dims = 0) : dims_(dims) {}

  void add(std::span<const double> features, double target) {
    if (features.size() != dims_) throw std::invalid_argument("Dataset: row width mismatch");
    features_.insert(features_.end(), features.begin(), features.end());
    targets_.push_back(target);
  }

  std::size_t size() const noexcept { return targets_.size(); }
  std::size_t dims() const noexcept { return dims_; }
  bool empty() const noexcept { return targets_.empty(); }

  std::span<const double> row(std::size_t i) const {
    return {features_.data() + i * dims_, dims_};
  }
  double feature(std::size_t i, std::size_t j) const { return features_[i * dims_ + j]; }
  double target(std::size_t i) const { return targets_[i]; }
  const std::vector<double>& targets() const noexcept { return targets_; }

 private:
  std::size_t dims_;
  std::vector<double> features_;
  std::vector<double> targets_;
};

}  // namespace qboost
