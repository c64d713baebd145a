#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "qboost/dataset.hpp"

namespace qboost {

/// Thrown when a surrogate is asked to fit fewer rows than it needs.
class InsufficientData : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Asymmetric absolute error: weight p above the estimate, 1 - p at or below.
double pinball_loss(double quantile, double y, double estimate);

/// Negative subgradient of pinball_loss with respect to the estimate:
/// p for y above the estimate, p - 1 below it, 0 on the kink.
double pinball_negative_gradient(double quantile, double y, double estimate);

/// Lower order statistic at rank ceil(p * n). `values` is reordered.
double empirical_quantile(std::span<double> values, double quantile);

struct GbqrParams {
  double quantile = 0.90;
  int n_iterations = 100;
  int max_leaves = 8;
  double learning_rate = 0.1;
  int min_samples_leaf = 1;
};

/// Binary regression tree stored as a flat node array; node 0 is the root.
class RegressionTree {
 public:
  struct Node {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0.0;  // rows with x[feature] <= threshold go left
    int left = -1;
    int right = -1;
    double value = 0.0;
    int samples = 0;
  };

  RegressionTree() = default;
  explicit RegressionTree(std::vector<Node> nodes) : nodes_(std::move(nodes)) {}

  const std::vector<Node>& nodes() const noexcept { return nodes_; }
  int leaf_index(std::span<const double> x) const;
  double predict(std::span<const double> x) const { return nodes_[leaf_index(x)].value; }
  std::size_t leaf_count() const;

 private:
  std::vector<Node> nodes_;
};

/// Gradient-boosted quantile regressor. Each stage fits a least-squares tree
/// to the pinball negative subgradient, then resets every leaf to the
/// empirical quantile of the residuals that reached it.
class GbqrModel {
 public:
  /// Throws InsufficientData with fewer than two rows.
  static GbqrModel fit(const Dataset& data, const GbqrParams& params);

  double predict(std::span<const double> x) const;
  std::vector<double> predict_batch(std::span<const std::vector<double>> xs) const;

  double base_value() const noexcept { return base_value_; }
  const std::vector<RegressionTree>& trees() const noexcept { return trees_; }
  const GbqrParams& params() const noexcept { return params_; }
  std::size_t dims() const noexcept { return dims_; }

  /// Mean training pinball loss after the base value (entry 0) and after
  /// every stage.
  const std::vector<double>& training_loss() const noexcept { return training_loss_; }

 private:
  double predict_unchecked(std::span<const double> x) const;

  GbqrParams params_;
  std::size_t dims_ = 0;
  double base_value_ = 0.0;
  std::vector<RegressionTree> trees_;
  std::vector<double> training_loss_;
};

}  // namespace qboost
