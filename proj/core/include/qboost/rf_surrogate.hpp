#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qboost/dataset.hpp"
#include "qboost/gbqr.hpp"

namespace qboost {

struct RfParams {
  int n_trees = 10;
  bool bootstrap = true;
  double feature_subsample_ratio = 5.0 / 6.0;
  double min_variance = 0.01;
  int min_samples_leaf = 3;
};

/// Empirical statistics of the training targets that reached a leaf.
struct LeafStats {
  double mean = 0.0;
  double variance = 0.0;
  int count = 0;
};

struct MeanVar {
  double mean = 0.0;
  double variance = 0.0;
};

/// Treats the per-tree leaf statistics as a uniform mixture: the mean of the
/// means, and the mean of the variances plus the variance of the means.
MeanVar mixture_mean_var(std::span<const LeafStats> leaves);

/// Regression tree whose leaves keep mean and (floored) variance.
class VarianceTree {
 public:
  struct Node {
    int feature = -1;
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    LeafStats stats;
  };

  VarianceTree() = default;
  explicit VarianceTree(std::vector<Node> nodes) : nodes_(std::move(nodes)) {}

  /// Single-leaf tree; handy for assembling forests by hand.
  static VarianceTree constant(LeafStats stats);

  const LeafStats& leaf(std::span<const double> x) const;
  const std::vector<Node>& nodes() const noexcept { return nodes_; }

 private:
  std::vector<Node> nodes_;
};

class RfModel {
 public:
  /// Grows params.n_trees trees on bootstrap resamples, each split choosing
  /// among a random feature subset by variance reduction. Throws
  /// InsufficientData with fewer than two rows.
  static RfModel fit(const Dataset& data, const RfParams& params, std::uint64_t seed);

  static RfModel from_trees(std::vector<VarianceTree> trees, const RfParams& params,
                            std::size_t dims);

  MeanVar predict_mean_var(std::span<const double> x) const;
  std::vector<MeanVar> predict_batch(std::span<const std::vector<double>> xs) const;

  const std::vector<VarianceTree>& trees() const noexcept { return trees_; }
  const RfParams& params() const noexcept { return params_; }
  std::size_t dims() const noexcept { return dims_; }

 private:
  MeanVar predict_unchecked(std::span<const double> x) const;

  RfParams params_;
  std::size_t dims_ = 0;
  std::vector<VarianceTree> trees_;
};

}  // namespace qboost
