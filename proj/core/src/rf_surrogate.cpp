#include "qboost/rf_surrogate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "qboost/parallel.hpp"
#include "qboost/random.hpp"

namespace qboost {

MeanVar mixture_mean_var(std::span<const LeafStats> leaves) {
  if (leaves.empty()) throw std::invalid_argument("mixture_mean_var: no components");
  const auto b = static_cast<double>(leaves.size());
  double mean = 0.0;
  for (const auto& leaf : leaves) mean += leaf.mean;
  mean /= b;
  double within = 0.0;
  double between = 0.0;
  for (const auto& leaf : leaves) {
    within += leaf.variance;
    between += (leaf.mean - mean) * (leaf.mean - mean);
  }
  return {mean, std::max(0.0, within / b + between / b)};
}

VarianceTree VarianceTree::constant(LeafStats stats) {
  Node root;
  root.stats = stats;
  return VarianceTree({root});
}

const LeafStats& VarianceTree::leaf(std::span<const double> x) const {
  int node = 0;
  while (nodes_[node].feature >= 0) {
    const Node& n = nodes_[node];
    node = x[n.feature] <= n.threshold ? n.left : n.right;
  }
  return nodes_[node].stats;
}

namespace {

struct Split {
  bool valid = false;
  double gain = 0.0;
  int feature = -1;
  double threshold = 0.0;
};

LeafStats leaf_stats(const Dataset& data, std::span<const int> rows, double min_variance) {
  double mean = 0.0;
  for (int r : rows) mean += data.target(r);
  mean /= static_cast<double>(rows.size());
  double var = 0.0;
  for (int r : rows) var += (data.target(r) - mean) * (data.target(r) - mean);
  var /= static_cast<double>(rows.size());
  return {mean, std::max(var, min_variance), static_cast<int>(rows.size())};
}

// Best variance-reduction split of `rows` on `feature`; reorders `rows`.
Split best_split_on(const Dataset& data, std::span<int> rows, int feature, int min_leaf) {
  std::stable_sort(rows.begin(), rows.end(), [&](int a, int b) {
    return data.feature(a, feature) < data.feature(b, feature);
  });
  const int n = static_cast<int>(rows.size());
  double total = 0.0;
  for (int r : rows) total += data.target(r);
  Split best;
  double left_sum = 0.0;
  for (int i = 1; i < n; ++i) {
    left_sum += data.target(rows[i - 1]);
    const double prev = data.feature(rows[i - 1], feature);
    const double x = data.feature(rows[i], feature);
    if (!(prev < x) || i < min_leaf || n - i < min_leaf) continue;
    const double diff = left_sum / i - (total - left_sum) / (n - i);
    const double gain = static_cast<double>(i) * (n - i) / n * diff * diff;
    if (gain > 1e-12 && (!best.valid || gain > best.gain)) {
      double threshold = prev + (x - prev) / 2.0;
      if (!(threshold < x)) threshold = prev;
      best = {true, gain, feature, threshold};
    }
  }
  return best;
}

VarianceTree grow_variance_tree(const Dataset& data, std::vector<int> rows, const RfParams& params,
                                Rng& rng) {
  const int dims = static_cast<int>(data.dims());
  const int min_leaf = std::max(1, params.min_samples_leaf);
  const int tries = std::clamp(
      static_cast<int>(std::lround(params.feature_subsample_ratio * dims)), 1, std::max(1, dims));
  std::vector<int> features(static_cast<std::size_t>(dims));

  std::vector<VarianceTree::Node> nodes(1);
  struct Pending {
    int node;
    std::size_t begin;
    std::size_t end;
  };
  std::vector<Pending> stack{{0, 0, rows.size()}};
  while (!stack.empty()) {
    const Pending job = stack.back();
    stack.pop_back();
    std::span<int> span(rows.data() + job.begin, job.end - job.begin);
    const int n = static_cast<int>(span.size());

    bool pure = true;
    for (int r : span) pure = pure && data.target(r) == data.target(span[0]);
    Split best;
    if (!pure && n >= 2 * min_leaf && dims > 0) {
      std::iota(features.begin(), features.end(), 0);
      for (int t = 0; t < tries; ++t) {
        const auto pick = t + static_cast<int>(uniform_index(rng, static_cast<std::uint64_t>(dims - t)));
        std::swap(features[t], features[pick]);
      }
      std::sort(features.begin(), features.begin() + tries);
      for (int t = 0; t < tries; ++t) {
        const Split s = best_split_on(data, span, features[t], min_leaf);
        if (s.valid && (!best.valid || s.gain > best.gain)) best = s;
      }
    }
    if (!best.valid) {
      nodes[job.node].stats = leaf_stats(data, span, params.min_variance);
      continue;
    }
    const auto middle = std::stable_partition(span.begin(), span.end(), [&](int r) {
      return data.feature(r, best.feature) <= best.threshold;
    });
    const auto left_size = static_cast<std::size_t>(middle - span.begin());
    const int left = static_cast<int>(nodes.size());
    nodes.resize(nodes.size() + 2);
    nodes[job.node].feature = best.feature;
    nodes[job.node].threshold = best.threshold;
    nodes[job.node].left = left;
    nodes[job.node].right = left + 1;
    stack.push_back({left + 1, job.begin + left_size, job.end});
    stack.push_back({left, job.begin, job.begin + left_size});
  }
  return VarianceTree(std::move(nodes));
}

}  // namespace

RfModel RfModel::fit(const Dataset& data, const RfParams& params, std::uint64_t seed) {
  if (data.size() < 2) throw InsufficientData("random forest: at least two samples are required");
  if (params.n_trees < 1) throw std::invalid_argument("random forest: n_trees must be positive");
  if (!(params.feature_subsample_ratio > 0.0 && params.feature_subsample_ratio <= 1.0)) {
    throw std::invalid_argument("random forest: feature_subsample_ratio must lie in (0, 1]");
  }
  RfModel model;
  model.params_ = params;
  model.dims_ = data.dims();
  model.trees_.resize(static_cast<std::size_t>(params.n_trees));
  const std::size_t n = data.size();
  parallel_chunks(model.trees_.size(), 1, [&](std::size_t begin, std::size_t end) {
    for (std::size_t b = begin; b < end; ++b) {
      Rng rng = make_rng(derive_seed(seed, b));
      std::vector<int> rows(n);
      if (params.bootstrap) {
        for (auto& r : rows) r = static_cast<int>(uniform_index(rng, n));
      } else {
        std::iota(rows.begin(), rows.end(), 0);
      }
      model.trees_[b] = grow_variance_tree(data, std::move(rows), params, rng);
    }
  });
  return model;
}

RfModel RfModel::from_trees(std::vector<VarianceTree> trees, const RfParams& params,
                            std::size_t dims) {
  if (trees.empty()) throw std::invalid_argument("random forest: no trees");
  RfModel model;
  model.params_ = params;
  model.params_.n_trees = static_cast<int>(trees.size());
  model.dims_ = dims;
  model.trees_ = std::move(trees);
  return model;
}

MeanVar RfModel::predict_unchecked(std::span<const double> x) const {
  thread_local std::vector<LeafStats> leaves;
  leaves.clear();
  for (const auto& tree : trees_) leaves.push_back(tree.leaf(x));
  return mixture_mean_var(leaves);
}

MeanVar RfModel::predict_mean_var(std::span<const double> x) const {
  if (x.size() != dims_) throw std::invalid_argument("random forest: input width does not match model");
  return predict_unchecked(x);
}

std::vector<MeanVar> RfModel::predict_batch(std::span<const std::vector<double>> xs) const {
  for (const auto& x : xs) {
    if (x.size() != dims_) throw std::invalid_argument("random forest: input width does not match model");
  }
  std::vector<MeanVar> out(xs.size());
  parallel_chunks(xs.size(), 1024, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) out[i] = predict_unchecked(xs[i]);
  });
  return out;
}

}  // namespace qboost
