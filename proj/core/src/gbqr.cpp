#include "qboost/gbqr.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qboost/parallel.hpp"

namespace qboost {

double pinball_loss(double quantile, double y, double estimate) {
  const double weight = y > estimate ? quantile : 1.0 - quantile;
  return weight * std::abs(y - estimate);
}

double pinball_negative_gradient(double quantile, double y, double estimate) {
  if (y > estimate) return quantile;
  if (y < estimate) return quantile - 1.0;
  return 0.0;
}

double empirical_quantile(std::span<double> values, double quantile) {
  if (values.empty()) throw std::invalid_argument("empirical_quantile: empty input");
  const auto n = static_cast<double>(values.size());
  auto rank = static_cast<std::size_t>(std::ceil(quantile * n));
  rank = std::clamp<std::size_t>(rank, 1, values.size());
  auto nth = values.begin() + static_cast<std::ptrdiff_t>(rank - 1);
  std::nth_element(values.begin(), nth, values.end());
  return *nth;
}

int RegressionTree::leaf_index(std::span<const double> x) const {
  int node = 0;
  while (nodes_[node].feature >= 0) {
    const Node& n = nodes_[node];
    node = x[n.feature] <= n.threshold ? n.left : n.right;
  }
  return node;
}

std::size_t RegressionTree::leaf_count() const {
  return static_cast<std::size_t>(
      std::count_if(nodes_.begin(), nodes_.end(), [](const Node& n) { return n.feature < 0; }));
}

namespace {

struct SplitCandidate {
  bool valid = false;
  double gain = 0.0;
  int feature = -1;
  double threshold = 0.0;
};

// Least-squares split search over the rows currently assigned to `leaf`.
// `order[j]` lists all rows sorted by feature j; rows of other leaves are
// skipped. Ties in gain keep the lowest feature, then the lowest threshold.
class SplitFinder {
 public:
  SplitFinder(const Dataset& data, int min_samples_leaf)
      : data_(data), min_leaf_(std::max(1, min_samples_leaf)), order_(data.dims()) {
    std::vector<int> base(data.size());
    std::iota(base.begin(), base.end(), 0);
    for (std::size_t j = 0; j < data.dims(); ++j) {
      order_[j] = base;
      std::stable_sort(order_[j].begin(), order_[j].end(), [&](int a, int b) {
        return data.feature(a, j) < data.feature(b, j);
      });
    }
  }

  SplitCandidate best_split(int leaf, const std::vector<int>& leaf_of,
                            const std::vector<double>& target, int count, double total) const {
    SplitCandidate best;
    if (count < 2 * min_leaf_) return best;
    for (std::size_t j = 0; j < data_.dims(); ++j) {
      double left_sum = 0.0;
      int left_count = 0;
      double prev = 0.0;
      for (int row : order_[j]) {
        if (leaf_of[row] != leaf) continue;
        const double x = data_.feature(row, j);
        if (left_count >= min_leaf_ && count - left_count >= min_leaf_ && prev < x) {
          const int right_count = count - left_count;
          const double left_mean = left_sum / left_count;
          const double right_mean = (total - left_sum) / right_count;
          const double diff = left_mean - right_mean;
          const double gain =
              static_cast<double>(left_count) * right_count / count * diff * diff;
          if (gain > 1e-12 && (!best.valid || gain > best.gain)) {
            double threshold = prev + (x - prev) / 2.0;
            if (!(threshold < x)) threshold = prev;
            best = {true, gain, static_cast<int>(j), threshold};
          }
        }
        left_sum += target[row];
        ++left_count;
        prev = x;
      }
    }
    return best;
  }

 private:
  const Dataset& data_;
  int min_leaf_;
  std::vector<std::vector<int>> order_;
};

struct OpenLeaf {
  int node = 0;
  int count = 0;
  double total = 0.0;
  SplitCandidate split;
};

RegressionTree grow_tree(const Dataset& data, const SplitFinder& finder,
                         const std::vector<double>& gradient, const std::vector<double>& residual,
                         const GbqrParams& params, std::vector<int>& leaf_of) {
  std::vector<RegressionTree::Node> nodes(1);
  std::fill(leaf_of.begin(), leaf_of.end(), 0);
  const int n = static_cast<int>(data.size());

  OpenLeaf root{0, n, std::accumulate(gradient.begin(), gradient.end(), 0.0), {}};
  root.split = finder.best_split(0, leaf_of, gradient, root.count, root.total);
  std::vector<OpenLeaf> open{root};

  const int max_leaves = std::max(1, params.max_leaves);
  int leaves = 1;
  while (leaves < max_leaves) {
    // Best-first: expand the open leaf with the largest gain (earliest on ties).
    int pick = -1;
    for (int i = 0; i < static_cast<int>(open.size()); ++i) {
      if (!open[i].split.valid) continue;
      if (pick < 0 || open[i].split.gain > open[pick].split.gain) pick = i;
    }
    if (pick < 0) break;
    const OpenLeaf parent = open[pick];
    open.erase(open.begin() + pick);

    const int left = static_cast<int>(nodes.size());
    const int right = left + 1;
    nodes.resize(nodes.size() + 2);
    RegressionTree::Node& split_node = nodes[parent.node];
    split_node.feature = parent.split.feature;
    split_node.threshold = parent.split.threshold;
    split_node.left = left;
    split_node.right = right;

    OpenLeaf lhs{left, 0, 0.0, {}};
    OpenLeaf rhs{right, 0, 0.0, {}};
    for (int row = 0; row < n; ++row) {
      if (leaf_of[row] != parent.node) continue;
      if (data.feature(row, parent.split.feature) <= parent.split.threshold) {
        leaf_of[row] = left;
        ++lhs.count;
        lhs.total += gradient[row];
      } else {
        leaf_of[row] = right;
        ++rhs.count;
        rhs.total += gradient[row];
      }
    }
    lhs.split = finder.best_split(left, leaf_of, gradient, lhs.count, lhs.total);
    rhs.split = finder.best_split(right, leaf_of, gradient, rhs.count, rhs.total);
    open.push_back(lhs);
    open.push_back(rhs);
    ++leaves;
  }

  // Terminal update: each leaf moves to the quantile of its raw residuals.
  std::vector<std::vector<double>> bucket(nodes.size());
  for (int row = 0; row < n; ++row) bucket[leaf_of[row]].push_back(residual[row]);
  for (std::size_t id = 0; id < nodes.size(); ++id) {
    if (nodes[id].feature >= 0) continue;
    nodes[id].samples = static_cast<int>(bucket[id].size());
    nodes[id].value = bucket[id].empty() ? 0.0 : empirical_quantile(bucket[id], params.quantile);
  }
  return RegressionTree(std::move(nodes));
}

double mean_pinball(const Dataset& data, const std::vector<double>& fitted, double quantile) {
  double total = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    total += pinball_loss(quantile, data.target(i), fitted[i]);
  }
  return total / static_cast<double>(data.size());
}

}  // namespace

GbqrModel GbqrModel::fit(const Dataset& data, const GbqrParams& params) {
  if (data.size() < 2) throw InsufficientData("gbqr: at least two samples are required");
  if (!(params.quantile > 0.0 && params.quantile < 1.0)) {
    throw std::invalid_argument("gbqr: quantile must lie in (0, 1)");
  }
  if (!(params.learning_rate > 0.0)) throw std::invalid_argument("gbqr: learning rate must be positive");

  GbqrModel model;
  model.params_ = params;
  model.dims_ = data.dims();
  std::vector<double> targets = data.targets();
  model.base_value_ = empirical_quantile(targets, params.quantile);

  const std::size_t n = data.size();
  std::vector<double> fitted(n, model.base_value_);
  std::vector<double> residual(n);
  std::vector<double> gradient(n);
  std::vector<int> leaf_of(n);
  model.training_loss_.push_back(mean_pinball(data, fitted, params.quantile));

  const SplitFinder finder(data, params.min_samples_leaf);
  model.trees_.reserve(static_cast<std::size_t>(std::max(0, params.n_iterations)));
  for (int stage = 0; stage < params.n_iterations; ++stage) {
    for (std::size_t i = 0; i < n; ++i) {
      residual[i] = data.target(i) - fitted[i];
      gradient[i] = pinball_negative_gradient(params.quantile, data.target(i), fitted[i]);
    }
    RegressionTree tree = grow_tree(data, finder, gradient, residual, params, leaf_of);
    for (std::size_t i = 0; i < n; ++i) {
      fitted[i] += params.learning_rate * tree.nodes()[leaf_of[i]].value;
    }
    model.trees_.push_back(std::move(tree));
    model.training_loss_.push_back(mean_pinball(data, fitted, params.quantile));
  }
  return model;
}

double GbqrModel::predict_unchecked(std::span<const double> x) const {
  double value = base_value_;
  for (const auto& tree : trees_) value += params_.learning_rate * tree.predict(x);
  return value;
}

double GbqrModel::predict(std::span<const double> x) const {
  if (x.size() != dims_) throw std::invalid_argument("gbqr: input width does not match model");
  return predict_unchecked(x);
}

std::vector<double> GbqrModel::predict_batch(std::span<const std::vector<double>> xs) const {
  for (const auto& x : xs) {
    if (x.size() != dims_) throw std::invalid_argument("gbqr: input width does not match model");
  }
  std::vector<double> out(xs.size());
  parallel_chunks(xs.size(), 1024, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) out[i] = predict_unchecked(xs[i]);
  });
  return out;
}

}  // namespace qboost
