#include "qboost/projection.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace qboost {

SymmetricEigen jacobi_eigen(std::vector<double> a, std::size_t n) {
  if (a.size() != n * n) throw std::invalid_argument("jacobi_eigen: matrix is not n x n");
  std::vector<double> v(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;

  double scale = 0.0;
  for (double x : a) scale = std::max(scale, std::abs(x));
  for (int sweep = 0; sweep < 100 && scale > 0.0; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) off += a[p * n + q] * a[p * n + q];
    }
    if (std::sqrt(off) <= 1e-15 * scale) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a[p * n + q];
        if (apq == 0.0) continue;
        const double theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k * n + p];
          const double akq = a[k * n + q];
          a[k * n + p] = c * akp - s * akq;
          a[k * n + q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p * n + k];
          const double aqk = a[q * n + k];
          a[p * n + k] = c * apk - s * aqk;
          a[q * n + k] = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v[k * n + p];
          const double vkq = v[k * n + q];
          v[k * n + p] = c * vkp - s * vkq;
          v[k * n + q] = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return a[x * n + x] > a[y * n + y]; });
  SymmetricEigen out;
  for (std::size_t idx : order) {
    out.values.push_back(a[idx * n + idx]);
    std::vector<double> column(n);
    for (std::size_t k = 0; k < n; ++k) column[k] = v[k * n + idx];
    out.vectors.push_back(std::move(column));
  }
  return out;
}

PcaMap PcaMap::fit(std::span<const std::vector<double>> vectors, std::size_t target_dims) {
  if (vectors.empty()) throw std::invalid_argument("pca: no input vectors");
  const std::size_t k = vectors.front().size();
  if (target_dims < 1 || target_dims > k) {
    throw std::invalid_argument("pca: target dimension must lie in [1, input dimension]");
  }
  if (vectors.size() < target_dims + 1) {
    throw std::invalid_argument("pca: need at least target_dims + 1 vectors");
  }
  for (const auto& v : vectors) {
    if (v.size() != k) throw std::invalid_argument("pca: vectors differ in length");
  }

  PcaMap map;
  const auto n = static_cast<double>(vectors.size());
  map.mean_.assign(k, 0.0);
  for (const auto& v : vectors) {
    for (std::size_t j = 0; j < k; ++j) map.mean_[j] += v[j];
  }
  for (auto& m : map.mean_) m /= n;

  std::vector<double> cov(k * k, 0.0);
  for (const auto& v : vectors) {
    for (std::size_t i = 0; i < k; ++i) {
      const double di = v[i] - map.mean_[i];
      for (std::size_t j = i; j < k; ++j) cov[i * k + j] += di * (v[j] - map.mean_[j]);
    }
  }
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i; j < k; ++j) {
      cov[i * k + j] /= n - 1.0;
      cov[j * k + i] = cov[i * k + j];
    }
  }

  SymmetricEigen eig = jacobi_eigen(std::move(cov), k);
  for (double& value : eig.values) value = std::max(value, 0.0);
  map.total_variance_ = std::accumulate(eig.values.begin(), eig.values.end(), 0.0);
  for (std::size_t c = 0; c < target_dims; ++c) {
    std::vector<double> direction = std::move(eig.vectors[c]);
    std::size_t largest = 0;
    for (std::size_t j = 1; j < k; ++j) {
      if (std::abs(direction[j]) > std::abs(direction[largest])) largest = j;
    }
    if (direction[largest] < 0.0) {
      for (double& x : direction) x = -x;
    }
    map.components_.push_back(std::move(direction));
    map.explained_variance_.push_back(eig.values[c]);
  }
  return map;
}

std::vector<double> PcaMap::project(std::span<const double> v) const {
  if (v.size() != mean_.size()) throw std::invalid_argument("pca: input width does not match map");
  std::vector<double> out(components_.size(), 0.0);
  for (std::size_t c = 0; c < components_.size(); ++c) {
    double dot = 0.0;
    for (std::size_t j = 0; j < v.size(); ++j) dot += (v[j] - mean_[j]) * components_[c][j];
    out[c] = dot;
  }
  return out;
}

std::vector<double> PcaMap::explained_variance_ratio() const {
  std::vector<double> ratio(explained_variance_.size(), 0.0);
  if (total_variance_ <= 0.0) return ratio;
  for (std::size_t c = 0; c < ratio.size(); ++c) ratio[c] = explained_variance_[c] / total_variance_;
  return ratio;
}

}  // namespace qboost
