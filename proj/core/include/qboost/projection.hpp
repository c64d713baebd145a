#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace qboost {

/// Eigenpairs of a symmetric matrix by cyclic Jacobi rotations, sorted by
/// descending eigenvalue. `matrix` is row-major n x n.
struct SymmetricEigen {
  std::vector<double> values;
  std::vector<std::vector<double>> vectors;  // vectors[i] pairs with values[i]
};
SymmetricEigen jacobi_eigen(std::vector<double> matrix, std::size_t n);

/// Principal component map fitted on a sample of vectors.
class PcaMap {
 public:
  /// Needs at least target_dims + 1 vectors of a common width k with
  /// 1 <= target_dims <= k. Components follow descending explained variance;
  /// each is signed so its largest-magnitude entry is positive.
  static PcaMap fit(std::span<const std::vector<double>> vectors, std::size_t target_dims);

  std::vector<double> project(std::span<const double> v) const;

  std::size_t input_dims() const noexcept { return mean_.size(); }
  std::size_t output_dims() const noexcept { return components_.size(); }
  const std::vector<double>& mean() const noexcept { return mean_; }
  const std::vector<std::vector<double>>& components() const noexcept { return components_; }
  const std::vector<double>& explained_variance() const noexcept { return explained_variance_; }
  /// Share of the total sample variance captured by each kept component.
  std::vector<double> explained_variance_ratio() const;

 private:
  std::vector<double> mean_;
  std::vector<std::vector<double>> components_;
  std::vector<double> explained_variance_;
  double total_variance_ = 0.0;
};

}  // namespace qboost
