#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qboost/config_space.hpp"
#include "qboost/encoding.hpp"

namespace qboost {

/// Callback the optimizer uses to score a configuration under a run seed.
/// Higher scores are better.
using Evaluator = std::function<double(const Configuration&, std::uint64_t)>;

/// Deterministic response over the encoded space plus seeded Gaussian noise.
/// The noise draw is a pure function of (encoded configuration, seed).
class SyntheticObjective {
 public:
  using Response = std::function<double(std::span<const double>)>;

  SyntheticObjective(std::string name, ConfigSpace space, Response response, double noise_sd);

  const std::string& name() const noexcept { return name_; }
  const ConfigSpace& space() const noexcept { return space_; }
  const EncodingLayout& layout() const noexcept { return layout_; }
  double noise_sd() const noexcept { return noise_sd_; }

  /// Noise-free response. Throws SpaceError for invalid configurations.
  double response(const Configuration& config) const;
  double response_encoded(std::span<const double> encoded) const { return response_(encoded); }

  /// Standard normal draw keyed on (encode(config), seed).
  double noise(const Configuration& config, std::uint64_t seed) const;

  /// response + noise_sd * noise. Throws SpaceError for invalid configurations.
  double evaluate(const Configuration& config, std::uint64_t seed) const;

  Evaluator evaluator() const;

  /// Known maximizer and its response, recorded for reports and tests.
  std::optional<Configuration> optimum_config;
  std::optional<std::vector<double>> optimum_point;  // native values, for continuous optima
  double optimum_value = 0.0;
  std::string description;

 private:
  std::string name_;
  ConfigSpace space_;
  EncodingLayout layout_;
  Response response_;
  double noise_sd_;
};

/// Negated Branin function on x1 in [-5, 10], x2 in [0, 15].
SyntheticObjective branin(double noise_sd = 0.0);
double branin_value(double x1, double x2);

enum class TableSpace { rf, dt, svm };

/// Smooth unimodal bump centred on a fixed anchor configuration of the named
/// built-in space, minus a penalty for non-anchor categories.
SyntheticObjective table_space_objective(TableSpace which, double noise_sd);

/// Gaussian bump on `dims` unit-interval floats x0..x{dims-1}, peak 1.
SyntheticObjective bump_objective(std::size_t dims, double noise_sd);

/// -(x - 0.7)^2 on x in [0, 1].
SyntheticObjective quadratic_objective(double noise_sd = 0.0);

/// Bump anchored at the default configuration of an arbitrary space.
SyntheticObjective space_default_objective(std::string name, ConfigSpace space, double noise_sd);

/// Resolves "branin", "rf", "dt", "svm", "quadratic" and "bump<k>".
/// Throws std::invalid_argument for unknown names.
SyntheticObjective make_objective(const std::string& name, double noise_sd);

std::vector<std::string> builtin_objective_names();

}  // namespace qboost
