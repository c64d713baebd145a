#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "qboost/random.hpp"

namespace qboost {

enum class ParamKind { real, log_real, integer, categorical };

std::string_view to_string(ParamKind kind);
ParamKind param_kind_from_string(std::string_view text);

/// Value of one hyperparameter. Reals (linear and log) hold double, integers
/// hold int64, categoricals hold the label. monostate marks an unset value.
using ParamValue = std::variant<std::monostate, double, std::int64_t, std::string>;

class SpaceError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// One hyperparameter declaration. Construct through the named factories,
/// which reject malformed bounds, categories and defaults.
class ParamSpec {
 public:
  static ParamSpec real(std::string name, double lower, double upper, double default_value);
  static ParamSpec log_real(std::string name, double lower, double upper, double default_value);
  static ParamSpec integer(std::string name, std::int64_t lower, std::int64_t upper,
                           std::int64_t default_value);
  static ParamSpec categorical(std::string name, std::vector<std::string> categories,
                               std::string default_value);

  const std::string& name() const noexcept { return name_; }
  ParamKind kind() const noexcept { return kind_; }
  bool is_numeric() const noexcept { return kind_ != ParamKind::categorical; }
  double lower() const noexcept { return lower_; }
  double upper() const noexcept { return upper_; }
  const std::vector<std::string>& categories() const noexcept { return categories_; }
  const ParamValue& default_value() const noexcept { return default_; }

  /// Index of `label` in categories(), or nullopt.
  std::optional<std::size_t> category_index(std::string_view label) const;

  /// Empty when `value` is admissible, otherwise a description of the problem.
  std::optional<std::string> check(const ParamValue& value) const;

  ParamValue sample(Rng& rng) const;

 private:
  ParamSpec() = default;

  std::string name_;
  ParamKind kind_ = ParamKind::real;
  double lower_ = 0.0;
  double upper_ = 0.0;
  std::vector<std::string> categories_;
  ParamValue default_;
};

class ConfigSpace;

/// A point in a ConfigSpace. Values are stored in the space's declaration
/// order; lookups by name go through the owning space.
class Configuration {
 public:
  Configuration() = default;
  explicit Configuration(std::vector<ParamValue> values) : values_(std::move(values)) {}

  std::size_t size() const noexcept { return values_.size(); }
  const ParamValue& operator[](std::size_t i) const { return values_.at(i); }
  ParamValue& operator[](std::size_t i) { return values_.at(i); }
  const std::vector<ParamValue>& values() const noexcept { return values_; }

  double as_real(std::size_t i) const;
  std::int64_t as_integer(std::size_t i) const;
  const std::string& as_label(std::size_t i) const;

  friend bool operator==(const Configuration&, const Configuration&) = default;

 private:
  std::vector<ParamValue> values_;
};

/// Ordered, immutable list of hyperparameters. Declaration order fixes the
/// encoding layout.
class ConfigSpace {
 public:
  ConfigSpace() = default;
  explicit ConfigSpace(std::vector<ParamSpec> params);

  std::size_t size() const noexcept { return params_.size(); }
  bool empty() const noexcept { return params_.empty(); }
  const ParamSpec& operator[](std::size_t i) const { return params_.at(i); }
  const std::vector<ParamSpec>& params() const noexcept { return params_; }

  std::optional<std::size_t> index_of(std::string_view name) const;

  /// Builds a configuration from (name, value) pairs. Names must exist in the
  /// space; parameters not mentioned stay unset and fail validation.
  Configuration make(const std::vector<std::pair<std::string, ParamValue>>& named) const;

  const ParamValue& get(const Configuration& config, std::string_view name) const;

 private:
  std::vector<ParamSpec> params_;
};

Configuration sample(const ConfigSpace& space, Rng& rng);
Configuration default_config(const ConfigSpace& space);

/// Empty when `config` satisfies every parameter of `space`; otherwise the
/// first violation, naming the parameter.
std::optional<std::string> validate(const ConfigSpace& space, const Configuration& config);

/// Rounds half up and clamps into [lower, upper].
std::int64_t round_to_integer(double value, std::int64_t lower, std::int64_t upper);

std::string format_value(const ParamValue& value);

// Built-in spaces mirroring the tuned models of the experiments.
ConfigSpace random_forest_space();
ConfigSpace decision_tree_space();
ConfigSpace svm_space();

}  // namespace qboost
