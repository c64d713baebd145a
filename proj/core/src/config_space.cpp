#include "qboost/config_space.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace qboost {

std::string_view to_string(ParamKind kind) {
  switch (kind) {
    case ParamKind::real: return "float";
    case ParamKind::log_real: return "log_float";
    case ParamKind::integer: return "integer";
    case ParamKind::categorical: return "categorical";
  }
  return "unknown";
}

ParamKind param_kind_from_string(std::string_view text) {
  if (text == "float") return ParamKind::real;
  if (text == "log_float") return ParamKind::log_real;
  if (text == "integer") return ParamKind::integer;
  if (text == "categorical") return ParamKind::categorical;
  throw SpaceError("unknown parameter kind '" + std::string(text) + "'");
}

namespace {

void require_name(const std::string& name) {
  if (name.empty()) throw SpaceError("parameter name must be nonempty");
}

void require_bounds(const std::string& name, double lower, double upper) {
  if (!std::isfinite(lower) || !std::isfinite(upper) || !(lower < upper)) {
    throw SpaceError("parameter '" + name + "': lower bound must be below upper bound");
  }
}

}  // namespace

ParamSpec ParamSpec::real(std::string name, double lower, double upper, double default_value) {
  require_name(name);
  require_bounds(name, lower, upper);
  ParamSpec spec;
  spec.name_ = std::move(name);
  spec.kind_ = ParamKind::real;
  spec.lower_ = lower;
  spec.upper_ = upper;
  spec.default_ = default_value;
  if (auto problem = spec.check(spec.default_)) throw SpaceError("default: " + *problem);
  return spec;
}

ParamSpec ParamSpec::log_real(std::string name, double lower, double upper, double default_value) {
  require_name(name);
  require_bounds(name, lower, upper);
  if (!(lower > 0.0)) {
    throw SpaceError("parameter '" + name + "': log-scaled bounds must be positive");
  }
  ParamSpec spec;
  spec.name_ = std::move(name);
  spec.kind_ = ParamKind::log_real;
  spec.lower_ = lower;
  spec.upper_ = upper;
  spec.default_ = default_value;
  if (auto problem = spec.check(spec.default_)) throw SpaceError("default: " + *problem);
  return spec;
}

ParamSpec ParamSpec::integer(std::string name, std::int64_t lower, std::int64_t upper,
                             std::int64_t default_value) {
  require_name(name);
  require_bounds(name, static_cast<double>(lower), static_cast<double>(upper));
  ParamSpec spec;
  spec.name_ = std::move(name);
  spec.kind_ = ParamKind::integer;
  spec.lower_ = static_cast<double>(lower);
  spec.upper_ = static_cast<double>(upper);
  spec.default_ = default_value;
  if (auto problem = spec.check(spec.default_)) throw SpaceError("default: " + *problem);
  return spec;
}

ParamSpec ParamSpec::categorical(std::string name, std::vector<std::string> categories,
                                 std::string default_value) {
  require_name(name);
  if (categories.empty()) {
    throw SpaceError("parameter '" + name + "': categories must be nonempty");
  }
  if (std::set<std::string>(categories.begin(), categories.end()).size() != categories.size()) {
    throw SpaceError("parameter '" + name + "': category labels must be distinct");
  }
  ParamSpec spec;
  spec.name_ = std::move(name);
  spec.kind_ = ParamKind::categorical;
  spec.categories_ = std::move(categories);
  spec.default_ = std::move(default_value);
  if (auto problem = spec.check(spec.default_)) throw SpaceError("default: " + *problem);
  return spec;
}

std::optional<std::size_t> ParamSpec::category_index(std::string_view label) const {
  for (std::size_t i = 0; i < categories_.size(); ++i) {
    if (categories_[i] == label) return i;
  }
  return std::nullopt;
}

std::optional<std::string> ParamSpec::check(const ParamValue& value) const {
  if (std::holds_alternative<std::monostate>(value)) {
    return "missing value for parameter '" + name_ + "'";
  }
  switch (kind_) {
    case ParamKind::real:
    case ParamKind::log_real: {
      const double* x = std::get_if<double>(&value);
      if (x == nullptr) return "parameter '" + name_ + "' expects a float value";
      if (!std::isfinite(*x) || *x < lower_ || *x > upper_) {
        std::ostringstream out;
        out << "parameter '" << name_ << "' value " << *x << " outside [" << lower_ << ", "
            << upper_ << "]";
        return out.str();
      }
      return std::nullopt;
    }
    case ParamKind::integer: {
      const std::int64_t* x = std::get_if<std::int64_t>(&value);
      if (x == nullptr) return "parameter '" + name_ + "' expects an integer value";
      if (static_cast<double>(*x) < lower_ || static_cast<double>(*x) > upper_) {
        std::ostringstream out;
        out << "parameter '" << name_ << "' value " << *x << " outside [" << lower_ << ", "
            << upper_ << "]";
        return out.str();
      }
      return std::nullopt;
    }
    case ParamKind::categorical: {
      const std::string* label = std::get_if<std::string>(&value);
      if (label == nullptr) return "parameter '" + name_ + "' expects a category label";
      if (!category_index(*label)) {
        return "parameter '" + name_ + "' has unknown category '" + *label + "'";
      }
      return std::nullopt;
    }
  }
  return std::nullopt;
}

std::int64_t round_to_integer(double value, std::int64_t lower, std::int64_t upper) {
  const auto rounded = static_cast<std::int64_t>(std::floor(value + 0.5));
  return std::clamp(rounded, lower, upper);
}

ParamValue ParamSpec::sample(Rng& rng) const {
  switch (kind_) {
    case ParamKind::real:
      return std::min(uniform(rng, lower_, upper_), upper_);
    case ParamKind::log_real: {
      const double value = std::exp(uniform(rng, std::log(lower_), std::log(upper_)));
      return std::clamp(value, lower_, upper_);
    }
    case ParamKind::integer:
      return round_to_integer(uniform(rng, lower_, upper_), static_cast<std::int64_t>(lower_),
                              static_cast<std::int64_t>(upper_));
    case ParamKind::categorical:
      return categories_[uniform_index(rng, categories_.size())];
  }
  return std::monostate{};
}

double Configuration::as_real(std::size_t i) const { return std::get<double>(values_.at(i)); }

std::int64_t Configuration::as_integer(std::size_t i) const {
  return std::get<std::int64_t>(values_.at(i));
}

const std::string& Configuration::as_label(std::size_t i) const {
  return std::get<std::string>(values_.at(i));
}

ConfigSpace::ConfigSpace(std::vector<ParamSpec> params) : params_(std::move(params)) {
  std::set<std::string> seen;
  for (const auto& p : params_) {
    if (!seen.insert(p.name()).second) {
      throw SpaceError("duplicate parameter name '" + p.name() + "'");
    }
  }
}

std::optional<std::size_t> ConfigSpace::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < params_.size(); ++i) {
    if (params_[i].name() == name) return i;
  }
  return std::nullopt;
}

Configuration ConfigSpace::make(const std::vector<std::pair<std::string, ParamValue>>& named) const {
  std::vector<ParamValue> values(params_.size());
  for (const auto& [name, value] : named) {
    const auto index = index_of(name);
    if (!index) throw SpaceError("unknown parameter '" + name + "'");
    values[*index] = value;
  }
  return Configuration(std::move(values));
}

const ParamValue& ConfigSpace::get(const Configuration& config, std::string_view name) const {
  const auto index = index_of(name);
  if (!index) throw SpaceError("unknown parameter '" + std::string(name) + "'");
  return config[*index];
}

Configuration sample(const ConfigSpace& space, Rng& rng) {
  std::vector<ParamValue> values;
  values.reserve(space.size());
  for (const auto& p : space.params()) values.push_back(p.sample(rng));
  return Configuration(std::move(values));
}

Configuration default_config(const ConfigSpace& space) {
  std::vector<ParamValue> values;
  values.reserve(space.size());
  for (const auto& p : space.params()) values.push_back(p.default_value());
  return Configuration(std::move(values));
}

std::optional<std::string> validate(const ConfigSpace& space, const Configuration& config) {
  if (config.size() != space.size()) {
    std::ostringstream out;
    out << "configuration has " << config.size() << " values, space has " << space.size()
        << " parameters";
    return out.str();
  }
  for (std::size_t i = 0; i < space.size(); ++i) {
    if (auto problem = space[i].check(config[i])) return problem;
  }
  return std::nullopt;
}

std::string format_value(const ParamValue& value) {
  struct Visitor {
    std::string operator()(std::monostate) const { return "<unset>"; }
    std::string operator()(double x) const {
      std::ostringstream out;
      out.precision(17);
      out << x;
      return out.str();
    }
    std::string operator()(std::int64_t x) const { return std::to_string(x); }
    std::string operator()(const std::string& s) const { return s; }
  };
  return std::visit(Visitor{}, value);
}

ConfigSpace random_forest_space() {
  return ConfigSpace({
      ParamSpec::real("colsample_bytree", 0.20, 0.80, 0.70),
      ParamSpec::real("subsample", 0.20, 0.80, 0.66),
      ParamSpec::integer("num_leaves", 4, 64, 32),
      ParamSpec::integer("min_child_samples", 1, 100, 20),
      ParamSpec::integer("max_depth", 4, 12, 12),
  });
}

ConfigSpace decision_tree_space() {
  return ConfigSpace({
      ParamSpec::categorical("criterion", {"gini", "entropy"}, "gini"),
      ParamSpec::integer("max_depth", 1, 20, 20),
      ParamSpec::integer("min_samples_split", 2, 20, 2),
      ParamSpec::integer("min_samples_leaf", 1, 20, 1),
  });
}

ConfigSpace svm_space() {
  return ConfigSpace({
      ParamSpec::log_real("tol", 1e-5, 1e-1, 1e-4),
      ParamSpec::log_real("C", 0.03125, 32768.0, 1.0),
  });
}

}  // namespace qboost
