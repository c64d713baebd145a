#include "qboost/objectives.hpp"

#include <bit>
#include <cmath>
#include <memory>
#include <numbers>
#include <stdexcept>

#include "qboost/random.hpp"

namespace qboost {

SyntheticObjective::SyntheticObjective(std::string name, ConfigSpace space, Response response,
                                       double noise_sd)
    : name_(std::move(name)),
      space_(std::move(space)),
      layout_(space_),
      response_(std::move(response)),
      noise_sd_(noise_sd) {
  if (!(noise_sd_ >= 0.0)) throw std::invalid_argument("objective: noise_sd must be >= 0");
}

double SyntheticObjective::response(const Configuration& config) const {
  return response_(encode(layout_, space_, config));
}

double SyntheticObjective::noise(const Configuration& config, std::uint64_t seed) const {
  const ConfigVector v = encode(layout_, space_, config);
  std::uint64_t h = mix64(seed ^ 0x5bd1e9955bd1e995ULL);
  for (double x : v) h = mix64(h ^ std::bit_cast<std::uint64_t>(x));
  const double u1 = static_cast<double>(h >> 11) * 0x1.0p-53;
  const double u2 = static_cast<double>(mix64(h) >> 11) * 0x1.0p-53;
  return standard_normal(u1, u2);
}

double SyntheticObjective::evaluate(const Configuration& config, std::uint64_t seed) const {
  const double clean = response(config);
  if (noise_sd_ == 0.0) return clean;
  return clean + noise_sd_ * noise(config, seed);
}

Evaluator SyntheticObjective::evaluator() const {
  auto self = std::make_shared<const SyntheticObjective>(*this);
  return [self](const Configuration& config, std::uint64_t seed) {
    return self->evaluate(config, seed);
  };
}

double branin_value(double x1, double x2) {
  constexpr double pi = std::numbers::pi;
  const double b = 5.1 / (4.0 * pi * pi);
  const double c = 5.0 / pi;
  const double t = 1.0 / (8.0 * pi);
  const double inner = x2 - b * x1 * x1 + c * x1 - 6.0;
  return inner * inner + 10.0 * (1.0 - t) * std::cos(x1) + 10.0;
}

SyntheticObjective branin(double noise_sd) {
  ConfigSpace space({ParamSpec::real("x1", -5.0, 10.0, 2.5), ParamSpec::real("x2", 0.0, 15.0, 7.5)});
  SyntheticObjective obj(
      "branin", space,
      [](std::span<const double> v) {
        return -branin_value(-5.0 + 15.0 * v[0], 15.0 * v[1]);
      },
      noise_sd);
  obj.optimum_point = std::vector<double>{std::numbers::pi, 2.275};
  obj.optimum_value = -0.39788735772973816;
  obj.description = "negated Branin; maximizers (-pi, 12.275), (pi, 2.275), (9.42478, 2.475)";
  return obj;
}

namespace {

// base + amplitude * exp(-sum curvature_i (v_i - anchor_i)^2) - sum penalty_i v_i
struct AnchoredBump {
  std::vector<double> anchor;
  std::vector<double> curvature;
  std::vector<double> penalty;
  double base = 0.0;
  double amplitude = 1.0;

  double operator()(std::span<const double> v) const {
    double exponent = 0.0;
    double offset = 0.0;
    for (std::size_t i = 0; i < anchor.size(); ++i) {
      const double d = v[i] - anchor[i];
      exponent += curvature[i] * d * d;
      offset += penalty[i] * v[i];
    }
    return base + amplitude * std::exp(-exponent) - offset;
  }
};

// `numeric_curvature` lists one weight per numeric parameter, in order;
// `category_penalty` one penalty per category of each categorical, in order.
SyntheticObjective anchored(std::string name, ConfigSpace space, const Configuration& anchor,
                            const std::vector<double>& numeric_curvature,
                            const std::vector<std::vector<double>>& category_penalty, double base,
                            double amplitude, double noise_sd) {
  const EncodingLayout layout(space);
  AnchoredBump bump;
  bump.anchor = encode(layout, space, anchor);
  bump.curvature.assign(layout.dims(), 0.0);
  bump.penalty.assign(layout.dims(), 0.0);
  bump.base = base;
  bump.amplitude = amplitude;
  std::size_t numeric = 0;
  std::size_t categorical = 0;
  for (std::size_t i = 0; i < space.size(); ++i) {
    const ParamSlot slot = layout.slots()[i];
    if (space[i].is_numeric()) {
      bump.curvature[slot.offset] = numeric_curvature.at(numeric++);
    } else {
      const auto& pen = category_penalty.at(categorical++);
      for (std::size_t c = 0; c < slot.width; ++c) bump.penalty[slot.offset + c] = pen.at(c);
    }
  }
  SyntheticObjective obj(std::move(name), std::move(space), bump, noise_sd);
  obj.optimum_config = anchor;
  obj.optimum_value = base + amplitude;
  return obj;
}

}  // namespace

SyntheticObjective table_space_objective(TableSpace which, double noise_sd) {
  switch (which) {
    case TableSpace::rf: {
      ConfigSpace space = random_forest_space();
      const Configuration anchor = space.make({{"colsample_bytree", 0.45},
                                               {"subsample", 0.60},
                                               {"num_leaves", std::int64_t{24}},
                                               {"min_child_samples", std::int64_t{10}},
                                               {"max_depth", std::int64_t{9}}});
      auto obj = anchored("rf", std::move(space), anchor, {4.0, 3.0, 5.0, 6.0, 2.0}, {}, 0.5, 0.45,
                          noise_sd);
      obj.description = "bump on the random-forest space, peak 0.95 at the anchor";
      return obj;
    }
    case TableSpace::dt: {
      ConfigSpace space = decision_tree_space();
      const Configuration anchor = space.make({{"criterion", std::string("entropy")},
                                               {"max_depth", std::int64_t{8}},
                                               {"min_samples_split", std::int64_t{6}},
                                               {"min_samples_leaf", std::int64_t{3}}});
      auto obj = anchored("dt", std::move(space), anchor, {5.0, 3.0, 6.0}, {{0.03, 0.0}}, 0.5, 0.45,
                          noise_sd);
      obj.description = "bump on the decision-tree space, peak 0.95 at the anchor, gini costs 0.03";
      return obj;
    }
    case TableSpace::svm: {
      ConfigSpace space = svm_space();
      const Configuration anchor = space.make({{"tol", 1e-3}, {"C", 128.0}});
      auto obj = anchored("svm", std::move(space), anchor, {2.0, 8.0}, {}, 0.5, 0.45, noise_sd);
      obj.description = "bump on the log-scaled SVM space, peak 0.95 at the anchor";
      return obj;
    }
  }
  throw std::invalid_argument("unknown table space");
}

SyntheticObjective bump_objective(std::size_t dims, double noise_sd) {
  if (dims == 0) throw std::invalid_argument("bump objective needs at least one dimension");
  std::vector<ParamSpec> params;
  std::vector<std::pair<std::string, ParamValue>> anchor_values;
  for (std::size_t j = 0; j < dims; ++j) {
    const std::string name = "x" + std::to_string(j);
    params.push_back(ParamSpec::real(name, 0.0, 1.0, 0.5));
    // Golden-ratio sequence keeps anchors spread and away from the bounds.
    const double frac = std::fmod(0.5 + 0.6180339887498949 * static_cast<double>(j + 1), 1.0);
    anchor_values.emplace_back(name, 0.2 + 0.6 * frac);
  }
  ConfigSpace space(std::move(params));
  const Configuration anchor = space.make(anchor_values);
  auto obj = anchored("bump" + std::to_string(dims), std::move(space), anchor,
                      std::vector<double>(dims, 3.0), {}, 0.0, 1.0, noise_sd);
  obj.description = "Gaussian bump on the unit cube, peak 1 at the anchor";
  return obj;
}

SyntheticObjective quadratic_objective(double noise_sd) {
  ConfigSpace space({ParamSpec::real("x", 0.0, 1.0, 0.5)});
  SyntheticObjective obj(
      "quadratic", std::move(space),
      [](std::span<const double> v) { return -(v[0] - 0.7) * (v[0] - 0.7); }, noise_sd);
  obj.optimum_point = std::vector<double>{0.7};
  obj.optimum_value = 0.0;
  obj.description = "-(x - 0.7)^2 on [0, 1]";
  return obj;
}

SyntheticObjective space_default_objective(std::string name, ConfigSpace space, double noise_sd) {
  const Configuration anchor = default_config(space);
  std::vector<double> curvature;
  std::vector<std::vector<double>> penalties;
  for (const auto& p : space.params()) {
    if (p.is_numeric()) {
      curvature.push_back(4.0);
    } else {
      std::vector<double> pen(p.categories().size(), 0.05);
      pen[*p.category_index(std::get<std::string>(p.default_value()))] = 0.0;
      penalties.push_back(std::move(pen));
    }
  }
  auto obj = anchored(std::move(name), std::move(space), anchor, curvature, penalties, 0.0, 1.0,
                      noise_sd);
  obj.description = "Gaussian bump anchored at the space defaults, peak 1";
  return obj;
}

SyntheticObjective make_objective(const std::string& name, double noise_sd) {
  if (name == "branin") return branin(noise_sd);
  if (name == "rf") return table_space_objective(TableSpace::rf, noise_sd);
  if (name == "dt") return table_space_objective(TableSpace::dt, noise_sd);
  if (name == "svm") return table_space_objective(TableSpace::svm, noise_sd);
  if (name == "quadratic") return quadratic_objective(noise_sd);
  if (name.rfind("bump", 0) == 0 && name.size() > 4) {
    const std::string digits = name.substr(4);
    if (digits.find_first_not_of("0123456789") == std::string::npos) {
      return bump_objective(std::stoul(digits), noise_sd);
    }
  }
  throw std::invalid_argument("unknown objective '" + name + "'");
}

std::vector<std::string> builtin_objective_names() {
  return {"branin", "rf", "dt", "svm", "quadratic", "bump<k>"};
}

}  // namespace qboost
