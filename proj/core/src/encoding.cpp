#include "qboost/encoding.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qboost {

EncodingLayout::EncodingLayout(const ConfigSpace& space) {
  slots_.reserve(space.size());
  for (const auto& p : space.params()) {
    const std::size_t width = p.is_numeric() ? 1 : p.categories().size();
    slots_.push_back({dims_, width});
    dims_ += width;
  }
  max_distance_ = static_cast<double>(dims_);
}

double to_unit(const ParamSpec& spec, double value) {
  double unit = 0.0;
  if (spec.kind() == ParamKind::log_real) {
    const double lo = std::log(spec.lower());
    unit = (std::log(value) - lo) / (std::log(spec.upper()) - lo);
  } else {
    unit = (value - spec.lower()) / (spec.upper() - spec.lower());
  }
  return std::clamp(unit, 0.0, 1.0);
}

double from_unit(const ParamSpec& spec, double unit) {
  if (spec.kind() == ParamKind::log_real) {
    const double lo = std::log(spec.lower());
    const double value = std::exp(lo + unit * (std::log(spec.upper()) - lo));
    return std::clamp(value, spec.lower(), spec.upper());
  }
  return spec.lower() + unit * (spec.upper() - spec.lower());
}

void encode_into(const EncodingLayout& layout, const ConfigSpace& space,
                 const Configuration& config, std::span<double> out) {
  const auto& slots = layout.slots();
  for (std::size_t i = 0; i < space.size(); ++i) {
    const ParamSpec& spec = space[i];
    const ParamSlot slot = slots[i];
    switch (spec.kind()) {
      case ParamKind::real:
      case ParamKind::log_real:
        out[slot.offset] = to_unit(spec, config.as_real(i));
        break;
      case ParamKind::integer:
        out[slot.offset] = to_unit(spec, static_cast<double>(config.as_integer(i)));
        break;
      case ParamKind::categorical: {
        const std::size_t hot = *spec.category_index(config.as_label(i));
        for (std::size_t c = 0; c < slot.width; ++c) out[slot.offset + c] = c == hot ? 1.0 : 0.0;
        break;
      }
    }
  }
}

ConfigVector encode(const EncodingLayout& layout, const ConfigSpace& space,
                    const Configuration& config) {
  if (layout.slots().size() != space.size()) {
    throw SpaceError("encoding layout does not belong to this space");
  }
  if (auto problem = validate(space, config)) throw SpaceError(*problem);
  ConfigVector out(layout.dims());
  encode_into(layout, space, config, out);
  return out;
}

double manhattan(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("manhattan: dimension mismatch");
  double total = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) total += std::abs(a[i] - b[i]);
  return total;
}

}  // namespace qboost
