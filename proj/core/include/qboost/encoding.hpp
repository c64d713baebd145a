#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "qboost/config_space.hpp"

namespace qboost {

/// Unit-scaled numeric coordinates followed by one-hot blocks, laid out in
/// declaration order of the space.
using ConfigVector = std::vector<double>;

struct ParamSlot {
  std::size_t offset = 0;
  std::size_t width = 0;
};

/// Where each parameter lands in a ConfigVector, plus the normalization
/// constant m for nearest-neighbor distances: the number of numeric
/// parameters plus the category count of every categorical parameter.
class EncodingLayout {
 public:
  EncodingLayout() = default;
  explicit EncodingLayout(const ConfigSpace& space);

  std::size_t dims() const noexcept { return dims_; }
  double max_distance() const noexcept { return max_distance_; }
  const std::vector<ParamSlot>& slots() const noexcept { return slots_; }

  friend bool operator==(const EncodingLayout&, const EncodingLayout&) = default;

 private:
  std::vector<ParamSlot> slots_;
  std::size_t dims_ = 0;
  double max_distance_ = 0.0;
};

inline EncodingLayout layout_of(const ConfigSpace& space) { return EncodingLayout(space); }

/// Maps a numeric value of `spec` to [0, 1]; log-scaled parameters are scaled
/// in log space.
double to_unit(const ParamSpec& spec, double value);

/// Inverse of to_unit for numeric parameters (integers are not rounded).
double from_unit(const ParamSpec& spec, double unit);

/// Throws SpaceError when `config` does not validate against `space`.
ConfigVector encode(const EncodingLayout& layout, const ConfigSpace& space,
                    const Configuration& config);

/// Writes the encoding into `out`, which must have layout.dims() entries.
/// Skips validation; callers guarantee `config` came from `space`.
void encode_into(const EncodingLayout& layout, const ConfigSpace& space,
                 const Configuration& config, std::span<double> out);

double manhattan(std::span<const double> a, std::span<const double> b);

}  // namespace qboost
