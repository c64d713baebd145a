#include "qboost/random.hpp"

#include <cmath>
#include <numbers>

namespace qboost {

double standard_normal(double u1, double u2) {
  // u1 in [0, 1); shift to (0, 1] so the log is finite.
  const double radius = std::sqrt(-2.0 * std::log(1.0 - u1));
  return radius * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace qboost
