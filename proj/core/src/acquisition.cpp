#include "qboost/acquisition.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qboost {

double normal_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi); }

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double expected_improvement(double mu, double sigma, double f_best) {
  if (sigma < 0.0) throw std::invalid_argument("expected_improvement: negative sigma");
  const double gap = mu - f_best;
  if (sigma == 0.0) return std::max(gap, 0.0);
  const double z = gap / sigma;
  return std::max(0.0, gap * normal_cdf(z) + sigma * normal_pdf(z));
}

double exploration_scale(std::span<const double> scores) {
  if (scores.size() < 2) return 0.0;
  const auto n = static_cast<double>(scores.size());
  double mean = 0.0;
  for (double s : scores) mean += s;
  mean /= n;
  double var = 0.0;
  for (double s : scores) var += (s - mean) * (s - mean);
  return std::sqrt(var / n);
}

}  // namespace qboost
