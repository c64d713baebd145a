#pragma once

#include <span>

namespace qboost {

/// Optimistic quantile plus the sparsity bonus scaled by s.
inline double hyperboost_acq(double q_hat, double scale, double delta) {
  return q_hat + scale * delta;
}

double normal_pdf(double z);
double normal_cdf(double z);

/// Closed-form Expected Improvement over f_best for a Gaussian N(mu, sigma^2),
/// maximization orientation. sigma = 0 gives max(mu - f_best, 0).
double expected_improvement(double mu, double sigma, double f_best);

/// Population standard deviation; 0 for fewer than two scores.
double exploration_scale(std::span<const double> scores);

}  // namespace qboost
