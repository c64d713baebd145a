#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "qboost/acquisition.hpp"

namespace qboost {
namespace {

// E[max(y - f_best, 0)] for y ~ N(mu, sigma^2) by composite Simpson over
// mu +- 12 sigma.
double ei_by_quadrature(double mu, double sigma, double f_best) {
  const int n = 20000;
  const double lo = mu - 12 * sigma;
  const double hi = mu + 12 * sigma;
  const double h = (hi - lo) / n;
  auto f = [&](double y) {
    const double z = (y - mu) / sigma;
    return std::max(y - f_best, 0.0) * std::exp(-0.5 * z * z) / (sigma * std::sqrt(2 * M_PI));
  };
  double s = f(lo) + f(hi);
  for (int i = 1; i < n; ++i) s += f(lo + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

TEST(HyperboostAcq, DirectFormula) {
  EXPECT_DOUBLE_EQ(hyperboost_acq(0.8, 0.1, 0.5), 0.85);
  EXPECT_EQ(hyperboost_acq(0.8, 0.1, 0.0), 0.8);
  EXPECT_EQ(hyperboost_acq(0.8, 0.0, 0.7), 0.8);
}

TEST(HyperboostAcq, MonotoneInEachArgument) {
  for (double q = -1; q <= 1; q += 0.25) {
    for (double s = 0; s <= 1; s += 0.25) {
      for (double d = 0; d <= 1; d += 0.25) {
        EXPECT_LE(hyperboost_acq(q, s, d), hyperboost_acq(q + 0.1, s, d));
        EXPECT_LE(hyperboost_acq(q, s, d), hyperboost_acq(q, s + 0.1, d));
        EXPECT_LE(hyperboost_acq(q, s, d), hyperboost_acq(q, s, d + 0.1));
      }
    }
  }
}

TEST(ExpectedImprovement, AtTheIncumbent) {
  EXPECT_NEAR(expected_improvement(0.0, 1.0, 0.0), 1.0 / std::sqrt(2 * M_PI), 1e-12);
  EXPECT_NEAR(expected_improvement(1.0, 2.0, 1.0), 2.0 / std::sqrt(2 * M_PI), 1e-12);
}

TEST(ExpectedImprovement, ThreeSigmaAbove) {
  EXPECT_NEAR(expected_improvement(3.0, 1.0, 0.0), ei_by_quadrature(3.0, 1.0, 0.0), 1e-9);
  EXPECT_NEAR(expected_improvement(3.0, 1.0, 0.0), 3.0004, 1e-4);
}

TEST(ExpectedImprovement, ZeroSigma) {
  EXPECT_EQ(expected_improvement(-1.0, 0.0, 0.0), 0.0);
  EXPECT_EQ(expected_improvement(0.0, 0.0, 0.0), 0.0);
  EXPECT_EQ(expected_improvement(2.0, 0.0, 0.5), 1.5);
  EXPECT_THROW(expected_improvement(0.0, -1.0, 0.0), std::invalid_argument);
}

TEST(ExpectedImprovement, MatchesQuadratureOnGrid) {
  int points = 0;
  for (double mu : {-2.0, -0.5, 0.0, 0.7, 2.5}) {
    for (double sigma : {0.1, 1.0, 3.0, 0.5}) {
      const double f_best = 0.2;
      EXPECT_NEAR(expected_improvement(mu, sigma, f_best), ei_by_quadrature(mu, sigma, f_best), 1e-6)
          << mu << ' ' << sigma;
      ++points;
    }
  }
  EXPECT_EQ(points, 20);
}

TEST(ExpectedImprovement, LowerBoundsAndLimit) {
  for (double mu = -3; mu <= 3; mu += 0.5) {
    for (double sigma : {1e-12, 1e-3, 0.3, 2.0}) {
      const double ei = expected_improvement(mu, sigma, 0.0);
      EXPECT_GE(ei, 0.0);
      EXPECT_GE(ei, std::max(mu, 0.0) - 1e-12);
    }
    EXPECT_NEAR(expected_improvement(mu, 1e-12, 0.0), std::max(mu, 0.0), 1e-11);
  }
}

TEST(ExplorationScale, Examples) {
  EXPECT_EQ(exploration_scale(std::vector<double>{}), 0.0);
  EXPECT_EQ(exploration_scale(std::vector<double>{3.0}), 0.0);
  EXPECT_EQ(exploration_scale(std::vector<double>{2.0, 2.0, 2.0}), 0.0);
  EXPECT_DOUBLE_EQ(exploration_scale(std::vector<double>{0.0, 2.0}), 1.0);
}

TEST(NormalHelpers, CdfSymmetry) {
  for (double z = -6; z <= 6; z += 0.5) EXPECT_NEAR(normal_cdf(z) + normal_cdf(-z), 1.0, 1e-15);
  EXPECT_DOUBLE_EQ(normal_cdf(0.0), 0.5);
}

}  // namespace
}  // namespace qboost
