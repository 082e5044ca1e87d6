#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "lcts/errors.hpp"
#include "lcts/family.hpp"
#include "oracles.hpp"

using namespace lcts;

namespace {

FamilySpec with_constants(double m, double L, double nu) {
  FamilySpec f = gaussian_family(1.0, Vector::Ones(1));
  f.m = m;
  f.L = L;
  f.nu = nu;
  return f;
}

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

}  // namespace

TEST(ConditionNumber, Examples) {
  EXPECT_DOUBLE_EQ(condition_number(with_constants(1, 1, 1)), 1.0);
  EXPECT_DOUBLE_EQ(condition_number(with_constants(0.5, 2, 1)), 4.0);
  EXPECT_DOUBLE_EQ(condition_number(with_constants(1, 1, 0.25)), 4.0);
}

TEST(ConditionNumber, RejectsNonpositiveConstants) {
  EXPECT_THROW(condition_number(with_constants(0, 1, 1)), InvalidFamily);
  EXPECT_THROW(condition_number(with_constants(1, 1, -2)), InvalidFamily);
}

TEST(ConditionNumber, AtLeastOneWhenLDominates) {
  std::mt19937 gen(7);
  std::uniform_real_distribution<double> u(0.1, 5.0);
  for (int i = 0; i < 100; ++i) {
    const double m = u(gen), nu = u(gen);
    const double L = std::max(m, nu) * (1.0 + u(gen));
    EXPECT_GE(condition_number(with_constants(m, L, nu)), 1.0);
  }
}

TEST(GaussianFamily, Examples) {
  const auto f = gaussian_family(1.0, vec({1}));
  EXPECT_NEAR(f.log_likelihood(vec({0}), 0.0), -0.5 * std::log(2 * std::numbers::pi), 1e-15);
  EXPECT_NEAR(f.log_likelihood(vec({0}), 0.0), -0.91894, 1e-5);
  EXPECT_DOUBLE_EQ(f.grad_log_likelihood(vec({1}), 3.0)[0], 2.0);
  EXPECT_DOUBLE_EQ(mean_reward(f, vec({4.2})), 4.2);
}

TEST(GaussianFamily, ConstantsAreInverseVariance) {
  const auto f = gaussian_family(2.5, vec({1}));
  EXPECT_DOUBLE_EQ(f.m, 0.4);
  EXPECT_DOUBLE_EQ(f.L, 0.4);
  EXPECT_DOUBLE_EQ(f.nu, 0.4);
  EXPECT_DOUBLE_EQ(f.L_star, 0.4);
  EXPECT_EQ(f.dim, 1);
  EXPECT_THROW(gaussian_family(0.0, vec({1})), InvalidFamily);
}

TEST(GaussianFamily, UnitVarianceGradientIsResidual) {
  const auto f = gaussian_family(1.0, vec({1}));
  std::mt19937 gen(1);
  std::normal_distribution<double> z(0, 3);
  for (int i = 0; i < 50; ++i) {
    const double th = z(gen), x = z(gen);
    EXPECT_EQ(f.grad_log_likelihood(vec({th}), x)[0], x - th);
  }
}

TEST(MeanReward, Examples) {
  EXPECT_DOUBLE_EQ(mean_reward(gaussian_family(1.0, vec({1, 0})), vec({3, 9})), 3.0);
  EXPECT_DOUBLE_EQ(mean_reward(gaussian_family(1.0, vec({0, 0, 0})), vec({5, -2, 7})), 0.0);
  EXPECT_NEAR(mean_reward(gaussian_family(1.0, vec({0.6, 0.8})), vec({1, 1})), 1.4, 1e-15);
}

TEST(MeanReward, DimensionMismatch) {
  EXPECT_THROW(mean_reward(gaussian_family(1.0, vec({1, 0})), vec({1})), DimensionMismatch);
}

TEST(GaussianFamily, GradientMatchesFiniteDifferences) {
  std::mt19937 gen(11);
  std::normal_distribution<double> z(0, 2);
  for (const auto& alpha : {vec({1}), vec({0.6, 0.8}), vec({1.5, -0.5, 2.0})}) {
    for (double sigma2 : {0.5, 1.0, 3.0}) {
      const auto f = gaussian_family(sigma2, alpha);
      for (int i = 0; i < 100; ++i) {
        Vector th(alpha.size());
        for (auto& v : th) v = z(gen);
        const double x = z(gen);
        const Vector g = f.grad_log_likelihood(th, x);
        const Vector fd = oracle::finite_diff_grad(
            [&](const Vector& t) { return f.log_likelihood(t, x); }, th);
        for (Eigen::Index j = 0; j < th.size(); ++j) {
          EXPECT_LE(std::abs(g[j] - fd[j]), 1e-6 * std::max(1.0, std::abs(g[j])));
        }
      }
    }
  }
}

TEST(GaussianFamily, FastPathMatchesPointwiseSum) {
  const auto f = gaussian_family(1.7, vec({0.6, 0.8}));
  std::mt19937 gen(3);
  std::normal_distribution<double> z(2, 1);
  std::vector<double> xs(37);
  for (auto& x : xs) x = z(gen);
  const Vector th = vec({0.3, -1.1});
  Vector fast = Vector::Zero(2), slow = Vector::Zero(2);
  accumulate_grad_log_likelihood(f, th, xs, fast);
  for (double x : xs) slow += f.grad_log_likelihood(th, x);
  EXPECT_NEAR(fast[0], slow[0], 1e-12 * std::abs(slow[0]) + 1e-14);
  EXPECT_NEAR(fast[1], slow[1], 1e-12 * std::abs(slow[1]) + 1e-14);
}

// -log p is quadratic in theta, so both sides of the m/L sandwich are tight.
TEST(GaussianFamily, StrongConcavitySandwichIsTight) {
  const auto f = gaussian_family(0.8, vec({1}));
  std::mt19937 gen(5);
  std::uniform_real_distribution<double> u(-5, 5);
  for (int i = 0; i < 200; ++i) {
    const Vector a = vec({u(gen)}), b = vec({u(gen)});
    const double x = u(gen);
    const double lhs_base = -f.log_likelihood(b, x) - f.grad_log_likelihood(b, x).dot(a - b);
    const double sq = (a - b).squaredNorm();
    const double mid = -f.log_likelihood(a, x);
    EXPECT_LE(lhs_base + 0.5 * f.m * sq - mid, 1e-10);
    EXPECT_LE(mid - (lhs_base + 0.5 * f.L * sq), 1e-10);
    EXPECT_NEAR(lhs_base + 0.5 * f.m * sq, mid, 1e-10);
  }
}

TEST(GaussianPrior, GradientMatchesFiniteDifferences) {
  std::mt19937 gen(13);
  std::normal_distribution<double> z(0, 3);
  const auto prior = gaussian_prior(vec({1.0, -2.0}), 2.5);
  for (int i = 0; i < 100; ++i) {
    const Vector th = vec({z(gen), z(gen)});
    const Vector g = prior.grad_log_density(th);
    const Vector fd = oracle::finite_diff_grad(prior.log_density, th);
    for (int j = 0; j < 2; ++j) EXPECT_LE(std::abs(g[j] - fd[j]), 1e-6 * std::max(1.0, std::abs(g[j])));
  }
}

TEST(GaussianPrior, LogBIsNonnegativeAndZeroAtMode) {
  const auto prior = gaussian_prior(vec({7.5}), 4.0);
  EXPECT_DOUBLE_EQ(gaussian_log_B(*prior.gaussian, vec({7.5})), 0.0);
  EXPECT_DOUBLE_EQ(gaussian_log_B(*prior.gaussian, vec({3.5})), 2.0);
  const auto with = with_log_B(prior, vec({1.0}));
  ASSERT_TRUE(with.log_B.has_value());
  EXPECT_GE(*with.log_B, 0.0);
  // log B = max log pi - log pi(theta*).
  EXPECT_NEAR(*with.log_B, prior.log_density(vec({7.5})) - prior.log_density(vec({1.0})), 1e-12);
  EXPECT_THROW(gaussian_prior(vec({0}), 0.0), InvalidFamily);
}

TEST(TrueArm, RewardMomentsMatchFamily) {
  const auto f = gaussian_family(2.0, vec({0.6, 0.8}));
  const auto arm = gaussian_true_arm(f, vec({1.0, 2.0}));
  Rng rng(99);
  const std::size_t n = 1000000;
  double s = 0, ss = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = arm.reward_sampler(rng);
    s += x;
    ss += x * x;
  }
  const double mean = s / n, var = ss / n - mean * mean;
  const double expected_mean = 0.6 + 1.6, expected_var = 1.0 / f.nu;
  EXPECT_LE(std::abs(mean - expected_mean), 5.0 * std::sqrt(expected_var / n));
  EXPECT_LE(std::abs(var - expected_var), 5.0 * expected_var * std::sqrt(2.0 / n));
}

TEST(ValidateFamily, HighDimensionalGaussianIsNotStronglyConcave) {
  EXPECT_NO_THROW(validate_family(gaussian_family(1.0, vec({1}))));
  EXPECT_THROW(validate_family(gaussian_family(1.0, vec({1, 0}))), InvalidFamily);
}
