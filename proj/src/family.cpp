#include "lcts/family.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "lcts/errors.hpp"

namespace lcts {

namespace {

void check_dim(const FamilySpec& f, const Vector& theta) {
  if (theta.size() != f.dim) {
    throw DimensionMismatch("theta has dimension " + std::to_string(theta.size()) +
                            ", family expects " + std::to_string(f.dim));
  }
}

}  // namespace

double condition_number(const FamilySpec& f) {
  if (!(f.m > 0.0) || !(f.nu > 0.0)) {
    throw InvalidFamily("condition number needs m > 0 and nu > 0");
  }
  return std::max(f.L / f.m, f.L / f.nu);
}

void validate_family(const FamilySpec& f) {
  if (f.dim < 1) throw InvalidFamily("family dimension must be positive");
  if (f.alpha.size() != f.dim) throw InvalidFamily("alpha must have length dim");
  if (!(f.L > 0.0)) throw InvalidFamily("L must be positive");
  if (!f.log_likelihood || !f.grad_log_likelihood) {
    throw InvalidFamily("family is missing its likelihood closures");
  }
  condition_number(f);
}

FamilySpec gaussian_family(double sigma2, Vector alpha) {
  if (!(sigma2 > 0.0)) throw InvalidFamily("sigma2 must be positive");
  FamilySpec f;
  f.dim = static_cast<int>(alpha.size());
  const double norm2 = alpha.squaredNorm();
  const double log_norm = 0.5 * std::log(2.0 * std::numbers::pi * sigma2);

  f.log_likelihood = [alpha, sigma2, log_norm](const Vector& theta, double x) {
    const double r = x - alpha.dot(theta);
    return -r * r / (2.0 * sigma2) - log_norm;
  };
  f.grad_log_likelihood = [alpha, sigma2](const Vector& theta, double x) -> Vector {
    return alpha * ((x - alpha.dot(theta)) / sigma2);
  };
  f.accumulate_grad = [alpha, sigma2](const Vector& theta, std::span<const double> xs,
                                      Vector& out) {
    const double mu = alpha.dot(theta);
    // Eight independent partial sums; the reduction order is fixed, so the
    // result is deterministic.
    double acc[8] = {0, 0, 0, 0, 0, 0, 0, 0};
    const std::size_t n = xs.size();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
      for (std::size_t j = 0; j < 8; ++j) acc[j] += xs[i + j] - mu;
    }
    for (; i < n; ++i) acc[i % 8] += xs[i] - mu;
    const double s = ((acc[0] + acc[1]) + (acc[2] + acc[3])) +
                     ((acc[4] + acc[5]) + (acc[6] + acc[7]));
    out += alpha * (s / sigma2);
  };

  // The rank-one Hessian alpha alpha'/sigma2 is only strongly concave in 1-d.
  f.L = norm2 / sigma2;
  f.m = (f.dim == 1) ? norm2 / sigma2 : 0.0;
  f.nu = 1.0 / sigma2;
  f.L_star = std::sqrt(norm2) / sigma2;
  f.alpha = std::move(alpha);
  f.noise_variance = sigma2;
  return f;
}

double mean_reward(const FamilySpec& f, const Vector& theta) {
  check_dim(f, theta);
  return f.alpha.dot(theta);
}

void accumulate_grad_log_likelihood(const FamilySpec& f, const Vector& theta,
                                    std::span<const double> xs, Vector& out) {
  if (f.accumulate_grad) {
    f.accumulate_grad(theta, xs, out);
    return;
  }
  for (double x : xs) out += f.grad_log_likelihood(theta, x);
}

PriorSpec gaussian_prior(Vector mean, double variance) {
  if (!(variance > 0.0)) throw InvalidFamily("prior variance must be positive");
  PriorSpec p;
  const double d = static_cast<double>(mean.size());
  const double log_norm = 0.5 * d * std::log(2.0 * std::numbers::pi * variance);
  p.log_density = [mean, variance, log_norm](const Vector& theta) {
    return -(theta - mean).squaredNorm() / (2.0 * variance) - log_norm;
  };
  p.grad_log_density = [mean, variance](const Vector& theta) -> Vector {
    return (mean - theta) / variance;
  };
  p.gaussian = GaussianPriorParams{std::move(mean), variance};
  return p;
}

double gaussian_log_B(const GaussianPriorParams& prior, const Vector& theta_star) {
  if (theta_star.size() != prior.mean.size()) {
    throw DimensionMismatch("theta* and prior mean differ in dimension");
  }
  return (theta_star - prior.mean).squaredNorm() / (2.0 * prior.variance);
}

PriorSpec with_log_B(PriorSpec prior, const Vector& theta_star) {
  if (!prior.gaussian) throw InvalidFamily("log B is only computed for Gaussian priors");
  prior.log_B = gaussian_log_B(*prior.gaussian, theta_star);
  return prior;
}

TrueArm gaussian_true_arm(const FamilySpec& f, Vector theta_star) {
  if (!f.noise_variance) throw InvalidFamily("gaussian_true_arm needs a Gaussian family");
  const double mean = mean_reward(f, theta_star);
  const double sd = std::sqrt(*f.noise_variance);
  TrueArm arm;
  arm.theta_star = std::move(theta_star);
  arm.reward_sampler = [mean, sd](Rng& rng) {
    std::normal_distribution<double> dist(mean, sd);
    return dist(rng);
  };
  return arm;
}

}  // namespace lcts
