#pragma once

#include <functional>
#include <optional>
#include <span>

#include <Eigen/Core>

#include "lcts/rng.hpp"

namespace lcts {

using Vector = Eigen::VectorXd;

/// A parametric likelihood family p(x | theta), log-concave in theta, together
/// with the constants the samplers and the diagnostics consume. The constants
/// are trusted inputs; nothing here estimates them.
struct FamilySpec {
  int dim = 1;
  std::function<double(const Vector& theta, double x)> log_likelihood;
  std::function<Vector(const Vector& theta, double x)> grad_log_likelihood;
  /// Optional fast path: out += sum_i grad log p(xs[i] | theta). Must agree
  /// with grad_log_likelihood summed pointwise. Left empty, the pointwise
  /// closure is used.
  std::function<void(const Vector& theta, std::span<const double> xs, Vector& out)>
      accumulate_grad;

  double m = 0.0;       // strong concavity of log p in theta
  double L = 0.0;       // smoothness of log p in theta
  double nu = 0.0;      // strong log-concavity of the reward law in x
  double L_star = 0.0;  // Lipschitz constant of grad_theta log p in x
  Vector alpha;         // E[X | theta] = alpha' theta

  /// Reward variance for Gaussian families; enables the conjugate samplers.
  std::optional<double> noise_variance;
};

struct GaussianPriorParams {
  Vector mean;
  double variance = 1.0;  // isotropic
};

/// Log-concave prior pi(theta).
struct PriorSpec {
  std::function<double(const Vector& theta)> log_density;  // up to a constant
  std::function<Vector(const Vector& theta)> grad_log_density;
  /// log max pi - log pi(theta*), only when theta* is known (diagnostics).
  std::optional<double> log_B;
  /// Set for Gaussian priors: enables exact prior draws and a closed-form mode.
  std::optional<GaussianPriorParams> gaussian;
};

/// The environment side of an arm: theta* and a sampler for p(x | theta*).
struct TrueArm {
  Vector theta_star;
  std::function<double(Rng&)> reward_sampler;
};

/// kappa = max(L/m, L/nu). Throws InvalidFamily unless m, nu > 0.
double condition_number(const FamilySpec& f);

/// Throws InvalidFamily if the constants are unusable by the samplers.
void validate_family(const FamilySpec& f);

/// Gaussian likelihood N(x; alpha' theta, sigma2). For d = 1 and alpha = [1],
/// m = L = nu = L_star = 1/sigma2.
FamilySpec gaussian_family(double sigma2, Vector alpha);

/// alpha' theta.
double mean_reward(const FamilySpec& f, const Vector& theta);

/// out += sum over xs of grad log p(x | theta), using the fast path when set.
void accumulate_grad_log_likelihood(const FamilySpec& f, const Vector& theta,
                                    std::span<const double> xs, Vector& out);

PriorSpec gaussian_prior(Vector mean, double variance);

/// log B for a Gaussian prior: |theta* - mean|^2 / (2 variance).
double gaussian_log_B(const GaussianPriorParams& prior, const Vector& theta_star);

/// Copy of `prior` with log_B filled in from theta*. Gaussian priors only.
PriorSpec with_log_B(PriorSpec prior, const Vector& theta_star);

/// Rewards drawn from the family's own likelihood at theta*.
TrueArm gaussian_true_arm(const FamilySpec& f, Vector theta_star);

}  // namespace lcts
