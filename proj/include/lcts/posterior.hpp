#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "lcts/family.hpp"

namespace lcts {

/// Everything one arm has seen: its rewards, the pull count, and the
/// Langevin warm start carried between rounds.
class ArmPosteriorState {
 public:
  void push(double x) {
    data_.push_back(x);
    sum_ += x;
  }

  std::span<const double> data() const { return data_; }
  std::size_t n() const { return data_.size(); }
  // Running sum of the data, for the conjugate fast path.
  double sum() const { return sum_; }

  const std::optional<Vector>& warm_start() const { return warm_start_; }
  void set_warm_start(Vector theta) { warm_start_ = std::move(theta); }

 private:
  std::vector<double> data_;
  double sum_ = 0.0;
  std::optional<Vector> warm_start_;
};

struct GaussianPosterior {
  Vector mean;
  double precision = 1.0;  // isotropic

  double variance() const { return 1.0 / precision; }
};

/// U(theta) = -sum_i log p(x_i | theta) - log pi(theta).
double potential(const ArmPosteriorState& state, const FamilySpec& f, const PriorSpec& prior,
                 const Vector& theta);

Vector grad_potential(const ArmPosteriorState& state, const FamilySpec& f,
                      const PriorSpec& prior, const Vector& theta);

/// -(n/|S|) sum_{k in S} grad log p(x_k | theta) - grad log pi(theta).
/// Unbiased for grad_potential over uniform batches.
Vector stochastic_grad_potential(const ArmPosteriorState& state, const FamilySpec& f,
                                 const PriorSpec& prior, const Vector& theta,
                                 std::span<const std::size_t> batch_indices);

/// Closed-form posterior of a 1-d Gaussian mean under a Gaussian prior.
/// Recomputes the sufficient statistics from `data`.
GaussianPosterior conjugate_gaussian_posterior(double prior_mean, double prior_var,
                                               double sigma2, std::span<const double> data);

/// Same update from precomputed statistics (count and sum).
GaussianPosterior conjugate_gaussian_posterior(double prior_mean, double prior_var,
                                               double sigma2, std::size_t n, double sum);

}  // namespace lcts
