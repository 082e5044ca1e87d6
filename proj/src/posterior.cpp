#include "lcts/posterior.hpp"

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

double potential(const ArmPosteriorState& state, const FamilySpec& f, const PriorSpec& prior,
                 const Vector& theta) {
  check_dim(f, theta);
  double u = -prior.log_density(theta);
  for (double x : state.data()) u -= f.log_likelihood(theta, x);
  return u;
}

Vector grad_potential(const ArmPosteriorState& state, const FamilySpec& f,
                      const PriorSpec& prior, const Vector& theta) {
  check_dim(f, theta);
  Vector g = Vector::Zero(f.dim);
  accumulate_grad_log_likelihood(f, theta, state.data(), g);
  return -g - prior.grad_log_density(theta);
}

Vector stochastic_grad_potential(const ArmPosteriorState& state, const FamilySpec& f,
                                 const PriorSpec& prior, const Vector& theta,
                                 std::span<const std::size_t> batch_indices) {
  check_dim(f, theta);
  if (batch_indices.empty()) throw std::invalid_argument("empty stochastic-gradient batch");
  const auto data = state.data();
  std::vector<double> batch;
  batch.reserve(batch_indices.size());
  for (std::size_t k : batch_indices) {
    if (k >= data.size()) throw std::out_of_range("batch index out of range");
    batch.push_back(data[k]);
  }
  Vector g = Vector::Zero(f.dim);
  accumulate_grad_log_likelihood(f, theta, batch, g);
  const double scale = static_cast<double>(data.size()) / static_cast<double>(batch.size());
  return -scale * g - prior.grad_log_density(theta);
}

GaussianPosterior conjugate_gaussian_posterior(double prior_mean, double prior_var,
                                               double sigma2, std::span<const double> data) {
  double sum = 0.0;
  for (double x : data) sum += x;
  return conjugate_gaussian_posterior(prior_mean, prior_var, sigma2, data.size(), sum);
}

GaussianPosterior conjugate_gaussian_posterior(double prior_mean, double prior_var,
                                               double sigma2, std::size_t n, double sum) {
  if (!(prior_var > 0.0) || !(sigma2 > 0.0)) {
    throw std::invalid_argument("conjugate update needs positive variances");
  }
  GaussianPosterior post;
  post.precision = 1.0 / prior_var + static_cast<double>(n) / sigma2;
  post.mean = Vector::Constant(1, (prior_mean / prior_var + sum / sigma2) / post.precision);
  return post;
}

}  // namespace lcts
