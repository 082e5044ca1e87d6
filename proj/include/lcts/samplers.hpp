#pragma once

#include <cstddef>
#include <functional>
#include <optional>

#include "lcts/family.hpp"
#include "lcts/posterior.hpp"
#include "lcts/rng.hpp"

namespace lcts {

enum class SamplerKind { Exact, ULA, SGLD, AdversarialMixture };
enum class Schedule { Theoretical, Practical };

struct SamplerConfig {
  SamplerKind kind = SamplerKind::Exact;
  double gamma = 1.0;
  Schedule schedule = Schedule::Theoretical;
  // Practical schedule only.
  std::optional<std::size_t> n_steps_override;
  std::function<double(std::size_t n)> step_size_rule;
  std::function<std::size_t(std::size_t n)> batch_rule;  // SGLD only
  // AdversarialMixture only.
  std::optional<double> mixture_alpha;
  std::optional<Vector> mixture_atom;

  /// Throws ConfigError on an inconsistent combination.
  void validate() const;
};

/// Practical defaults used in the benchmark: N = 100 (ULA) / 200 (SGLD),
/// h = 1/(32 n), k = min(n, 32).
SamplerConfig practical_config(SamplerKind kind, double gamma = 1.0);

struct SampleOutcome {
  Vector theta;        // the round's sample (smoothed for Langevin kinds)
  Vector chain_end;    // next warm start; equals theta for non-Langevin kinds
  Vector chain_start;  // where the chain was initialized (instrumentation)
  std::size_t n_grad_evals = 0;
  bool from_chain = false;  // true when a Langevin chain produced chain_end
};

struct UlaHyperparams {
  double step = 0.0;
  std::size_t n_steps = 0;
};

struct SgldHyperparams {
  double step = 0.0;
  std::size_t n_steps = 0;
  std::size_t batch = 0;
};

/// theta - h grad + sqrt(2h) noise.
Vector ula_step(const Vector& theta, const Vector& grad, double h, const Vector& noise);

/// h = m / (32 n (L + L/n)^2), N = ceil(640 (L + L/n)^2 / m^2).
UlaHyperparams theoretical_hyperparams_ula(const FamilySpec& f, std::size_t n);

/// ULA step size, N = ceil(1280 (L + L/n)^2 / m^2), k = min(n, ceil(32 L*^2 / (m nu))).
SgldHyperparams theoretical_hyperparams_sgld(const FamilySpec& f, std::size_t n);

/// Scale that makes exact Thompson sampling provably optimistic: 1/(8 d kappa^3).
double exact_ts_gamma(const FamilySpec& f);

/// Standard-normal source used for the chain and smoothing noise.
using NormalSource = std::function<double()>;

/// Warm-started ULA or SGLD for one arm (cfg.kind must be ULA or SGLD, n >= 1).
/// The chain targets the unscaled posterior; the returned theta is chain_end
/// plus N(0, I/(n L gamma)) smoothing noise.
SampleOutcome run_langevin(const ArmPosteriorState& state, const FamilySpec& f,
                           const PriorSpec& prior, const SamplerConfig& cfg, Rng& rng);

/// As above with caller-supplied Gaussian noise; `rng` then only drives the
/// SGLD subsampling.
SampleOutcome run_langevin(const ArmPosteriorState& state, const FamilySpec& f,
                           const PriorSpec& prior, const SamplerConfig& cfg, Rng& rng,
                           const NormalSource& normal);

/// Draw from N(mean, I / (gamma precision)).
Vector sample_exact_scaled(const GaussianPosterior& post, double gamma, Rng& rng);

/// With probability n^-alpha return `atom`, otherwise an exact draw from `exact`.
Vector sample_adversarial_mixture(const GaussianPosterior& exact, std::size_t n, double alpha,
                                  const Vector& atom, Rng& rng);

/// Draw from a Gaussian prior with its precision multiplied by gamma.
Vector sample_prior_scaled(const PriorSpec& prior, double gamma, Rng& rng);

/// Mode of the prior: the mean for Gaussian priors, otherwise 100 steps of
/// backtracking gradient ascent on log pi from the origin.
Vector prior_mode(const PriorSpec& prior, int dim);

/// Conjugate posterior of the arm under a 1-d Gaussian family/prior pair.
GaussianPosterior exact_posterior(const ArmPosteriorState& state, const FamilySpec& f,
                                  const PriorSpec& prior);

/// One parameter sample for one arm under any sampler kind. n = 0 draws from
/// the gamma-scaled prior.
SampleOutcome sample_arm(const ArmPosteriorState& state, const FamilySpec& f,
                         const PriorSpec& prior, const SamplerConfig& cfg, Rng& rng);

}  // namespace lcts
