#include "lcts/samplers.hpp"

#include <cmath>
#include <random>
#include <vector>

#include "lcts/errors.hpp"

namespace lcts {

namespace {

// ceil that ignores rounding noise just above an integer (640 * 4.0000000001).
std::size_t ceil_count(double v) {
  const double r = std::round(v);
  if (std::abs(v - r) <= 1e-9 * std::max(1.0, std::abs(v))) return static_cast<std::size_t>(r);
  return static_cast<std::size_t>(std::ceil(v));
}

struct ChainPlan {
  double step = 0.0;
  std::size_t n_steps = 0;
  std::size_t batch = 0;  // == n for the exact-gradient chain
};

ChainPlan plan_chain(const SamplerConfig& cfg, const FamilySpec& f, std::size_t n) {
  ChainPlan plan;
  if (cfg.schedule == Schedule::Theoretical) {
    if (cfg.kind == SamplerKind::SGLD) {
      const auto hp = theoretical_hyperparams_sgld(f, n);
      plan = {hp.step, hp.n_steps, hp.batch};
    } else {
      const auto hp = theoretical_hyperparams_ula(f, n);
      plan = {hp.step, hp.n_steps, n};
    }
  } else {
    plan.step = cfg.step_size_rule(n);
    plan.n_steps = *cfg.n_steps_override;
    plan.batch = (cfg.kind == SamplerKind::SGLD) ? cfg.batch_rule(n) : n;
  }
  if (!(plan.step > 0.0)) throw ConfigError("step size must be positive");
  if (plan.batch == 0) throw ConfigError("SGLD batch size must be positive");
  plan.batch = std::min(plan.batch, n);
  return plan;
}

// Floyd's algorithm: k distinct indices from [0, n), in draw order.
void draw_batch(std::size_t n, std::size_t k, Rng& rng, std::vector<char>& marks,
                std::vector<std::size_t>& out) {
  out.clear();
  for (std::size_t j = n - k; j < n; ++j) {
    std::uniform_int_distribution<std::size_t> pick(0, j);
    std::size_t t = pick(rng);
    if (marks[t]) t = j;
    marks[t] = 1;
    out.push_back(t);
  }
  for (std::size_t i : out) marks[i] = 0;
}

template <class Normal>
SampleOutcome langevin_impl(const ArmPosteriorState& state, const FamilySpec& f,
                            const PriorSpec& prior, const SamplerConfig& cfg, Rng& rng,
                            Normal&& normal) {
  if (cfg.kind != SamplerKind::ULA && cfg.kind != SamplerKind::SGLD) {
    throw ConfigError("run_langevin needs a ULA or SGLD config");
  }
  cfg.validate();
  validate_family(f);
  const std::size_t n = state.n();
  if (n == 0) throw std::invalid_argument("run_langevin needs n >= 1; sample the prior instead");

  const ChainPlan plan = plan_chain(cfg, f, n);
  const auto data = state.data();
  const bool full_batch = plan.batch >= n;
  const double batch_scale = static_cast<double>(n) / static_cast<double>(plan.batch);
  const double diffusion = std::sqrt(2.0 * plan.step);

  SampleOutcome out;
  out.chain_start = state.warm_start() ? *state.warm_start() : prior_mode(prior, f.dim);
  if (out.chain_start.size() != f.dim) throw DimensionMismatch("warm start has wrong dimension");

  Vector theta = out.chain_start;
  Vector grad(f.dim);
  std::vector<char> marks;
  std::vector<std::size_t> indices;
  std::vector<double> batch;
  if (!full_batch) {
    marks.assign(n, 0);
    indices.reserve(plan.batch);
    batch.reserve(plan.batch);
  }

  for (std::size_t i = 0; i < plan.n_steps; ++i) {
    grad.setZero();
    if (full_batch) {
      accumulate_grad_log_likelihood(f, theta, data, grad);
    } else {
      draw_batch(n, plan.batch, rng, marks, indices);
      batch.clear();
      for (std::size_t k : indices) batch.push_back(data[k]);
      accumulate_grad_log_likelihood(f, theta, batch, grad);
      grad *= batch_scale;
    }
    grad = -grad - prior.grad_log_density(theta);
    theta.noalias() -= plan.step * grad;
    for (int j = 0; j < f.dim; ++j) theta[j] += diffusion * normal();
  }

  out.chain_end = theta;
  const double smooth_sd = std::sqrt(1.0 / (static_cast<double>(n) * f.L * cfg.gamma));
  out.theta = theta;
  for (int j = 0; j < f.dim; ++j) out.theta[j] += smooth_sd * normal();
  out.n_grad_evals = plan.n_steps * (plan.batch + 1);
  out.from_chain = true;
  return out;
}

// ULA on the prior alone, used for n = 0 when the prior has no closed form.
Vector sample_prior_langevin(const FamilySpec& f, const PriorSpec& prior, Rng& rng) {
  const auto hp = theoretical_hyperparams_ula(f, 1);
  std::normal_distribution<double> z;
  Vector theta = prior_mode(prior, f.dim);
  const double diffusion = std::sqrt(2.0 * hp.step);
  for (std::size_t i = 0; i < hp.n_steps; ++i) {
    theta += hp.step * prior.grad_log_density(theta);
    for (int j = 0; j < f.dim; ++j) theta[j] += diffusion * z(rng);
  }
  return theta;
}

}  // namespace

void SamplerConfig::validate() const {
  if (!(gamma > 0.0)) throw ConfigError("gamma must be positive");
  const bool langevin = kind == SamplerKind::ULA || kind == SamplerKind::SGLD;
  if (langevin && schedule == Schedule::Practical) {
    if (!n_steps_override || *n_steps_override == 0 || !step_size_rule) {
      throw ConfigError("practical schedule needs n_steps_override and step_size_rule");
    }
    if (kind == SamplerKind::SGLD && !batch_rule) {
      throw ConfigError("practical SGLD schedule needs batch_rule");
    }
  }
  if (langevin && schedule == Schedule::Theoretical &&
      (n_steps_override || step_size_rule || batch_rule)) {
    throw ConfigError("theoretical schedule takes no overrides");
  }
  if (kind == SamplerKind::AdversarialMixture) {
    if (!mixture_alpha || !mixture_atom) throw ConfigError("mixture sampler needs alpha and atom");
    if (!(*mixture_alpha > 0.0 && *mixture_alpha <= 1.0)) {
      throw ConfigError("mixture alpha must lie in (0, 1]");
    }
  }
}

SamplerConfig practical_config(SamplerKind kind, double gamma) {
  SamplerConfig cfg;
  cfg.kind = kind;
  cfg.gamma = gamma;
  if (kind == SamplerKind::ULA || kind == SamplerKind::SGLD) {
    cfg.schedule = Schedule::Practical;
    cfg.n_steps_override = (kind == SamplerKind::ULA) ? 100 : 200;
    cfg.step_size_rule = [](std::size_t n) { return 1.0 / (32.0 * static_cast<double>(n)); };
    if (kind == SamplerKind::SGLD) {
      cfg.batch_rule = [](std::size_t n) { return std::min<std::size_t>(n, 32); };
    }
  }
  return cfg;
}

Vector ula_step(const Vector& theta, const Vector& grad, double h, const Vector& noise) {
  if (!(h > 0.0)) throw std::invalid_argument("ULA step size must be positive");
  if (grad.size() != theta.size() || noise.size() != theta.size()) {
    throw DimensionMismatch("ula_step operands differ in dimension");
  }
  return theta - h * grad + std::sqrt(2.0 * h) * noise;
}

UlaHyperparams theoretical_hyperparams_ula(const FamilySpec& f, std::size_t n) {
  if (n == 0) throw std::invalid_argument("theoretical schedule needs n >= 1");
  condition_number(f);
  const double nn = static_cast<double>(n);
  const double lsum = f.L + f.L / nn;
  UlaHyperparams hp;
  hp.step = f.m / (32.0 * nn * lsum * lsum);
  hp.n_steps = ceil_count(640.0 * lsum * lsum / (f.m * f.m));
  return hp;
}

SgldHyperparams theoretical_hyperparams_sgld(const FamilySpec& f, std::size_t n) {
  const auto ula = theoretical_hyperparams_ula(f, n);
  const double nn = static_cast<double>(n);
  const double lsum = f.L + f.L / nn;
  SgldHyperparams hp;
  hp.step = ula.step;
  hp.n_steps = ceil_count(1280.0 * lsum * lsum / (f.m * f.m));
  hp.batch = std::min(n, ceil_count(32.0 * f.L_star * f.L_star / (f.m * f.nu)));
  return hp;
}

double exact_ts_gamma(const FamilySpec& f) {
  const double kappa = condition_number(f);
  return 1.0 / (8.0 * f.dim * kappa * kappa * kappa);
}

SampleOutcome run_langevin(const ArmPosteriorState& state, const FamilySpec& f,
                           const PriorSpec& prior, const SamplerConfig& cfg, Rng& rng) {
  std::normal_distribution<double> z;
  return langevin_impl(state, f, prior, cfg, rng, [&] { return z(rng); });
}

SampleOutcome run_langevin(const ArmPosteriorState& state, const FamilySpec& f,
                           const PriorSpec& prior, const SamplerConfig& cfg, Rng& rng,
                           const NormalSource& normal) {
  return langevin_impl(state, f, prior, cfg, rng, normal);
}

Vector sample_exact_scaled(const GaussianPosterior& post, double gamma, Rng& rng) {
  if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be positive");
  std::normal_distribution<double> z;
  const double sd = std::sqrt(1.0 / (gamma * post.precision));
  Vector theta = post.mean;
  for (Eigen::Index j = 0; j < theta.size(); ++j) theta[j] += sd * z(rng);
  return theta;
}

Vector sample_adversarial_mixture(const GaussianPosterior& exact, std::size_t n, double alpha,
                                  const Vector& atom, Rng& rng) {
  if (n == 0) throw std::invalid_argument("mixture sampler needs n >= 1");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("alpha must lie in (0, 1]");
  const double weight = std::pow(static_cast<double>(n), -alpha);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  if (u(rng) < weight) return atom;
  return sample_exact_scaled(exact, 1.0, rng);
}

Vector sample_prior_scaled(const PriorSpec& prior, double gamma, Rng& rng) {
  if (!prior.gaussian) throw std::invalid_argument("closed-form prior draws need a Gaussian prior");
  GaussianPosterior as_post{prior.gaussian->mean, 1.0 / prior.gaussian->variance};
  return sample_exact_scaled(as_post, gamma, rng);
}

Vector prior_mode(const PriorSpec& prior, int dim) {
  if (prior.gaussian) return prior.gaussian->mean;
  Vector theta = Vector::Zero(dim);
  double value = prior.log_density(theta);
  double step = 1.0;
  for (int it = 0; it < 100; ++it) {
    const Vector g = prior.grad_log_density(theta);
    const double g2 = g.squaredNorm();
    if (g2 == 0.0) break;
    // Armijo backtracking; grow the step back after each accepted move.
    for (int bt = 0; bt < 60; ++bt) {
      Vector cand = theta + step * g;
      const double cv = prior.log_density(cand);
      if (cv >= value + 0.5 * step * g2) {
        theta = std::move(cand);
        value = cv;
        step *= 2.0;
        break;
      }
      step *= 0.5;
    }
  }
  return theta;
}

GaussianPosterior exact_posterior(const ArmPosteriorState& state, const FamilySpec& f,
                                  const PriorSpec& prior) {
  if (!f.noise_variance || !prior.gaussian || f.dim != 1 || f.alpha[0] != 1.0) {
    throw ConfigError("exact sampling needs a 1-d Gaussian family with alpha = [1] and a Gaussian prior");
  }
  return conjugate_gaussian_posterior(prior.gaussian->mean[0], prior.gaussian->variance,
                                      *f.noise_variance, state.n(), state.sum());
}

SampleOutcome sample_arm(const ArmPosteriorState& state, const FamilySpec& f,
                         const PriorSpec& prior, const SamplerConfig& cfg, Rng& rng) {
  cfg.validate();
  SampleOutcome out;
  if (state.n() == 0) {
    if (prior.gaussian) {
      out.theta = sample_prior_scaled(prior, cfg.gamma, rng);
    } else if (cfg.kind == SamplerKind::ULA || cfg.kind == SamplerKind::SGLD) {
      out.theta = sample_prior_langevin(f, prior, rng);
    } else {
      throw ConfigError("exact prior sampling needs a Gaussian prior");
    }
    out.chain_end = out.theta;
    out.chain_start = out.theta;
    return out;
  }
  switch (cfg.kind) {
    case SamplerKind::ULA:
    case SamplerKind::SGLD:
      return run_langevin(state, f, prior, cfg, rng);
    case SamplerKind::Exact:
      out.theta = sample_exact_scaled(exact_posterior(state, f, prior), cfg.gamma, rng);
      break;
    case SamplerKind::AdversarialMixture: {
      GaussianPosterior post = exact_posterior(state, f, prior);
      post.precision *= cfg.gamma;
      out.theta = sample_adversarial_mixture(post, state.n(), *cfg.mixture_alpha,
                                             *cfg.mixture_atom, rng);
      break;
    }
  }
  out.chain_end = out.theta;
  out.chain_start = out.theta;
  return out;
}

}  // namespace lcts
