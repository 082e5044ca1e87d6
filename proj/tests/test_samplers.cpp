#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "lcts/diagnostics.hpp"
#include "lcts/errors.hpp"
#include "lcts/samplers.hpp"
#include "oracles.hpp"

using namespace lcts;

namespace {

Vector v1(double x) { return Vector::Constant(1, x); }

FamilySpec family_with(double m, double L, double nu, double L_star) {
  FamilySpec f = gaussian_family(1.0, Vector::Ones(1));
  f.m = m;
  f.L = L;
  f.nu = nu;
  f.L_star = L_star;
  return f;
}

ArmPosteriorState dataset(std::size_t n, double mean, std::uint64_t seed) {
  Rng rng(seed);
  std::normal_distribution<double> z(mean, 1.0);
  ArmPosteriorState s;
  for (std::size_t i = 0; i < n; ++i) s.push(z(rng));
  return s;
}

SamplerConfig theoretical(SamplerKind kind) {
  SamplerConfig c;
  c.kind = kind;
  return c;
}

const FamilySpec kUnit = gaussian_family(1.0, Vector::Ones(1));
const PriorSpec kStdPrior = gaussian_prior(Vector::Zero(1), 1.0);

// A log-concave, non-Gaussian prior: log pi = -log cosh(theta - 3).
PriorSpec logcosh_prior() {
  PriorSpec p;
  p.log_density = [](const Vector& t) { return -std::log(std::cosh(t[0] - 3.0)); };
  p.grad_log_density = [](const Vector& t) -> Vector { return v1(-std::tanh(t[0] - 3.0)); };
  return p;
}

}  // namespace

TEST(UlaStep, Examples) {
  EXPECT_EQ(ula_step(v1(1.3), v1(0), 0.1, v1(0))[0], 1.3);
  EXPECT_DOUBLE_EQ(ula_step(v1(1), v1(2), 0.25, v1(0))[0], 0.5);
  EXPECT_DOUBLE_EQ(ula_step(v1(0), v1(0), 0.5, v1(1))[0], 1.0);
  EXPECT_THROW(ula_step(v1(0), v1(0), 0.0, v1(0)), std::invalid_argument);
}

TEST(TheoreticalUla, Examples) {
  auto hp = theoretical_hyperparams_ula(family_with(1, 1, 1, 1), 1);
  EXPECT_DOUBLE_EQ(hp.step, 1.0 / 128.0);
  EXPECT_EQ(hp.n_steps, 2560u);
  hp = theoretical_hyperparams_ula(family_with(1, 2, 1, 1), 2);
  EXPECT_DOUBLE_EQ(hp.step, 1.0 / 576.0);
  EXPECT_EQ(hp.n_steps, 5760u);
  hp = theoretical_hyperparams_ula(family_with(1, 1, 1, 1), 1000000);
  EXPECT_NEAR(hp.step * 32.0 * 1e6, 1.0, 1e-5);
  EXPECT_EQ(hp.n_steps, 641u);  // ceil(640.00128)
  EXPECT_THROW(theoretical_hyperparams_ula(kUnit, 0), std::invalid_argument);
}

TEST(TheoreticalSgld, Examples) {
  auto hp = theoretical_hyperparams_sgld(family_with(1, 1, 1, 1), 1);
  EXPECT_DOUBLE_EQ(hp.step, 1.0 / 128.0);
  EXPECT_EQ(hp.n_steps, 5120u);
  EXPECT_EQ(hp.batch, 1u);
  EXPECT_EQ(theoretical_hyperparams_sgld(family_with(1, 1, 1, 1), 100).batch, 32u);
  EXPECT_EQ(theoretical_hyperparams_sgld(family_with(1, 1, 1, 2), 100).batch, 100u);
  EXPECT_EQ(theoretical_hyperparams_sgld(family_with(1, 1, 1, 2), 1000).batch, 128u);
}

TEST(ExactTsGamma, UnitFamily) {
  EXPECT_DOUBLE_EQ(exact_ts_gamma(kUnit), 1.0 / 8.0);
  EXPECT_DOUBLE_EQ(exact_ts_gamma(family_with(1, 2, 1, 1)), 1.0 / 64.0);
}

TEST(SamplerConfig, Validation) {
  SamplerConfig c = theoretical(SamplerKind::ULA);
  EXPECT_NO_THROW(c.validate());
  c.n_steps_override = 10;
  EXPECT_THROW(c.validate(), ConfigError);

  SamplerConfig p;
  p.kind = SamplerKind::SGLD;
  p.schedule = Schedule::Practical;
  EXPECT_THROW(p.validate(), ConfigError);
  EXPECT_NO_THROW(practical_config(SamplerKind::SGLD).validate());

  SamplerConfig g = theoretical(SamplerKind::Exact);
  g.gamma = 0.0;
  EXPECT_THROW(g.validate(), ConfigError);

  SamplerConfig mix = theoretical(SamplerKind::AdversarialMixture);
  EXPECT_THROW(mix.validate(), ConfigError);
  mix.mixture_alpha = 1.5;
  mix.mixture_atom = v1(2);
  EXPECT_THROW(mix.validate(), ConfigError);
  mix.mixture_alpha = 1.0;
  EXPECT_NO_THROW(mix.validate());
}

TEST(PracticalConfig, Defaults) {
  const auto ula = practical_config(SamplerKind::ULA);
  EXPECT_EQ(*ula.n_steps_override, 100u);
  EXPECT_DOUBLE_EQ(ula.step_size_rule(4), 1.0 / 128.0);
  const auto sgld = practical_config(SamplerKind::SGLD);
  EXPECT_EQ(*sgld.n_steps_override, 200u);
  EXPECT_EQ(sgld.batch_rule(10), 10u);
  EXPECT_EQ(sgld.batch_rule(1000), 32u);
}

TEST(RunLangevin, Errors) {
  ArmPosteriorState empty;
  Rng rng(1);
  EXPECT_THROW(run_langevin(empty, kUnit, kStdPrior, theoretical(SamplerKind::ULA), rng),
               std::invalid_argument);
  const auto s = dataset(3, 1.0, 2);
  EXPECT_THROW(run_langevin(s, kUnit, kStdPrior, theoretical(SamplerKind::Exact), rng), ConfigError);
}

// Without noise the chain is gradient descent on a strongly convex U and
// lands on the posterior mode.
TEST(RunLangevin, NoiselessChainConvergesToMode) {
  const auto s = dataset(10, 2.0, 3);
  SamplerConfig cfg = practical_config(SamplerKind::ULA, 1e300);
  cfg.n_steps_override = 20000;
  Rng rng(4);
  const auto out = run_langevin(s, kUnit, kStdPrior, cfg, rng, [] { return 0.0; });
  const auto post = conjugate_gaussian_posterior(0.0, 1.0, 1.0, s.data());
  EXPECT_NEAR(out.chain_end[0], post.mean[0], 1e-10);
  EXPECT_NEAR(out.theta[0], post.mean[0], 1e-10);
}

TEST(RunLangevin, ColdStartAtPriorMode) {
  const auto s = dataset(2, 1.0, 5);
  const auto prior = gaussian_prior(v1(6.25), 4.0);
  Rng rng(6);
  const auto out = run_langevin(s, kUnit, prior, practical_config(SamplerKind::ULA), rng);
  EXPECT_EQ(out.chain_start[0], 6.25);
  EXPECT_TRUE(out.from_chain);
}

TEST(RunLangevin, WarmStartThreadsChainEnd) {
  ArmPosteriorState s = dataset(5, 1.0, 7);
  Rng rng(8);
  Vector previous;
  for (int round = 0; round < 5; ++round) {
    const auto out = run_langevin(s, kUnit, kStdPrior, practical_config(SamplerKind::SGLD), rng);
    if (round > 0) {
      EXPECT_EQ(out.chain_start[0], previous[0]);
      EXPECT_NE(out.chain_start[0], out.theta[0]);
    }
    previous = out.chain_end;
    s.set_warm_start(out.chain_end);
    s.push(1.0);
  }
}

TEST(RunLangevin, DeterministicGivenSeed) {
  const auto s = dataset(50, 1.0, 9);
  for (SamplerKind kind : {SamplerKind::ULA, SamplerKind::SGLD}) {
    Rng a(123), b(123);
    const auto x = run_langevin(s, kUnit, kStdPrior, theoretical(kind), a);
    const auto y = run_langevin(s, kUnit, kStdPrior, theoretical(kind), b);
    EXPECT_EQ(x.theta[0], y.theta[0]);
    EXPECT_EQ(x.chain_end[0], y.chain_end[0]);
    EXPECT_EQ(x.n_grad_evals, y.n_grad_evals);
  }
}

TEST(RunLangevin, FullBatchSgldReproducesUla) {
  const auto s = dataset(20, 1.0, 10);
  SamplerConfig ula = practical_config(SamplerKind::ULA);
  SamplerConfig sgld = practical_config(SamplerKind::SGLD);
  sgld.n_steps_override = 100;
  sgld.batch_rule = [](std::size_t n) { return n; };
  Rng r1(5), r2(5);
  std::normal_distribution<double> z1, z2;
  Rng n1(77), n2(77);
  const auto a = run_langevin(s, kUnit, kStdPrior, ula, r1, [&] { return z1(n1); });
  const auto b = run_langevin(s, kUnit, kStdPrior, sgld, r2, [&] { return z2(n2); });
  EXPECT_EQ(a.chain_end[0], b.chain_end[0]);
  EXPECT_EQ(a.theta[0], b.theta[0]);
}

TEST(RunLangevin, GradientEvaluationCounts) {
  Rng rng(3);
  for (std::size_t n : {1u, 7u, 40u, 300u}) {
    const auto s = dataset(n, 0.0, n);
    const auto ula = theoretical_hyperparams_ula(kUnit, n);
    const auto sgld = theoretical_hyperparams_sgld(kUnit, n);
    EXPECT_EQ(run_langevin(s, kUnit, kStdPrior, theoretical(SamplerKind::ULA), rng).n_grad_evals,
              ula.n_steps * (n + 1));
    EXPECT_EQ(run_langevin(s, kUnit, kStdPrior, theoretical(SamplerKind::SGLD), rng).n_grad_evals,
              sgld.n_steps * (std::min<std::size_t>(n, 32) + 1));
  }
}

// Outputs after n = 10 match the conjugate posterior with the smoothing
// variance 1/(n L gamma) added.
TEST(RunLangevin, TheoreticalUlaMatchesSmoothedPosterior) {
  const std::size_t n = 10, draws = 10000;
  ArmPosteriorState s = dataset(n, 1.0, 12);
  const auto post = conjugate_gaussian_posterior(0.0, 1.0, 1.0, s.data());
  Rng rng(13);
  std::vector<double> out(draws);
  for (std::size_t i = 0; i < draws; ++i) {
    auto o = run_langevin(s, kUnit, kStdPrior, theoretical(SamplerKind::ULA), rng);
    out[i] = o.theta[0];
    s.set_warm_start(o.chain_end);
  }
  const double var = post.variance() + 1.0 / n;
  const double mean = oracle::sample_mean(out), v = oracle::sample_variance(out);
  EXPECT_LE(std::abs(mean - post.mean[0]), 3.0 * std::sqrt(var / draws));
  EXPECT_LE(std::abs(v - var), 3.0 * var * std::sqrt(2.0 / (draws - 1)));
}

TEST(RunLangevin, StationaryWassersteinAtFifty) {
  const std::size_t n = 50, draws = 20000;
  ArmPosteriorState s = dataset(n, 1.0, 14);
  const auto post = conjugate_gaussian_posterior(0.0, 1.0, 1.0, s.data());
  const double sd = std::sqrt(post.variance()), smooth = std::sqrt(1.0 / n);
  Rng rng(15), ex(16);
  std::normal_distribution<double> z;
  std::vector<double> approx(draws), exact(draws);
  for (std::size_t i = 0; i < draws; ++i) {
    auto o = run_langevin(s, kUnit, kStdPrior, theoretical(SamplerKind::ULA), rng);
    approx[i] = o.theta[0];
    s.set_warm_start(o.chain_end);
    exact[i] = post.mean[0] + sd * z(ex) + smooth * z(ex);
  }
  EXPECT_LE(wasserstein_1d(EmpiricalSample(approx), EmpiricalSample(exact), 1), 0.15 * sd);
}

TEST(RunLangevin, NonGaussianPriorUsesNumericMode) {
  const auto prior = logcosh_prior();
  const Vector mode = prior_mode(prior, 1);
  EXPECT_NEAR(mode[0], 3.0, 1e-6);
  const auto s = dataset(4, 1.0, 17);
  Rng rng(18);
  const auto out = run_langevin(s, kUnit, prior, theoretical(SamplerKind::ULA), rng);
  EXPECT_NEAR(out.chain_start[0], 3.0, 1e-6);
  EXPECT_TRUE(std::isfinite(out.theta[0]));
}

TEST(SampleExactScaled, TemperingShrinksVariance) {
  GaussianPosterior post{v1(0.0), 1.0};
  Rng rng(19);
  const std::size_t draws = 100000;
  std::vector<double> xs(draws);
  for (auto& x : xs) x = sample_exact_scaled(post, 4.0, rng)[0];
  const double v = oracle::sample_variance(xs);
  EXPECT_LE(std::abs(v - 0.25), 3.0 * 0.25 * std::sqrt(2.0 / (draws - 1)));
  EXPECT_THROW(sample_exact_scaled(post, 0.0, rng), std::invalid_argument);
}

TEST(SampleExactScaled, UnitGammaIsPosteriorDraw) {
  GaussianPosterior post{v1(2.0), 4.0};
  Rng a(20), b(20);
  std::normal_distribution<double> z;
  EXPECT_DOUBLE_EQ(sample_exact_scaled(post, 1.0, a)[0], 2.0 + 0.5 * z(b));
}

TEST(SamplePriorScaled, Moments) {
  const std::size_t draws = 100000;
  Rng rng(21);
  std::vector<double> xs(draws);
  const auto prior = gaussian_prior(v1(7.5), 4.0);
  for (auto& x : xs) x = sample_prior_scaled(prior, 1.0, rng)[0];
  EXPECT_LE(std::abs(oracle::sample_mean(xs) - 7.5), 3.0 * std::sqrt(4.0 / draws));

  const auto wide = gaussian_prior(v1(0.0), 4.0);
  for (auto& x : xs) x = sample_prior_scaled(wide, 4.0, rng)[0];
  EXPECT_LE(std::abs(oracle::sample_variance(xs) - 1.0), 3.0 * std::sqrt(2.0 / (draws - 1)));
  EXPECT_THROW(sample_prior_scaled(logcosh_prior(), 1.0, rng), std::invalid_argument);
}

TEST(SampleArm, ZeroDataDrawsFromPrior) {
  ArmPosteriorState empty;
  Rng a(22), b(22);
  const auto prior = gaussian_prior(v1(3.0), 2.0);
  const auto out = sample_arm(empty, kUnit, prior, theoretical(SamplerKind::Exact), a);
  EXPECT_EQ(out.theta[0], sample_prior_scaled(prior, 1.0, b)[0]);
  EXPECT_FALSE(out.from_chain);
  Rng c(23);
  EXPECT_THROW(sample_arm(empty, kUnit, logcosh_prior(), theoretical(SamplerKind::Exact), c),
               ConfigError);
  EXPECT_NO_THROW(sample_arm(empty, kUnit, logcosh_prior(), theoretical(SamplerKind::ULA), c));
}

TEST(AdversarialMixture, FirstPullAlwaysAtom) {
  GaussianPosterior post{v1(0.0), 2.0};
  Rng rng(24);
  for (int i = 0; i < 1000; ++i) {
    EXPECT_EQ(sample_adversarial_mixture(post, 1, 0.5, v1(2.0), rng)[0], 2.0);
  }
}

TEST(AdversarialMixture, AtomFrequency) {
  GaussianPosterior post{v1(0.0), 1e4};
  Rng rng(25);
  const std::size_t trials = 1000000;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < trials; ++i) {
    if (sample_adversarial_mixture(post, 10000, 0.5, v1(2.0), rng)[0] == 2.0) ++hits;
  }
  const double p = 0.01, freq = static_cast<double>(hits) / trials;
  EXPECT_LE(std::abs(freq - p), 3.0 * std::sqrt(p * (1 - p) / trials));
}

TEST(AdversarialMixture, AtomAtMeanKeepsMean) {
  GaussianPosterior post{v1(1.5), 4.0};
  Rng rng(26);
  const std::size_t draws = 200000;
  std::vector<double> xs(draws);
  for (auto& x : xs) x = sample_adversarial_mixture(post, 4, 0.5, v1(1.5), rng)[0];
  const double sd = std::sqrt(oracle::sample_variance(xs));
  EXPECT_LE(std::abs(oracle::sample_mean(xs) - 1.5), 3.0 * sd / std::sqrt(draws));
  EXPECT_THROW(sample_adversarial_mixture(post, 4, 0.0, v1(1.5), rng), std::invalid_argument);
  EXPECT_THROW(sample_adversarial_mixture(post, 0, 0.5, v1(1.5), rng), std::invalid_argument);
}
