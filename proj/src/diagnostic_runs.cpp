#include <cmath>
#include <cstdio>
#include <random>
#include <string>

#include "lcts/diagnostics.hpp"
#include "lcts/posterior.hpp"
#include "lcts/samplers.hpp"

namespace lcts {

namespace {

struct GaussianArmSetup {
  FamilySpec family = gaussian_family(1.0, Vector::Ones(1));
  Vector theta_star = Vector::Constant(1, 1.0);
  PriorSpec prior = with_log_B(gaussian_prior(Vector::Zero(1), 1.0), Vector::Constant(1, 1.0));
  TrueArm truth = gaussian_true_arm(family, Vector::Constant(1, 1.0));
};

ArmPosteriorState draw_dataset(const TrueArm& truth, std::size_t n, Rng& rng) {
  ArmPosteriorState state;
  for (std::size_t i = 0; i < n; ++i) state.push(truth.reward_sampler(rng));
  return state;
}

const char* kind_name(SamplerKind k) { return k == SamplerKind::ULA ? "ULA" : "SGLD"; }

std::string delta_label(double delta) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "delta=%g", delta);
  return buf;
}

}  // namespace

std::vector<DiagnosticRow> run_wasserstein_diagnostics(const std::vector<std::size_t>& ns,
                                                       std::size_t draws, std::uint64_t seed) {
  const GaussianArmSetup setup;
  const double log_B = *setup.prior.log_B;
  std::vector<DiagnosticRow> rows;
  for (std::size_t n : ns) {
    Rng data_rng(derive_seed({seed, n, 1}));
    const ArmPosteriorState base = draw_dataset(setup.truth, n, data_rng);
    const GaussianPosterior post = exact_posterior(base, setup.family, setup.prior);
    const double post_sd = std::sqrt(post.variance());
    const double smooth_var = 1.0 / (static_cast<double>(n) * setup.family.L);

    Rng exact_rng(derive_seed({seed, n, 2}));
    std::normal_distribution<double> z;
    std::vector<double> exact_chain(draws), exact_smoothed(draws);
    for (std::size_t i = 0; i < draws; ++i) {
      exact_chain[i] = post.mean[0] + post_sd * z(exact_rng);
      exact_smoothed[i] = exact_chain[i] + std::sqrt(smooth_var) * z(exact_rng);
    }

    for (SamplerKind kind : {SamplerKind::ULA, SamplerKind::SGLD}) {
      SamplerConfig cfg;
      cfg.kind = kind;
      ArmPosteriorState state = base;
      Rng rng(derive_seed({seed, n, 3, static_cast<std::uint64_t>(kind)}));
      std::vector<double> chain(draws), smoothed(draws);
      for (std::size_t i = 0; i < draws; ++i) {
        SampleOutcome s = run_langevin(state, setup.family, setup.prior, cfg, rng);
        chain[i] = s.chain_end[0];
        smoothed[i] = s.theta[0];
        state.set_warm_start(std::move(s.chain_end));
      }
      const std::pair<const char*, std::pair<std::vector<double>*, std::vector<double>*>> pairs[] = {
          {"chain", {&exact_chain, &chain}}, {"smoothed", {&exact_smoothed, &smoothed}}};
      for (const auto& [label, pr] : pairs) {
        const EmpiricalSample ex(*pr.first), sm(*pr.second);
        for (int p : {1, 2}) {
          const auto rep = sampler_convergence_report(ex, sm, n, setup.family, log_B, p);
          const std::string base_name = std::string("wasserstein/") + kind_name(kind) + "/" +
                                        label + "/W" + std::to_string(p);
          rows.push_back({base_name, n, rep.empirical, rep.bound, rep.pass});
          const double tight = 0.15 * post_sd;
          rows.push_back({base_name + "/tight", n, rep.empirical, tight,
                          rep.empirical <= tight + rep.slack});
        }
      }
    }
  }
  return rows;
}

std::vector<DiagnosticRow> run_concentration_diagnostics(const std::vector<std::size_t>& ns,
                                                         std::size_t replicates,
                                                         std::uint64_t seed) {
  const GaussianArmSetup setup;
  const double log_B = *setup.prior.log_B;
  const double gamma = 1.0;
  const double target = setup.theta_star[0];
  std::vector<DiagnosticRow> rows;
  SamplerConfig ula, sgld;
  ula.kind = SamplerKind::ULA;
  sgld.kind = SamplerKind::SGLD;

  for (std::size_t n : ns) {
    std::vector<double> d_exact(replicates), d_ula(replicates), d_sgld(replicates);
    for (std::size_t r = 0; r < replicates; ++r) {
      Rng data_rng(derive_seed({seed, n, r, 1}));
      const ArmPosteriorState state = draw_dataset(setup.truth, n, data_rng);
      Rng rng(derive_seed({seed, n, r, 2}));
      const Vector exact =
          sample_exact_scaled(exact_posterior(state, setup.family, setup.prior), gamma, rng);
      d_exact[r] = std::abs(exact[0] - target);
      d_ula[r] = std::abs(run_langevin(state, setup.family, setup.prior, ula, rng).theta[0] - target);
      d_sgld[r] =
          std::abs(run_langevin(state, setup.family, setup.prior, sgld, rng).theta[0] - target);
    }
    for (double delta : {0.5, 0.1, 0.01}) {
      const double r_exact = concentration_radius_exact(setup.family, log_B, n, gamma, delta);
      const double r_approx = concentration_radius_approx(setup.family, log_B, n, gamma, delta);
      const auto qe = quantile_check(d_exact, r_exact, delta);
      const auto qu = quantile_check(d_ula, r_approx, delta);
      const auto qs = quantile_check(d_sgld, r_approx, delta);
      const std::string tag = delta_label(delta);
      rows.push_back({"concentration/exact/" + tag, n, qe.quantile, qe.radius, qe.pass});
      rows.push_back({"concentration/ULA/" + tag, n, qu.quantile, qu.radius, qu.pass});
      rows.push_back({"concentration/SGLD/" + tag, n, qs.quantile, qs.radius, qs.pass});
    }
  }
  return rows;
}

std::vector<DiagnosticRow> run_subgaussian_diagnostics(const std::vector<std::size_t>& ns,
                                                       std::size_t trials, std::uint64_t seed) {
  const GaussianArmSetup setup;
  std::vector<DiagnosticRow> rows;
  for (std::size_t n : ns) {
    Rng rng(derive_seed({seed, n, 4}));
    const auto rep = grad_subgaussian_check(setup.family, setup.truth, n, trials, rng);
    for (const auto& lvl : rep.levels) {
      char name[64];
      std::snprintf(name, sizeof(name), "subgaussian/tail@%gs", lvl.multiple);
      rows.push_back({name, n, lvl.empirical, lvl.bound, lvl.pass});
    }
  }
  return rows;
}

}  // namespace lcts
