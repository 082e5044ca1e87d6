#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "lcts/policies.hpp"
#include "lcts/samplers.hpp"

namespace lcts {

enum class InstanceKind { GoodPriors, AgnosticPriors, AdversarialPriors, Custom };
enum class PolicyKind { ExactTS, UlaTS, SgldTS, UCB, MixtureTS };

struct PolicySpec {
  PolicyKind kind = PolicyKind::ExactTS;
  // MixtureTS only; corrupted arms are 0-based.
  double mixture_alpha = 0.5;
  double mixture_atom = 2.0;
  std::vector<std::size_t> corrupted_arms;

  std::string name() const;
};

struct ExperimentConfig {
  InstanceKind instance = InstanceKind::GoodPriors;
  std::filesystem::path custom_path;
  std::vector<PolicySpec> policies;
  std::size_t horizon = 10000;
  std::size_t runs = 20;
  std::uint64_t base_seed = 0;
  Schedule schedule = Schedule::Practical;
  double gamma = 1.0;
  std::size_t workers = 0;  // 0: hardware concurrency

  /// Throws ConfigError. `arms` is the instance size.
  void validate(std::size_t arms) const;
};

struct RunRecord {
  std::string policy;
  std::size_t run = 0;
  bool ok = true;
  std::string failure;
  RegretTrace trace;
};

struct AggregatePoint {
  double mean = 0.0;
  double ci_half_width = 0.0;  // 1.96 sample std / sqrt(runs)
  std::size_t runs = 0;        // surviving runs
};

struct ResultTable {
  std::string instance_name;
  std::vector<std::string> policies;  // sorted
  std::vector<RunRecord> runs;        // sorted by (policy, run)
  std::map<std::string, std::vector<AggregatePoint>> aggregates;  // per t = 1..T
};

/// The 10-arm benchmark instances: unit-variance Gaussian rewards with means
/// 1..10 and N(mu_i, 4) priors (good: 5 -> 10, agnostic: 7.5, adversarial:
/// 10 -> 5).
BanditInstance builtin_instance(InstanceKind which, std::size_t horizon);

/// Flat key=value file: reward_var, mean_i, prior_mean_i, prior_var_i (i from 1).
BanditInstance load_custom_instance(const std::filesystem::path& path, std::size_t horizon);

/// Two unit-variance arms with means (1, 0) and N(0, 1) priors.
BanditInstance counterexample_instance(std::size_t horizon);

std::string instance_label(InstanceKind which);

/// Per-arm sampler configs for a Thompson policy on `instance`.
std::vector<SamplerConfig> policy_sampler_configs(const PolicySpec& policy,
                                                  const BanditInstance& instance,
                                                  Schedule schedule, double gamma);

/// Seed of run `run` of `policy` under `base_seed`.
std::uint64_t run_key(std::uint64_t base_seed, const std::string& policy, std::size_t run);

ResultTable run_experiment(const ExperimentConfig& cfg);
ResultTable run_experiment(const ExperimentConfig& cfg, const BanditInstance& instance);

/// Mean and CI per (policy, t) from the stored traces of successful runs.
void aggregate(ResultTable& table);

/// Least-squares slope of log mean cum_regret against log t over `points`
/// log-spaced rounds in [t_lo, t_hi].
double loglog_slope(const std::vector<AggregatePoint>& curve, std::size_t t_lo, std::size_t t_hi,
                    std::size_t points = 21);

// Output. All throw IoError.

/// `policy,run,t,arm,cum_regret`, arms 1-based, floats at 17 significant digits.
void emit_csv(const ResultTable& table, const std::filesystem::path& path);
/// `policy,t,mean,ci_half_width,runs`.
void emit_summary_csv(const ResultTable& table, const std::filesystem::path& path);
/// Mean regret curves with +-CI bands, one line and one band per policy.
void emit_svg(const ResultTable& table, const std::filesystem::path& path);

// Config parsing. All throw ConfigError.

InstanceKind parse_instance(const std::string& text, std::filesystem::path* custom_path);
std::vector<PolicySpec> parse_policies(const std::string& text);
Schedule parse_schedule(const std::string& text);
/// key=value lines with `#` comments; keys must be unique.
std::map<std::string, std::string> read_key_values(const std::filesystem::path& path);

}  // namespace lcts
