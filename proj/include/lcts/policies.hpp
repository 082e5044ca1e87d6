#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "lcts/family.hpp"
#include "lcts/posterior.hpp"
#include "lcts/rng.hpp"
#include "lcts/samplers.hpp"

namespace lcts {

struct ArmModel {
  FamilySpec family;
  PriorSpec prior;
  TrueArm truth;
};

struct BanditInstance {
  std::string name;
  std::vector<ArmModel> arms;
  std::size_t horizon = 0;

  std::size_t size() const { return arms.size(); }
  /// alpha' theta* for every arm.
  std::vector<double> true_means() const;
  /// At least two arms, each with a reward sampler.
  void validate() const;
};

struct RoundResult {
  std::size_t arm = 0;  // 0-based
  double reward = 0.0;
};

/// Per-run pseudo-regret realization.
struct RegretTrace {
  std::vector<std::size_t> chosen;  // 0-based arm per round
  std::vector<double> rewards;
  std::vector<double> cum_regret;
};

/// Index of the largest value; ties go to the lowest index.
std::size_t argmax_lowest(std::span<const double> values);

/// Stream for arm `arm` within round key `round_key`.
inline Rng arm_stream(std::uint64_t round_key, std::size_t arm) {
  return Rng(derive_seed({round_key, 0xA5A5ull, arm}));
}
inline Rng reward_stream(std::uint64_t round_key) {
  return Rng(derive_seed({round_key, 0x5EEDull}));
}

/// Produces one sample for arm `arm` from its current state.
using ArmSampler =
    std::function<SampleOutcome(std::size_t arm, const ArmPosteriorState& state, Rng& rng)>;

/// One Thompson round: sample every arm, pull the argmax of alpha' theta,
/// record the reward, and store every Langevin chain_end as that arm's warm
/// start. `round_key` seeds the per-arm and reward streams.
RoundResult thompson_round(const BanditInstance& instance, std::vector<ArmPosteriorState>& states,
                           std::span<const SamplerConfig> cfgs, std::uint64_t round_key);

RoundResult thompson_round(const BanditInstance& instance, std::vector<ArmPosteriorState>& states,
                           const ArmSampler& sampler, std::uint64_t round_key);

/// Empirical mean plus sqrt(4 sigma2 log(2T) / count).
double ucb_index(double sum, std::size_t count, std::size_t horizon, double sigma2);

/// Horizon-tuned UCB. Rounds t = 1..K pull arm t; afterwards the largest
/// index wins. `counts` and `sums` are updated in place.
RoundResult ucb_round(const BanditInstance& instance, std::span<std::size_t> counts,
                      std::span<double> sums, std::size_t t, std::size_t horizon, double sigma2,
                      Rng& rng);

/// cum_regret[t] = sum_{s <= t} (max_a mean_a - mean_{chosen[s]}); rewards left empty.
RegretTrace regret_trace(const BanditInstance& instance, std::span<const std::size_t> chosen);

/// Full Thompson run of instance.horizon rounds; `run_key` seeds the rounds.
RegretTrace simulate_thompson(const BanditInstance& instance, std::span<const SamplerConfig> cfgs,
                              std::uint64_t run_key);

RegretTrace simulate_ucb(const BanditInstance& instance, double sigma2, std::uint64_t run_key);

}  // namespace lcts
