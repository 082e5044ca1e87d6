#include "lcts/policies.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lcts/errors.hpp"

namespace lcts {

std::vector<double> BanditInstance::true_means() const {
  std::vector<double> means;
  means.reserve(arms.size());
  for (const auto& a : arms) means.push_back(mean_reward(a.family, a.truth.theta_star));
  return means;
}

void BanditInstance::validate() const {
  if (arms.size() < 2) throw ConfigError("a bandit instance needs at least two arms");
  for (const auto& a : arms) {
    if (!a.truth.reward_sampler) throw ConfigError("arm is missing its reward sampler");
  }
}

std::size_t argmax_lowest(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("argmax of an empty range");
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

RoundResult thompson_round(const BanditInstance& instance, std::vector<ArmPosteriorState>& states,
                           const ArmSampler& sampler, std::uint64_t round_key) {
  const std::size_t k = instance.size();
  if (states.size() != k) throw ConfigError("one posterior state per arm is required");
  std::vector<double> sampled(k);
  for (std::size_t a = 0; a < k; ++a) {
    Rng rng = arm_stream(round_key, a);
    SampleOutcome s = sampler(a, states[a], rng);
    sampled[a] = mean_reward(instance.arms[a].family, s.theta);
    if (s.from_chain) {
      states[a].set_warm_start(std::move(s.chain_end));
    }
  }
  RoundResult r;
  r.arm = argmax_lowest(sampled);
  Rng rng = reward_stream(round_key);
  r.reward = instance.arms[r.arm].truth.reward_sampler(rng);
  states[r.arm].push(r.reward);
  return r;
}

RoundResult thompson_round(const BanditInstance& instance, std::vector<ArmPosteriorState>& states,
                           std::span<const SamplerConfig> cfgs, std::uint64_t round_key) {
  if (cfgs.size() != instance.size()) throw ConfigError("one sampler config per arm is required");
  return thompson_round(
      instance, states,
      [&](std::size_t a, const ArmPosteriorState& st, Rng& rng) {
        const auto& arm = instance.arms[a];
        return sample_arm(st, arm.family, arm.prior, cfgs[a], rng);
      },
      round_key);
}

double ucb_index(double sum, std::size_t count, std::size_t horizon, double sigma2) {
  const double c = static_cast<double>(count);
  return sum / c + std::sqrt(4.0 * sigma2 * std::log(2.0 * static_cast<double>(horizon)) / c);
}

RoundResult ucb_round(const BanditInstance& instance, std::span<std::size_t> counts,
                      std::span<double> sums, std::size_t t, std::size_t horizon, double sigma2,
                      Rng& rng) {
  const std::size_t k = instance.size();
  if (t == 0) throw std::invalid_argument("UCB rounds are numbered from 1");
  if (counts.size() != k || sums.size() != k) throw ConfigError("UCB state size mismatch");
  RoundResult r;
  if (t <= k) {
    r.arm = t - 1;
  } else {
    std::vector<double> index(k);
    for (std::size_t a = 0; a < k; ++a) index[a] = ucb_index(sums[a], counts[a], horizon, sigma2);
    r.arm = argmax_lowest(index);
  }
  r.reward = instance.arms[r.arm].truth.reward_sampler(rng);
  counts[r.arm] += 1;
  sums[r.arm] += r.reward;
  return r;
}

RegretTrace regret_trace(const BanditInstance& instance, std::span<const std::size_t> chosen) {
  const auto means = instance.true_means();
  const double best = *std::max_element(means.begin(), means.end());
  RegretTrace trace;
  trace.chosen.assign(chosen.begin(), chosen.end());
  trace.cum_regret.reserve(chosen.size());
  double total = 0.0;
  for (std::size_t a : chosen) {
    if (a >= means.size()) throw std::out_of_range("chosen arm out of range");
    total += best - means[a];
    trace.cum_regret.push_back(total);
  }
  return trace;
}

RegretTrace simulate_thompson(const BanditInstance& instance, std::span<const SamplerConfig> cfgs,
                              std::uint64_t run_key) {
  instance.validate();
  std::vector<ArmPosteriorState> states(instance.size());
  std::vector<std::size_t> chosen;
  std::vector<double> rewards;
  chosen.reserve(instance.horizon);
  rewards.reserve(instance.horizon);
  for (std::size_t t = 1; t <= instance.horizon; ++t) {
    const auto r = thompson_round(instance, states, cfgs, derive_seed({run_key, t}));
    chosen.push_back(r.arm);
    rewards.push_back(r.reward);
  }
  RegretTrace trace = regret_trace(instance, chosen);
  trace.rewards = std::move(rewards);
  return trace;
}

RegretTrace simulate_ucb(const BanditInstance& instance, double sigma2, std::uint64_t run_key) {
  instance.validate();
  const std::size_t k = instance.size();
  std::vector<std::size_t> counts(k, 0);
  std::vector<double> sums(k, 0.0);
  std::vector<std::size_t> chosen;
  std::vector<double> rewards;
  chosen.reserve(instance.horizon);
  rewards.reserve(instance.horizon);
  for (std::size_t t = 1; t <= instance.horizon; ++t) {
    Rng rng = reward_stream(derive_seed({run_key, t}));
    const auto r = ucb_round(instance, counts, sums, t, instance.horizon, sigma2, rng);
    chosen.push_back(r.arm);
    rewards.push_back(r.reward);
  }
  RegretTrace trace = regret_trace(instance, chosen);
  trace.rewards = std::move(rewards);
  return trace;
}

}  // namespace lcts
