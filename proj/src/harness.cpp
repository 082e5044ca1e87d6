#include "lcts/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <set>
#include <thread>

#include "lcts/errors.hpp"

namespace lcts {

namespace {

ArmModel gaussian_arm(double true_mean, double prior_mean, double prior_var, double reward_var) {
  ArmModel arm;
  arm.family = gaussian_family(reward_var, Vector::Ones(1));
  const Vector theta_star = Vector::Constant(1, true_mean);
  arm.prior = with_log_B(gaussian_prior(Vector::Constant(1, prior_mean), prior_var), theta_star);
  arm.truth = gaussian_true_arm(arm.family, theta_star);
  return arm;
}

double shared_reward_variance(const BanditInstance& instance) {
  const auto& first = instance.arms.front().family.noise_variance;
  if (!first) throw ConfigError("UCB needs Gaussian arms with a known reward variance");
  for (const auto& a : instance.arms) {
    if (!a.family.noise_variance || *a.family.noise_variance != *first) {
      throw ConfigError("UCB needs a common known reward variance");
    }
  }
  return *first;
}

}  // namespace

std::string PolicySpec::name() const {
  switch (kind) {
    case PolicyKind::ExactTS: return "ExactTS";
    case PolicyKind::UlaTS: return "UlaTS";
    case PolicyKind::SgldTS: return "SgldTS";
    case PolicyKind::UCB: return "UCB";
    case PolicyKind::MixtureTS: return "MixtureTS";
  }
  return "unknown";
}

void ExperimentConfig::validate(std::size_t arms) const {
  if (runs < 1) throw ConfigError("runs must be at least 1");
  if (!(gamma > 0.0)) throw ConfigError("gamma must be positive");
  if (policies.empty()) throw ConfigError("no policies selected");
  std::set<std::string> names;
  for (const auto& p : policies) {
    if (!names.insert(p.name()).second) throw ConfigError("policy listed twice: " + p.name());
    if (p.kind == PolicyKind::UCB && horizon > 0 && horizon < arms) {
      throw ConfigError("UCB needs horizon >= number of arms");
    }
    if (p.kind == PolicyKind::MixtureTS) {
      if (!(p.mixture_alpha > 0.0 && p.mixture_alpha <= 1.0)) {
        throw ConfigError("mixture alpha must lie in (0, 1]");
      }
      for (auto a : p.corrupted_arms) {
        if (a >= arms) throw ConfigError("corrupted arm out of range");
      }
    }
  }
}

std::string instance_label(InstanceKind which) {
  switch (which) {
    case InstanceKind::GoodPriors: return "good";
    case InstanceKind::AgnosticPriors: return "agnostic";
    case InstanceKind::AdversarialPriors: return "adversarial";
    case InstanceKind::Custom: return "custom";
  }
  return "unknown";
}

BanditInstance builtin_instance(InstanceKind which, std::size_t horizon) {
  BanditInstance inst;
  inst.horizon = horizon;
  inst.name = instance_label(which);
  for (int i = 1; i <= 10; ++i) {
    double prior_mean = 0.0;
    switch (which) {
      case InstanceKind::GoodPriors: prior_mean = 5.0 + 5.0 * (i - 1) / 9.0; break;
      case InstanceKind::AgnosticPriors: prior_mean = 7.5; break;
      case InstanceKind::AdversarialPriors: prior_mean = 10.0 - 5.0 * (i - 1) / 9.0; break;
      case InstanceKind::Custom: throw ConfigError("custom instances are loaded from a file");
    }
    inst.arms.push_back(gaussian_arm(static_cast<double>(i), prior_mean, 4.0, 1.0));
  }
  return inst;
}

BanditInstance load_custom_instance(const std::filesystem::path& path, std::size_t horizon) {
  auto kv = read_key_values(path);
  auto number = [&](const std::string& key) {
    auto it = kv.find(key);
    if (it == kv.end()) throw ConfigError("custom instance is missing `" + key + "`");
    try {
      std::size_t used = 0;
      const double v = std::stod(it->second, &used);
      if (used != it->second.size()) throw std::invalid_argument(key);
      kv.erase(it);
      return v;
    } catch (const std::logic_error&) {
      throw ConfigError("`" + key + "` is not a number: " + it->second);
    }
  };
  BanditInstance inst;
  inst.horizon = horizon;
  inst.name = path.stem().string();
  const double reward_var = number("reward_var");
  if (!(reward_var > 0.0)) throw ConfigError("reward_var must be positive");
  for (int i = 1; kv.count("mean_" + std::to_string(i)); ++i) {
    const auto s = std::to_string(i);
    const double mean = number("mean_" + s);
    const double prior_mean = number("prior_mean_" + s);
    const double prior_var = number("prior_var_" + s);
    if (!(prior_var > 0.0)) throw ConfigError("prior_var_" + s + " must be positive");
    inst.arms.push_back(gaussian_arm(mean, prior_mean, prior_var, reward_var));
  }
  if (!kv.empty()) throw ConfigError("unexpected key in custom instance: " + kv.begin()->first);
  inst.validate();
  return inst;
}

BanditInstance counterexample_instance(std::size_t horizon) {
  BanditInstance inst;
  inst.horizon = horizon;
  inst.name = "counterexample";
  inst.arms.push_back(gaussian_arm(1.0, 0.0, 1.0, 1.0));
  inst.arms.push_back(gaussian_arm(0.0, 0.0, 1.0, 1.0));
  return inst;
}

std::vector<SamplerConfig> policy_sampler_configs(const PolicySpec& policy,
                                                  const BanditInstance& instance,
                                                  Schedule schedule, double gamma) {
  auto langevin = [&](SamplerKind kind) {
    if (schedule == Schedule::Practical) return practical_config(kind, gamma);
    SamplerConfig cfg;
    cfg.kind = kind;
    cfg.gamma = gamma;
    return cfg;
  };
  SamplerConfig exact;
  exact.kind = SamplerKind::Exact;
  exact.gamma = gamma;

  std::vector<SamplerConfig> cfgs(instance.size(), exact);
  switch (policy.kind) {
    case PolicyKind::ExactTS: break;
    case PolicyKind::UlaTS: std::fill(cfgs.begin(), cfgs.end(), langevin(SamplerKind::ULA)); break;
    case PolicyKind::SgldTS: std::fill(cfgs.begin(), cfgs.end(), langevin(SamplerKind::SGLD)); break;
    case PolicyKind::MixtureTS:
      for (std::size_t a : policy.corrupted_arms) {
        SamplerConfig& c = cfgs.at(a);
        c.kind = SamplerKind::AdversarialMixture;
        c.mixture_alpha = policy.mixture_alpha;
        c.mixture_atom = Vector::Constant(instance.arms[a].family.dim, policy.mixture_atom);
      }
      break;
    case PolicyKind::UCB: throw ConfigError("UCB has no posterior samplers");
  }
  return cfgs;
}

std::uint64_t run_key(std::uint64_t base_seed, const std::string& policy, std::size_t run) {
  return derive_seed({base_seed, fnv1a(policy), run});
}

ResultTable run_experiment(const ExperimentConfig& cfg) {
  if (cfg.instance == InstanceKind::Custom) {
    return run_experiment(cfg, load_custom_instance(cfg.custom_path, cfg.horizon));
  }
  return run_experiment(cfg, builtin_instance(cfg.instance, cfg.horizon));
}

ResultTable run_experiment(const ExperimentConfig& cfg, const BanditInstance& instance_in) {
  BanditInstance instance = instance_in;
  instance.horizon = cfg.horizon;
  instance.validate();
  cfg.validate(instance.size());

  std::vector<PolicySpec> policies = cfg.policies;
  std::sort(policies.begin(), policies.end(),
            [](const PolicySpec& a, const PolicySpec& b) { return a.name() < b.name(); });

  ResultTable table;
  table.instance_name = instance.name;
  for (const auto& p : policies) table.policies.push_back(p.name());
  table.runs.resize(policies.size() * cfg.runs);

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t job = next++; job < table.runs.size(); job = next++) {
      const PolicySpec& policy = policies[job / cfg.runs];
      RunRecord& rec = table.runs[job];
      rec.policy = policy.name();
      rec.run = job % cfg.runs;
      const std::uint64_t key = run_key(cfg.base_seed, rec.policy, rec.run);
      try {
        if (policy.kind == PolicyKind::UCB) {
          rec.trace = simulate_ucb(instance, shared_reward_variance(instance), key);
        } else {
          const auto cfgs = policy_sampler_configs(policy, instance, cfg.schedule, cfg.gamma);
          rec.trace = simulate_thompson(instance, cfgs, key);
        }
      } catch (const std::exception& e) {
        rec.ok = false;
        rec.failure = e.what();
        rec.trace = RegretTrace{};
      }
    }
  };

  std::size_t workers = cfg.workers ? cfg.workers : std::thread::hardware_concurrency();
  workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(table.runs.size(), 1));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t i = 0; i < workers; ++i) pool.emplace_back(worker);
  }
  aggregate(table);
  return table;
}

void aggregate(ResultTable& table) {
  table.aggregates.clear();
  for (const auto& name : table.policies) {
    std::vector<const RegretTrace*> traces;
    for (const auto& r : table.runs) {
      if (r.policy == name && r.ok) traces.push_back(&r.trace);
    }
    std::size_t horizon = 0;
    for (const auto* t : traces) horizon = std::max(horizon, t->cum_regret.size());
    std::vector<AggregatePoint> curve(horizon);
    const double k = static_cast<double>(traces.size());
    for (std::size_t t = 0; t < horizon; ++t) {
      double sum = 0.0;
      for (const auto* tr : traces) sum += tr->cum_regret[t];
      const double mean = sum / k;
      double ss = 0.0;
      for (const auto* tr : traces) ss += (tr->cum_regret[t] - mean) * (tr->cum_regret[t] - mean);
      const double sd = traces.size() > 1 ? std::sqrt(ss / (k - 1.0)) : 0.0;
      curve[t] = {mean, 1.96 * sd / std::sqrt(k), traces.size()};
    }
    table.aggregates[name] = std::move(curve);
  }
}

double loglog_slope(const std::vector<AggregatePoint>& curve, std::size_t t_lo, std::size_t t_hi,
                    std::size_t points) {
  if (t_lo < 1 || t_hi <= t_lo || t_hi > curve.size() || points < 2) {
    throw std::invalid_argument("slope window outside the curve");
  }
  std::vector<double> xs, ys;
  std::size_t last = 0;
  for (std::size_t i = 0; i < points; ++i) {
    const double frac = static_cast<double>(i) / static_cast<double>(points - 1);
    const auto t = static_cast<std::size_t>(std::llround(
        std::exp(std::log(double(t_lo)) + frac * (std::log(double(t_hi)) - std::log(double(t_lo))))));
    if (t == last || curve[t - 1].mean <= 0.0) continue;
    last = t;
    xs.push_back(std::log(static_cast<double>(t)));
    ys.push_back(std::log(curve[t - 1].mean));
  }
  if (xs.size() < 2) throw std::invalid_argument("not enough positive points for a slope");
  const double m = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

}  // namespace lcts
