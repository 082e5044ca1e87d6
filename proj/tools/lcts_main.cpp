// lcts: Thompson-sampling bandit benchmark, sampler diagnostics, and the
// corrupted-posterior counterexample.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lcts/diagnostics.hpp"
#include "lcts/errors.hpp"
#include "lcts/harness.hpp"

namespace fs = std::filesystem;
using namespace lcts;

namespace {

constexpr int kConfigError = 1;
constexpr int kIoError = 2;

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
}

void report_failures(const ResultTable& table) {
  for (const auto& r : table.runs) {
    if (!r.ok) std::cerr << "run failed: " << r.policy << " #" << r.run << ": " << r.failure << "\n";
  }
}

void write_tables(const ResultTable& table, const fs::path& out) {
  emit_csv(table, out / "results.csv");
  emit_summary_csv(table, out / "summary.csv");
  bool any = false;
  for (const auto& [name, curve] : table.aggregates) any = any || !curve.empty();
  if (any) emit_svg(table, out / ("regret_" + table.instance_name + ".svg"));
}

void print_finals(const ResultTable& table) {
  for (const auto& name : table.policies) {
    const auto& curve = table.aggregates.at(name);
    if (curve.empty()) continue;
    std::printf("%-10s final mean regret %10.3f +- %.3f (%zu runs)\n", name.c_str(),
                curve.back().mean, curve.back().ci_half_width, curve.back().runs);
  }
}

std::vector<std::size_t> parse_n_list(const std::string& text) {
  std::vector<std::size_t> ns;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto comma = text.find(',', pos);
    const std::string tok = text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    if (!tok.empty()) {
      try {
        std::size_t used = 0;
        const long long v = std::stoll(tok, &used);
        if (used != tok.size() || v < 1) throw std::invalid_argument(tok);
        ns.push_back(static_cast<std::size_t>(v));
      } catch (const std::logic_error&) {
        throw ConfigError("bad entry in --n: `" + tok + "`");
      }
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (ns.empty()) throw ConfigError("--n needs at least one value");
  return ns;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Approximate Thompson sampling benchmark for log-concave bandits"};
  app.require_subcommand(1);

  // bench
  auto* bench = app.add_subcommand("bench", "Run regret benchmarks");
  std::string config_file, instance_text = "good", policies_text = "exact,ula,sgld,ucb";
  std::string schedule_text = "practical", bench_out = "out";
  std::size_t horizon = 10000, runs = 20, workers = 0;
  std::uint64_t seed = 0;
  double gamma = 1.0, mixture_alpha = 0.5, mixture_atom = 2.0;
  std::vector<std::size_t> corrupt = {2};
  bench->add_option("--config", config_file, "key=value config file; flags override it");
  auto* o_instance = bench->add_option("--instance", instance_text, "good|agnostic|adversarial|custom:<path>");
  auto* o_policies = bench->add_option("--policies", policies_text, "comma list of exact,ula,sgld,ucb,mixture");
  auto* o_horizon = bench->add_option("--horizon", horizon, "rounds T");
  auto* o_runs = bench->add_option("--runs", runs, "seeded runs per policy");
  auto* o_seed = bench->add_option("--seed", seed, "base seed");
  auto* o_schedule = bench->add_option("--schedule", schedule_text, "theoretical|practical");
  auto* o_gamma = bench->add_option("--gamma", gamma, "posterior scale");
  auto* o_workers = bench->add_option("--workers", workers, "worker threads (0: all cores)");
  bench->add_option("--mixture-alpha", mixture_alpha, "MixtureTS corruption exponent");
  bench->add_option("--mixture-atom", mixture_atom, "MixtureTS point-mass location");
  bench->add_option("--corrupt", corrupt, "MixtureTS corrupted arms (1-based)")->delimiter(',');
  bench->add_option("--out", bench_out, "output directory");

  // diagnose
  auto* diagnose = app.add_subcommand("diagnose", "Check sampler and concentration bounds");
  std::string check, n_text, diag_out = "out";
  std::size_t draws = 0;
  std::uint64_t diag_seed = 0;
  diagnose->add_option("--check", check, "concentration|wasserstein|subgaussian")->required();
  diagnose->add_option("--n", n_text, "comma list of pull counts")->required();
  diagnose->add_option("--draws", draws, "samples/replicates/trials (default per check)");
  diagnose->add_option("--seed", diag_seed, "seed");
  diagnose->add_option("--out", diag_out, "output directory");

  // counterexample
  auto* counter = app.add_subcommand("counterexample", "Corrupted-posterior regret scaling");
  double cx_alpha = 0.5, cx_atom = 2.0;
  std::size_t cx_horizon = 100000, cx_runs = 50, cx_workers = 0;
  std::uint64_t cx_seed = 0;
  std::string cx_out = "out";
  counter->add_option("--alpha", cx_alpha, "corruption exponent in (0, 1]");
  counter->add_option("--atom", cx_atom, "point-mass location");
  counter->add_option("--horizon", cx_horizon, "rounds T");
  counter->add_option("--runs", cx_runs, "seeded runs");
  counter->add_option("--seed", cx_seed, "base seed");
  counter->add_option("--workers", cx_workers, "worker threads (0: all cores)");
  counter->add_option("--out", cx_out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kConfigError;
  }

  try {
    if (*bench) {
      ExperimentConfig cfg;
      if (!config_file.empty()) {
        const auto kv = read_key_values(config_file);
        auto get = [&](const char* key, std::string& dst) {
          if (auto it = kv.find(key); it != kv.end()) dst = it->second;
        };
        auto get_num = [&](const char* key, auto& dst) {
          if (auto it = kv.find(key); it != kv.end()) {
            try {
              if constexpr (std::is_same_v<std::decay_t<decltype(dst)>, double>) {
                if (!o_gamma->count()) dst = std::stod(it->second);
              } else {
                dst = static_cast<std::decay_t<decltype(dst)>>(std::stoull(it->second));
              }
            } catch (const std::logic_error&) {
              throw ConfigError(std::string("bad value for ") + key);
            }
          }
        };
        for (const auto& [k, v] : kv) {
          static const char* known[] = {"instance", "policies", "horizon", "runs", "seed",
                                        "schedule", "gamma", "workers"};
          if (std::find(std::begin(known), std::end(known), k) == std::end(known)) {
            throw ConfigError("unknown config key `" + k + "`");
          }
        }
        if (!o_instance->count()) get("instance", instance_text);
        if (!o_policies->count()) get("policies", policies_text);
        if (!o_schedule->count()) get("schedule", schedule_text);
        if (!o_horizon->count()) get_num("horizon", horizon);
        if (!o_runs->count()) get_num("runs", runs);
        if (!o_seed->count()) get_num("seed", seed);
        if (!o_workers->count()) get_num("workers", workers);
        get_num("gamma", gamma);
      }
      cfg.instance = parse_instance(instance_text, &cfg.custom_path);
      cfg.policies = parse_policies(policies_text);
      for (auto& p : cfg.policies) {
        if (p.kind != PolicyKind::MixtureTS) continue;
        p.mixture_alpha = mixture_alpha;
        p.mixture_atom = mixture_atom;
        for (auto a : corrupt) {
          if (a == 0) throw ConfigError("--corrupt arms are 1-based");
          p.corrupted_arms.push_back(a - 1);
        }
      }
      cfg.horizon = horizon;
      cfg.runs = runs;
      cfg.base_seed = seed;
      cfg.schedule = parse_schedule(schedule_text);
      cfg.gamma = gamma;
      cfg.workers = workers;

      const ResultTable table = run_experiment(cfg);
      ensure_dir(bench_out);
      write_tables(table, bench_out);
      report_failures(table);
      print_finals(table);
    } else if (*diagnose) {
      const auto ns = parse_n_list(n_text);
      std::vector<DiagnosticRow> rows;
      if (check == "concentration") {
        rows = run_concentration_diagnostics(ns, draws ? draws : 4000, diag_seed);
      } else if (check == "wasserstein") {
        rows = run_wasserstein_diagnostics(ns, draws ? draws : 20000, diag_seed);
      } else if (check == "subgaussian") {
        rows = run_subgaussian_diagnostics(ns, draws ? draws : 10000, diag_seed);
      } else {
        throw ConfigError("unknown check `" + check + "`");
      }
      ensure_dir(diag_out);
      write_diagnostics_csv(rows, fs::path(diag_out) / "diagnostics.csv");
      std::cout << format_report(rows);
    } else if (*counter) {
      ExperimentConfig cfg;
      cfg.horizon = cx_horizon;
      cfg.runs = cx_runs;
      cfg.base_seed = cx_seed;
      cfg.workers = cx_workers;
      PolicySpec exact, mixture;
      exact.kind = PolicyKind::ExactTS;
      mixture.kind = PolicyKind::MixtureTS;
      mixture.mixture_alpha = cx_alpha;
      mixture.mixture_atom = cx_atom;
      mixture.corrupted_arms = {1};
      cfg.policies = {exact, mixture};
      const ResultTable table = run_experiment(cfg, counterexample_instance(cx_horizon));
      ensure_dir(cx_out);
      write_tables(table, cx_out);
      report_failures(table);
      print_finals(table);

      std::vector<DiagnosticRow> rows;
      if (cx_horizon >= 100) {
        const std::size_t lo = cx_horizon / 100;
        const double s_mix = loglog_slope(table.aggregates.at("MixtureTS"), lo, cx_horizon);
        const double s_exact = loglog_slope(table.aggregates.at("ExactTS"), lo, cx_horizon);
        const double target = 1.0 - cx_alpha;
        rows.push_back({"counterexample/slope/MixtureTS", cx_horizon, s_mix, target,
                         s_mix >= target - 0.15 && s_mix <= target + 0.15});
        rows.push_back({"counterexample/slope/ExactTS", cx_horizon, s_exact, 0.2, s_exact <= 0.2});
        write_diagnostics_csv(rows, fs::path(cx_out) / "diagnostics.csv");
        std::cout << format_report(rows);
      }
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kIoError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  }
  return 0;
}
