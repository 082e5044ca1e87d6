#include "lcts/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

#include "lcts/errors.hpp"

namespace lcts {

namespace {

void check_radius_args(std::size_t n, double gamma, double delta) {
  if (n == 0) throw std::invalid_argument("concentration radius needs n >= 1");
  if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be positive");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void EmpiricalSample::sort() {
  if (!sorted_) std::sort(values_.begin(), values_.end());
  sorted_ = true;
}

double wasserstein_1d(const EmpiricalSample& a, const EmpiricalSample& b, int p) {
  if (p < 1) throw std::invalid_argument("Wasserstein order must be >= 1");
  if (a.size() != b.size() || a.size() == 0) {
    throw std::invalid_argument("Wasserstein estimator needs equal, nonzero sample counts");
  }
  EmpiricalSample sa = a.sorted() ? a : EmpiricalSample(a.values());
  EmpiricalSample sb = b.sorted() ? b : EmpiricalSample(b.values());
  sa.sort();
  sb.sort();
  const auto& x = sa.values();
  const auto& y = sb.values();
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) acc += std::pow(std::abs(x[i] - y[i]), p);
  return std::pow(acc / static_cast<double>(x.size()), 1.0 / p);
}

double concentration_radius_exact(const FamilySpec& f, double log_B, std::size_t n, double gamma,
                                  double delta) {
  check_radius_args(n, gamma, delta);
  const double kappa = condition_number(f);
  const double d = f.dim;
  const double inner = d / gamma + log_B +
                       (32.0 / gamma + 8.0 * d * kappa * kappa) * std::log(1.0 / delta);
  return std::sqrt(2.0 * std::numbers::e / (f.m * static_cast<double>(n)) * inner);
}

double approx_sigma(const FamilySpec& f) {
  const double kappa = condition_number(f);
  return 16.0 + 4.0 * f.dim * kappa * kappa;
}

double concentration_radius_approx(const FamilySpec& f, double log_B, std::size_t n, double gamma,
                                   double delta) {
  check_radius_args(n, gamma, delta);
  const double kappa = condition_number(f);
  const double d = f.dim;
  const double inner =
      d + log_B + 2.0 * (approx_sigma(f) + d / (18.0 * kappa * gamma)) * std::log(1.0 / delta);
  return std::sqrt(36.0 * std::numbers::e / (f.m * static_cast<double>(n)) * inner);
}

double sampler_wasserstein_bound(const FamilySpec& f, double log_B, std::size_t n, int p) {
  if (n == 0) throw std::invalid_argument("Wasserstein bound needs n >= 1");
  const double kappa = condition_number(f);
  const double d = f.dim;
  return std::sqrt(8.0 / (static_cast<double>(n) * f.m)) *
         std::sqrt(d + log_B + (32.0 + 8.0 * d * kappa * kappa) * p);
}

SubgaussianReport grad_subgaussian_check(const FamilySpec& f, const TrueArm& truth, std::size_t n,
                                         std::size_t n_trials, Rng& rng) {
  if (n == 0 || n_trials == 0) throw std::invalid_argument("need n >= 1 and at least one trial");
  SubgaussianReport rep;
  rep.n = n;
  rep.trials = n_trials;
  rep.scale = f.L * std::sqrt(static_cast<double>(f.dim) / (static_cast<double>(n) * f.nu));

  std::vector<double> norms(n_trials);
  std::vector<double> xs(n);
  double sq = 0.0;
  for (std::size_t t = 0; t < n_trials; ++t) {
    for (auto& x : xs) x = truth.reward_sampler(rng);
    Vector g = Vector::Zero(f.dim);
    accumulate_grad_log_likelihood(f, truth.theta_star, xs, g);
    norms[t] = g.norm() / static_cast<double>(n);
    sq += norms[t] * norms[t];
  }
  rep.empirical_scale = std::sqrt(sq / static_cast<double>(n_trials));

  rep.pass = true;
  for (double mult : {1.0, 2.0, 3.0}) {
    TailLevel lvl;
    lvl.multiple = mult;
    lvl.threshold = mult * rep.scale;
    const auto above = std::count_if(norms.begin(), norms.end(),
                                     [&](double v) { return v > lvl.threshold; });
    lvl.empirical = static_cast<double>(above) / static_cast<double>(n_trials);
    lvl.bound = 2.0 * std::exp(-mult * mult / 2.0);
    lvl.se = std::sqrt(lvl.empirical * (1.0 - lvl.empirical) / static_cast<double>(n_trials));
    lvl.pass = lvl.empirical <= lvl.bound + 3.0 * lvl.se;
    rep.pass = rep.pass && lvl.pass;
    rep.levels.push_back(lvl);
  }
  return rep;
}

ConvergenceReport sampler_convergence_report(const EmpiricalSample& exact,
                                             const EmpiricalSample& sampler, std::size_t n,
                                             const FamilySpec& f, double log_B, int p) {
  ConvergenceReport rep;
  rep.p = p;
  rep.empirical = wasserstein_1d(exact, sampler, p);
  rep.bound = sampler_wasserstein_bound(f, log_B, n, p);

  // Delta-method standard error of (mean c_i)^(1/p), c_i = |a_(i) - b_(i)|^p.
  EmpiricalSample a = exact, b = sampler;
  a.sort();
  b.sort();
  const std::size_t m = a.size();
  std::vector<double> c(m);
  double mean = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    c[i] = std::pow(std::abs(a.values()[i] - b.values()[i]), p);
    mean += c[i];
  }
  mean /= static_cast<double>(m);
  double var = 0.0;
  for (double v : c) var += (v - mean) * (v - mean);
  var /= static_cast<double>(std::max<std::size_t>(m - 1, 1));
  const double se_mean = std::sqrt(var / static_cast<double>(m));
  const double se = rep.empirical > 0.0 ? se_mean / (p * std::pow(rep.empirical, p - 1)) : 0.0;
  rep.slack = 3.0 * se;
  rep.pass = rep.empirical <= rep.bound + rep.slack;
  return rep;
}

QuantileCheck quantile_check(std::vector<double> distances, double radius, double delta) {
  if (distances.empty()) throw std::invalid_argument("quantile check needs draws");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
  std::sort(distances.begin(), distances.end());
  const double m = static_cast<double>(distances.size());
  QuantileCheck q;
  q.delta = delta;
  q.radius = radius;
  auto idx = static_cast<std::size_t>(std::ceil((1.0 - delta) * m));
  idx = std::clamp<std::size_t>(idx, 1, distances.size()) - 1;
  q.quantile = distances[idx];
  const auto beyond = distances.end() - std::upper_bound(distances.begin(), distances.end(), radius);
  q.exceed = static_cast<double>(beyond) / m;
  q.slack = 3.0 * std::sqrt(delta * (1.0 - delta) / m);
  q.pass = q.exceed <= delta + q.slack;
  return q;
}

void write_diagnostics_csv(const std::vector<DiagnosticRow>& rows,
                           const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << "check,n,empirical,bound,verdict\n";
  for (const auto& r : rows) {
    out << r.check << ',' << r.n << ',' << fmt17(r.empirical) << ',' << fmt17(r.bound) << ','
        << (r.pass ? "pass" : "fail") << '\n';
  }
  if (!out) throw IoError("write failed for " + path.string());
}

std::string format_report(const std::vector<DiagnosticRow>& rows) {
  std::ostringstream os;
  std::size_t failed = 0;
  for (const auto& r : rows) {
    char line[256];
    std::snprintf(line, sizeof(line), "%-4s %-44s n=%-6zu empirical=%-12.6g bound=%.6g\n",
                  r.pass ? "ok" : "FAIL", r.check.c_str(), r.n, r.empirical, r.bound);
    os << line;
    if (!r.pass) ++failed;
  }
  os << rows.size() - failed << "/" << rows.size() << " checks passed\n";
  return os.str();
}

}  // namespace lcts
