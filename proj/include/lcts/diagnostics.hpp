#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "lcts/family.hpp"
#include "lcts/rng.hpp"

namespace lcts {

/// 1-d draws (raw parameters or alpha' theta projections).
class EmpiricalSample {
 public:
  EmpiricalSample() = default;
  explicit EmpiricalSample(std::vector<double> values, bool sorted = false)
      : values_(std::move(values)), sorted_(sorted) {}

  void sort();
  bool sorted() const { return sorted_; }
  const std::vector<double>& values() const { return values_; }
  std::size_t size() const { return values_.size(); }

 private:
  std::vector<double> values_;
  bool sorted_ = false;
};

/// Empirical W_p via the order-statistics coupling:
/// (mean_i |a_(i) - b_(i)|^p)^(1/p). Requires equal sizes and p >= 1.
double wasserstein_1d(const EmpiricalSample& a, const EmpiricalSample& b, int p);

/// Radius r with P(|theta - theta*| > r) < delta under the gamma-scaled exact
/// posterior after n pulls:
/// sqrt(2e/(m n) (d/gamma + log B + (32/gamma + 8 d kappa^2) log(1/delta))).
double concentration_radius_exact(const FamilySpec& f, double log_B, std::size_t n, double gamma,
                                  double delta);

/// 16 + 4 d kappa^2.
double approx_sigma(const FamilySpec& f);

/// Same guarantee for smoothed (SG)LD outputs:
/// sqrt(36e/(m n) (d + log B + 2 (sigma + d/(18 kappa gamma)) log(1/delta))).
double concentration_radius_approx(const FamilySpec& f, double log_B, std::size_t n, double gamma,
                                   double delta);

/// sqrt(8/(n m)) (d + log B + (32 + 8 d kappa^2) p)^(1/2).
double sampler_wasserstein_bound(const FamilySpec& f, double log_B, std::size_t n, int p);

struct TailLevel {
  double multiple = 0.0;   // t in t * scale
  double threshold = 0.0;  // t * scale
  double empirical = 0.0;  // fraction of trials above the threshold
  double bound = 0.0;      // 2 exp(-t^2 / 2)
  double se = 0.0;
  bool pass = false;
};

struct SubgaussianReport {
  std::size_t n = 0;
  std::size_t trials = 0;
  double scale = 0.0;            // L sqrt(d / (n nu))
  double empirical_scale = 0.0;  // root mean square of ||grad F_n(theta*)||
  std::vector<TailLevel> levels;
  bool pass = false;
};

/// Tail check of ||(1/n) sum_i grad log p(x_i | theta*)|| at 1, 2 and 3 times
/// its sub-Gaussian scale, with 3-SE Monte Carlo slack.
SubgaussianReport grad_subgaussian_check(const FamilySpec& f, const TrueArm& truth, std::size_t n,
                                         std::size_t n_trials, Rng& rng);

struct ConvergenceReport {
  int p = 1;
  double empirical = 0.0;
  double bound = 0.0;
  double slack = 0.0;  // 3 standard errors of the estimator
  bool pass = false;
};

ConvergenceReport sampler_convergence_report(const EmpiricalSample& exact,
                                             const EmpiricalSample& sampler, std::size_t n,
                                             const FamilySpec& f, double log_B, int p);

struct QuantileCheck {
  double delta = 0.0;
  double radius = 0.0;
  double quantile = 0.0;  // empirical (1 - delta)-quantile
  double exceed = 0.0;    // fraction of draws beyond the radius
  double slack = 0.0;     // 3 sqrt(delta (1 - delta) / M)
  bool pass = false;
};

/// Compares |theta - theta*| draws against a radius at level delta.
QuantileCheck quantile_check(std::vector<double> distances, double radius, double delta);

struct DiagnosticRow {
  std::string check;
  std::size_t n = 0;
  double empirical = 0.0;
  double bound = 0.0;
  bool pass = false;
};

/// Header `check,n,empirical,bound,verdict`, floats at 17 significant digits.
void write_diagnostics_csv(const std::vector<DiagnosticRow>& rows,
                           const std::filesystem::path& path);
std::string format_report(const std::vector<DiagnosticRow>& rows);

// Canned experiments on a 1-d Gaussian arm (sigma2 = 1, theta* = 1, prior
// N(0, 1)). Shared by the CLI and the acceptance suite.

/// W1/W2 of theoretical-schedule ULA and SGLD outputs against exact draws.
std::vector<DiagnosticRow> run_wasserstein_diagnostics(const std::vector<std::size_t>& ns,
                                                       std::size_t draws, std::uint64_t seed);

/// Exact, ULA and SGLD concentration at delta in {0.5, 0.1, 0.01}.
std::vector<DiagnosticRow> run_concentration_diagnostics(const std::vector<std::size_t>& ns,
                                                         std::size_t replicates,
                                                         std::uint64_t seed);

std::vector<DiagnosticRow> run_subgaussian_diagnostics(const std::vector<std::size_t>& ns,
                                                       std::size_t trials, std::uint64_t seed);

}  // namespace lcts
