#pragma once

// Independent reference computations for the unit tests. Nothing here calls
// into the library's posterior or sampler code paths.

#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

#include <Eigen/Core>

namespace lcts::oracle {

inline Eigen::VectorXd finite_diff_grad(const std::function<double(const Eigen::VectorXd&)>& fn,
                                        const Eigen::VectorXd& at, double h = 1e-5) {
  Eigen::VectorXd g(at.size());
  for (Eigen::Index i = 0; i < at.size(); ++i) {
    Eigen::VectorXd up = at, dn = at;
    up[i] += h;
    dn[i] -= h;
    g[i] = (fn(up) - fn(dn)) / (2.0 * h);
  }
  return g;
}

// Composite Simpson on [lo, hi] with an even number of intervals.
inline double simpson(const std::function<double(double)>& fn, double lo, double hi,
                      std::size_t intervals) {
  if (intervals % 2) ++intervals;
  const double h = (hi - lo) / static_cast<double>(intervals);
  double s = fn(lo) + fn(hi);
  for (std::size_t i = 1; i < intervals; ++i) {
    s += fn(lo + h * static_cast<double>(i)) * ((i % 2) ? 4.0 : 2.0);
  }
  return s * h / 3.0;
}

struct GridMoments {
  double log_z = 0.0;  // log of the integral of exp(-U)
  double mean = 0.0;
  double variance = 0.0;
};

// Normalizer and moments of exp(-U) on a 1-d grid. `shift` is subtracted from
// U before exponentiating to keep the integrand in range.
inline GridMoments grid_moments(const std::function<double(double)>& neg_log_density, double lo,
                                double hi, double shift, std::size_t intervals = 200000) {
  auto w = [&](double t) { return std::exp(-(neg_log_density(t) - shift)); };
  const double z = simpson(w, lo, hi, intervals);
  const double m1 = simpson([&](double t) { return t * w(t); }, lo, hi, intervals) / z;
  const double m2 =
      simpson([&](double t) { return (t - m1) * (t - m1) * w(t); }, lo, hi, intervals) / z;
  return {std::log(z) - shift, m1, m2};
}

// All size-k subsets of {0, ..., n-1}.
inline std::vector<std::vector<std::size_t>> all_subsets(std::size_t n, std::size_t k) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> cur;
  std::function<void(std::size_t)> rec = [&](std::size_t start) {
    if (cur.size() == k) {
      out.push_back(cur);
      return;
    }
    for (std::size_t i = start; i < n; ++i) {
      cur.push_back(i);
      rec(i + 1);
      cur.pop_back();
    }
  };
  rec(0);
  return out;
}

inline double sample_mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

inline double sample_variance(const std::vector<double>& v) {
  const double m = sample_mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / static_cast<double>(v.size() - 1);
}

}  // namespace lcts::oracle
