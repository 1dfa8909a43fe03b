#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <vector>

namespace asianml::testing {

struct Moments {
  double mean = 0.0;
  double variance = 0.0;
  double se = 0.0;
};

// Two-pass reference, kept separate from the library accumulator.
inline Moments moments(std::span<const double> xs) {
  const double n = static_cast<double>(xs.size());
  const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  const double var = ss / (n - 1.0);
  return {mean, var, std::sqrt(var / n)};
}

inline double combined_se(double a, double b) { return std::sqrt(a * a + b * b); }

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// e^{-rT} (F N(d1) - K N(d2)).
inline double black76_call(double forward, double strike, double sigma, double rate, double t) {
  const double sd = sigma * std::sqrt(t);
  const double d1 = (std::log(forward / strike) + 0.5 * sd * sd) / sd;
  const double d2 = d1 - sd;
  return std::exp(-rate * t) * (forward * normal_cdf(d1) - strike * normal_cdf(d2));
}

// Two-sample Kolmogorov-Smirnov statistic.
inline double ks_statistic(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / a.size() - static_cast<double>(j) / b.size()));
  }
  return d;
}

// Critical value of the two-sample KS test at level 1%.
inline double ks_critical_1pct(std::size_t n1, std::size_t n2) {
  const double n = static_cast<double>(n1), m = static_cast<double>(n2);
  return 1.628 * std::sqrt((n + m) / (n * m));
}

// Least-squares slope of y against x.
inline double slope(std::span<const double> x, std::span<const double> y) {
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

}  // namespace asianml::testing
