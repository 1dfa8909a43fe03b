#pragma once

#include <cstdint>

namespace asianml {

/// Streaming mean / variance (Welford) with a node-cost counter. Two
/// accumulators merge exactly up to rounding (Chan et al. pairwise update).
class RunStatistics {
 public:
  void add(double x);
  void add_cost(std::uint64_t nodes) { cost_ += nodes; }
  void merge(const RunStatistics& other);

  std::uint64_t count() const { return count_; }
  double mean() const { return mean_; }
  /// Sum of squared deviations from the mean.
  double m2() const { return m2_; }
  /// Unbiased sample variance; 0 with fewer than two samples.
  double variance() const;
  /// sqrt(variance / n).
  double standard_error() const;
  std::uint64_t cost() const { return cost_; }

 private:
  std::uint64_t count_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
  std::uint64_t cost_ = 0;
};

}  // namespace asianml
