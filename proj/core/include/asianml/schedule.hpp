#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace asianml {

/// 1-based monitoring-date index; index 0 stands for t_0 = 0 and F_0.
using DateIndex = std::uint32_t;

/// Monitoring dates t_1 < ... < t_m = T with non-zero signed weights whose
/// absolute values sum to 1. Immutable once built.
class MonitoringSchedule {
 public:
  std::size_t size() const { return dates_.size(); }
  double maturity() const { return dates_.back(); }

  /// dates()[j - 1] is t_j.
  std::span<const double> dates() const { return dates_; }
  std::span<const double> weights() const { return weights_; }

  double date(DateIndex j) const { return j == 0 ? 0.0 : dates_[j - 1]; }
  double weight(DateIndex j) const { return weights_[j - 1]; }

  /// W(1, m), the signed weight total.
  double weight_sum() const { return weight_sum_; }

 private:
  friend MonitoringSchedule build_schedule(std::vector<double> dates, std::vector<double> weights);
  MonitoringSchedule() = default;

  std::vector<double> dates_;
  std::vector<double> weights_;
  double weight_sum_ = 0.0;
};

/// Validates the inputs and rescales the weights so that sum |w_j| = 1.
/// Throws std::invalid_argument on length mismatch, empty input, non-positive
/// or non-increasing dates, or any zero / non-finite weight.
MonitoringSchedule build_schedule(std::vector<double> dates, std::vector<double> weights);

/// Dates t_j = j T / m.
std::vector<double> equidistant_dates(std::size_t m, double maturity);

/// Sparse linear functional A_l = c_0 F_0 + sum_{j in J_l} c_j F_j. A view into
/// the owning LevelStructure.
class CoarseFunctional {
 public:
  CoarseFunctional(int level, double constant, std::span<const DateIndex> support,
                   std::span<const double> coefficients)
      : level_(level), constant_(constant), support_(support), coefficients_(coefficients) {}

  int level() const { return level_; }
  /// Coefficient of F_0.
  double constant() const { return constant_; }
  /// J_l, sorted; coefficients() is aligned with it.
  std::span<const DateIndex> support() const { return support_; }
  std::span<const double> coefficients() const { return coefficients_; }

  /// Coefficient of F_j (0 outside the support).
  double coefficient(DateIndex j) const;
  double coefficient_sum() const;

  /// `values` is aligned with support().
  double evaluate(double f0, std::span<const double> values) const;

 private:
  int level_;
  double constant_;
  std::span<const DateIndex> support_;
  std::span<const double> coefficients_;
};

/// Per-level data produced by Algorithm M.
struct Level {
  std::vector<DateIndex> nodes;  ///< J_l, sorted
  std::vector<double> times;     ///< t_j for j in J_l
  /// W(i+1, k-1) for each consecutive pair (i, k) of {0} u J_l, keyed by the
  /// position of k in nodes.
  std::vector<double> pair_weights;
  /// Coefficients of A_l aligned with nodes, plus the F_0 coefficient.
  std::vector<double> coefficients;
  double constant = 0.0;
  /// Position of each element of J_{l-1} inside nodes (empty at level 0).
  std::vector<std::uint32_t> coarser_positions;
};

/// Nested index sets J_0 = {m} c J_1 c ... c J_L = {1..m} together with the
/// trapezoid coefficients of every A_l. Built once in O(m); immutable.
class LevelStructure {
 public:
  /// L = ceil(log2 m).
  int max_level() const { return static_cast<int>(levels_.size()) - 1; }
  std::size_t date_count() const { return prefix_weights_.size() - 1; }

  /// Level data; any l >= L maps to level L since A_l = A there.
  const Level& level(int l) const;

  /// W(1, j) and W'(1, j) for j = 0..m.
  std::span<const double> prefix_weights() const { return prefix_weights_; }
  std::span<const double> prefix_abs_weights() const { return prefix_abs_weights_; }

  CoarseFunctional functional(int l) const;

 private:
  friend LevelStructure build_level_structure(const MonitoringSchedule& schedule);

  std::vector<Level> levels_;
  std::vector<double> prefix_weights_;
  std::vector<double> prefix_abs_weights_;
};

/// Algorithm M: prefix sums, backward filtering of J_{l+1} by the floor
/// condition 2^l W'(1, j-1) < floor(2^l W'(1, j)), then pair coefficients
/// W(i+1, k-1) = W(1, k-1) - W(1, i).
///
/// The floor condition is evaluated on the double-precision prefix sums with
/// no tolerance; a boundary misclassification changes variance only, never
/// the expectation. W'(1, m) is pinned to 1 and m is kept in every J_l.
LevelStructure build_level_structure(const MonitoringSchedule& schedule);

/// A_l for level l >= 0 (levels beyond L return the exact average A).
CoarseFunctional coarse_functional(const LevelStructure& levels, int l);

}  // namespace asianml
