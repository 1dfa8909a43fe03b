#include "asianml/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace asianml {

MonitoringSchedule build_schedule(std::vector<double> dates, std::vector<double> weights) {
  if (dates.empty()) throw std::invalid_argument("schedule needs at least one date");
  if (dates.size() != weights.size()) {
    throw std::invalid_argument("schedule: " + std::to_string(dates.size()) + " dates but " +
                                std::to_string(weights.size()) + " weights");
  }
  if (dates.size() > std::numeric_limits<DateIndex>::max() - 1) {
    throw std::invalid_argument("schedule: too many dates");
  }
  double previous = 0.0;
  for (double t : dates) {
    if (!std::isfinite(t) || t <= previous) {
      throw std::invalid_argument("schedule: dates must be positive and strictly increasing");
    }
    previous = t;
  }
  double total = 0.0;
  for (double w : weights) {
    if (!std::isfinite(w)) throw std::invalid_argument("schedule: non-finite weight");
    if (w == 0.0) throw std::invalid_argument("schedule: zero weight");
    total += std::fabs(w);
  }

  MonitoringSchedule s;
  s.dates_ = std::move(dates);
  s.weights_ = std::move(weights);
  double sum = 0.0;
  for (double& w : s.weights_) {
    w /= total;
    sum += w;
  }
  s.weight_sum_ = sum;
  return s;
}

std::vector<double> equidistant_dates(std::size_t m, double maturity) {
  if (m == 0) throw std::invalid_argument("equidistant_dates: m must be positive");
  if (!(maturity > 0.0)) throw std::invalid_argument("equidistant_dates: maturity must be positive");
  std::vector<double> dates(m);
  for (std::size_t j = 1; j <= m; ++j) {
    dates[j - 1] = maturity * static_cast<double>(j) / static_cast<double>(m);
  }
  dates.back() = maturity;
  return dates;
}

double CoarseFunctional::coefficient(DateIndex j) const {
  if (j == 0) return constant_;
  const auto it = std::lower_bound(support_.begin(), support_.end(), j);
  if (it == support_.end() || *it != j) return 0.0;
  return coefficients_[static_cast<std::size_t>(it - support_.begin())];
}

double CoarseFunctional::coefficient_sum() const {
  double sum = constant_;
  for (double c : coefficients_) sum += c;
  return sum;
}

double CoarseFunctional::evaluate(double f0, std::span<const double> values) const {
  double acc = constant_ * f0;
  for (std::size_t k = 0; k < coefficients_.size(); ++k) acc += coefficients_[k] * values[k];
  return acc;
}

const Level& LevelStructure::level(int l) const {
  if (l < 0) throw std::out_of_range("negative level");
  return levels_[static_cast<std::size_t>(std::min(l, max_level()))];
}

CoarseFunctional LevelStructure::functional(int l) const {
  const Level& lv = level(l);
  return CoarseFunctional(std::min(l, max_level()), lv.constant, lv.nodes, lv.coefficients);
}

CoarseFunctional coarse_functional(const LevelStructure& levels, int l) { return levels.functional(l); }

LevelStructure build_level_structure(const MonitoringSchedule& schedule) {
  const std::size_t m = schedule.size();
  const auto weights = schedule.weights();

  LevelStructure ls;
  ls.prefix_weights_.assign(m + 1, 0.0);
  ls.prefix_abs_weights_.assign(m + 1, 0.0);
  for (std::size_t j = 1; j <= m; ++j) {
    ls.prefix_weights_[j] = ls.prefix_weights_[j - 1] + weights[j - 1];
    ls.prefix_abs_weights_[j] = std::min(1.0, ls.prefix_abs_weights_[j - 1] + std::fabs(weights[j - 1]));
  }
  ls.prefix_abs_weights_[m] = 1.0;

  int top = 0;
  while ((std::size_t{1} << top) < m) ++top;
  ls.levels_.resize(static_cast<std::size_t>(top) + 1);

  Level& finest = ls.levels_[static_cast<std::size_t>(top)];
  finest.nodes.resize(m);
  for (std::size_t j = 0; j < m; ++j) finest.nodes[j] = static_cast<DateIndex>(j + 1);

  const auto& wabs = ls.prefix_abs_weights_;
  const auto last = static_cast<DateIndex>(m);
  for (int l = top - 1; l >= 0; --l) {
    const Level& finer = ls.levels_[static_cast<std::size_t>(l) + 1];
    Level& lv = ls.levels_[static_cast<std::size_t>(l)];
    lv.nodes.reserve((std::size_t{1} << l) + 1);
    for (DateIndex j : finer.nodes) {
      const double lower = std::ldexp(wabs[j - 1], l);
      const double upper = std::floor(std::ldexp(wabs[j], l));
      if (lower < upper || j == last) {
        lv.nodes.push_back(j);
      }
    }
  }

  const auto& wsum = ls.prefix_weights_;
  for (std::size_t l = 0; l < ls.levels_.size(); ++l) {
    Level& lv = ls.levels_[l];
    const std::size_t n = lv.nodes.size();
    lv.times.resize(n);
    lv.pair_weights.resize(n);
    lv.coefficients.resize(n);
    DateIndex prev = 0;
    for (std::size_t k = 0; k < n; ++k) {
      const DateIndex j = lv.nodes[k];
      lv.times[k] = schedule.date(j);
      lv.pair_weights[k] = wsum[j - 1] - wsum[prev];
      prev = j;
    }
    // Each unsimulated F_j between a pair (i, k) is replaced by (F_i + F_k) / 2.
    lv.constant = 0.5 * lv.pair_weights[0];
    for (std::size_t k = 0; k < n; ++k) {
      double c = schedule.weight(lv.nodes[k]) + 0.5 * lv.pair_weights[k];
      if (k + 1 < n) c += 0.5 * lv.pair_weights[k + 1];
      lv.coefficients[k] = c;
    }
    if (l > 0) {
      const Level& coarser = ls.levels_[l - 1];
      lv.coarser_positions.reserve(coarser.nodes.size());
      std::size_t k = 0;
      for (DateIndex j : coarser.nodes) {
        while (lv.nodes[k] != j) ++k;
        lv.coarser_positions.push_back(static_cast<std::uint32_t>(k));
      }
    }
  }
  return ls;
}

}  // namespace asianml
