#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "asianml/models.hpp"
#include "asianml/parallel.hpp"
#include "asianml/payoff.hpp"
#include "asianml/rng.hpp"
#include "asianml/schedule.hpp"
#include "asianml/schemes.hpp"

namespace asianml {

/// Geometric level law p_l = (1 - q) q^l, optionally truncated to {0..L} and
/// renormalised.
class LevelDistribution {
 public:
  /// q = 2^{-(beta+1)/2}: p_l = (1 - 2^{-(beta+1)/2}) 2^{-(beta+1) l / 2}.
  static LevelDistribution unbiased(double beta, std::optional<int> max_level = std::nullopt);
  /// p_l = 2^{-(l+1)}.
  static LevelDistribution halving();

  double ratio() const { return ratio_; }
  std::optional<int> max_level() const { return max_level_; }
  double probability(int l) const;
  /// Inversion of the (truncated) geometric law; one uniform per draw.
  int sample(RngStream& rng) const;

 private:
  LevelDistribution(double ratio, std::optional<int> max_level);

  double ratio_;
  double log_ratio_;
  std::optional<int> max_level_;
  double tail_ = 0.0;  ///< q^{L+1}, or 0 when untruncated
};

struct EstimateReport {
  std::string method;
  std::uint64_t n = 0;
  double mean = 0.0;   ///< undiscounted estimate of E[f(A)] - a
  double price = 0.0;  ///< e^{-rT} (mean + a)
  double std_error = 0.0;  ///< discounted standard error of price
  double estimator_variance = 0.0;    ///< variance of `mean`
  double replication_variance = 0.0;  ///< variance of a single replication
  std::uint64_t cost = 0;             ///< simulated price nodes
  double work_normalized_variance = 0.0;  ///< cost * std_error^2
  std::optional<double> vrf;
  /// Bound on |E[mean] - (E f(A) - a)| (truncated estimator only).
  std::optional<double> bias_bound;
  /// var(f(A)) from full paths (plain Monte Carlo only).
  std::optional<double> payoff_variance;
  /// Samples taken per level in the second MLMC phase.
  std::vector<std::uint64_t> level_counts;
};

struct LevelSample {
  double value = 0.0;
  std::uint64_t nodes = 0;
};

/// One draw of U_l - U_{l-1}: a single exact path on J_l feeds both A_l and
/// A_{l-1} (J_{l-1} is a subset of J_l). l = 0 gives U_0; l > L gives 0 at no cost.
LevelSample sample_level_difference_exact(const LevelStructure& levels, const OptionSpec& spec,
                                          const ForwardSampler& sampler, int level, RngStream& rng,
                                          std::vector<double>& buffer);
LevelSample sample_level_difference_exact(const LevelStructure& levels, const OptionSpec& spec,
                                          const ForwardSampler& sampler, int level, RngStream& rng);

/// One draw of U^_l - U^_{l-1} from a coupled Euler/Milstein simulation on
/// G(J_l, l) and G(J_{l-1}, l-1).
LevelSample sample_level_difference_coupled(const LevelStructure& levels, const OptionSpec& spec,
                                            const Sde& sde, Scheme scheme, int level,
                                            RngStream& rng);

enum class LevelTruncation {
  at_max_level,  ///< p_l truncated to {0..L} and renormalised
  none,          ///< literal untruncated law; levels above L contribute 0
};

/// Randomised multilevel estimator with exact sampling: V = (U_N - U_{N-1}) / p_N,
/// p_l = (1 - 2^{-3/2}) 2^{-3l/2}.
EstimateReport rmlmc_estimate(const LevelStructure& levels, const OptionSpec& spec,
                              const ForwardSampler& sampler, std::uint64_t n,
                              const ParallelOptions& parallel,
                              LevelTruncation truncation = LevelTruncation::at_max_level);

struct MlmcOptions {
  std::uint64_t pilot_n = 10000;
  /// m is replaced by budget_multiplier * m in the sample allocation.
  double budget_multiplier = 30.0;
  /// Independent copies of the multilevel estimate that are averaged.
  std::uint64_t outer = 1;
};

/// n_l = floor(1 + M m sqrt(mu_l / |J_l|) / sum_l' sqrt(mu_l' |J_l'|)) with
/// M = multiplier. All-zero mu gives n_l = 1.
std::vector<std::uint64_t> mlmc_allocation(std::span<const double> mu,
                                           std::span<const std::size_t> sizes, std::size_t m,
                                           double multiplier);

/// Classical multilevel estimator over levels 0..L: a pilot phase estimates
/// mu_l, then an independent phase takes outer * n_l differences per level.
/// Pilot cost is included in the reported cost.
EstimateReport mlmc_estimate(const LevelStructure& levels, const OptionSpec& spec,
                             const ForwardSampler& sampler, const MlmcOptions& options,
                             const ParallelOptions& parallel);

/// Unbiased randomised multilevel estimator on a coupled scheme with strong
/// order beta > 1 (Milstein): untruncated p_l with beta = 2.
EstimateReport rmlmc_coupled_estimate(const LevelStructure& levels, const OptionSpec& spec,
                                      const Sde& sde, Scheme scheme, std::uint64_t n,
                                      const ParallelOptions& parallel);

/// ceil(2 log2(1 / epsilon)).
int truncation_level(double epsilon);

/// Empirical A2 constants of a scheme: c2 with ||F^_m - F_m||^2 <= c2 2^{-beta l},
/// and var(F_m) from the finest pilot level.
struct SchemeConstants {
  double c2 = 0.0;
  double terminal_variance = 0.0;
  std::uint64_t nodes = 0;  ///< simulated states spent on the estimate
};

/// Estimated from consecutive-level differences at maturity: if the error is
/// c 2^{-beta l}, then ||F^_l - F^_{l-1}||^2 ~ c 2^{-beta (l-1)} (1 - 2^{-beta/2})^2.
SchemeConstants estimate_scheme_constants(const Sde& sde, const MonitoringSchedule& schedule,
                                          Scheme scheme, int max_level, std::uint64_t paths,
                                          RngStream& rng);

/// Biased randomised multilevel estimator on the Euler scheme: p_l = 2^{-(l+1)},
/// replications with N > ceil(2 log2(1/eps)) contribute 0. The report carries
/// bias_bound = sqrt(c3) kappa eps with c3 = 2 (c2 + var(F_m)) estimated from a
/// pilot of `pilot_n` paths (pilot cost included).
EstimateReport rmlmc_truncated_estimate(const LevelStructure& levels, const OptionSpec& spec,
                                        const Sde& sde, double epsilon, std::uint64_t n,
                                        const ParallelOptions& parallel,
                                        std::uint64_t pilot_n = 10000);

/// Plain Monte Carlo on full paths over all m dates; cost n * m. Also
/// reports var(f(A)).
EstimateReport plain_mc_estimate(const OptionSpec& spec, const ForwardSampler& sampler,
                                 std::uint64_t n, const ParallelOptions& parallel);

}  // namespace asianml
