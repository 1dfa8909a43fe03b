#include "asianml/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace asianml {
namespace {

// Stream tags, so that phases of one run never share random numbers.
constexpr std::uint64_t kTagRmlmc = 0x11;
constexpr std::uint64_t kTagPlain = 0x22;
constexpr std::uint64_t kTagMlmcPilot = 0x33;
constexpr std::uint64_t kTagMlmcMain = 0x44;
constexpr std::uint64_t kTagCoupled = 0x55;
constexpr std::uint64_t kTagTruncated = 0x66;
constexpr std::uint64_t kTagSchemePilot = 0x77;

std::uint64_t level_tag(std::uint64_t phase, int level) {
  return (phase << 32) | static_cast<std::uint64_t>(level);
}

void require_replications(std::uint64_t n, const char* who) {
  if (n < 2) throw std::invalid_argument(std::string(who) + ": need at least 2 replications");
}

EstimateReport make_report(std::string method, const OptionSpec& spec, std::uint64_t n, double mean,
                           double estimator_variance, double replication_variance,
                           std::uint64_t cost) {
  EstimateReport r;
  r.method = std::move(method);
  r.n = n;
  r.mean = mean;
  r.price = spec.price_from_mean(mean);
  r.estimator_variance = estimator_variance;
  r.replication_variance = replication_variance;
  r.std_error = spec.discount() * std::sqrt(estimator_variance);
  r.cost = cost;
  r.work_normalized_variance = static_cast<double>(cost) * r.std_error * r.std_error;
  return r;
}

EstimateReport report_from_stats(std::string method, const OptionSpec& spec,
                                 const RunStatistics& stats) {
  const double var = stats.variance();
  return make_report(std::move(method), spec, stats.count(), stats.mean(),
                     var / static_cast<double>(stats.count()), var, stats.cost());
}

}  // namespace

// Level distribution

LevelDistribution::LevelDistribution(double ratio, std::optional<int> max_level)
    : ratio_(ratio), log_ratio_(std::log(ratio)), max_level_(max_level) {
  if (!(ratio > 0.0 && ratio < 1.0)) throw std::invalid_argument("level ratio must lie in (0, 1)");
  if (max_level_) {
    if (*max_level_ < 0) throw std::invalid_argument("negative truncation level");
    tail_ = std::pow(ratio_, *max_level_ + 1);
  }
}

LevelDistribution LevelDistribution::unbiased(double beta, std::optional<int> max_level) {
  if (!(beta > 0.0)) throw std::invalid_argument("beta must be positive");
  return LevelDistribution(std::exp2(-(beta + 1.0) / 2.0), max_level);
}

LevelDistribution LevelDistribution::halving() { return LevelDistribution(0.5, std::nullopt); }

double LevelDistribution::probability(int l) const {
  if (l < 0 || (max_level_ && l > *max_level_)) return 0.0;
  return (1.0 - ratio_) * std::pow(ratio_, l) / (1.0 - tail_);
}

int LevelDistribution::sample(RngStream& rng) const {
  // P(N >= l) = (q^l - tail) / (1 - tail).
  const double v = tail_ + (1.0 - tail_) * rng.uniform();
  const double level = std::floor(std::log(v) / log_ratio_);
  int l = level > 1e6 ? 1000000 : static_cast<int>(level);
  if (max_level_) l = std::min(l, *max_level_);
  return l;
}

// Level differences

LevelSample sample_level_difference_exact(const LevelStructure& levels, const OptionSpec& spec,
                                          const ForwardSampler& sampler, int level, RngStream& rng,
                                          std::vector<double>& buffer) {
  if (level < 0) throw std::invalid_argument("negative level");
  if (level > levels.max_level()) return {};
  const Level& fine = levels.level(level);
  buffer.resize(fine.nodes.size());
  const std::uint64_t nodes = sampler.sample_on(fine.times, rng, buffer);
  const double f0 = spec.initial_forward;

  double a_fine = fine.constant * f0;
  for (std::size_t k = 0; k < buffer.size(); ++k) a_fine += fine.coefficients[k] * buffer[k];
  const double u_fine = centered_payoff(spec, a_fine);
  if (level == 0) return {u_fine, nodes};

  const Level& coarse = levels.level(level - 1);
  double a_coarse = coarse.constant * f0;
  for (std::size_t k = 0; k < coarse.coefficients.size(); ++k) {
    a_coarse += coarse.coefficients[k] * buffer[fine.coarser_positions[k]];
  }
  return {u_fine - centered_payoff(spec, a_coarse), nodes};
}

LevelSample sample_level_difference_exact(const LevelStructure& levels, const OptionSpec& spec,
                                          const ForwardSampler& sampler, int level, RngStream& rng) {
  std::vector<double> buffer;
  return sample_level_difference_exact(levels, spec, sampler, level, rng, buffer);
}

LevelSample sample_level_difference_coupled(const LevelStructure& levels, const OptionSpec& spec,
                                            const Sde& sde, Scheme scheme, int level,
                                            RngStream& rng) {
  if (level < 0) throw std::invalid_argument("negative level");
  const Level& fine = levels.level(level);
  const Level& coarse = levels.level(std::max(level - 1, 0));
  const CoupledPaths paths =
      simulate_coupled(scheme, sde, spec.schedule, fine.nodes, coarse.nodes, level, rng);
  const double u_fine = centered_payoff(spec, levels.functional(level).evaluate(sde.initial, paths.fine));
  if (level == 0) return {u_fine, paths.nodes};
  const double u_coarse =
      centered_payoff(spec, levels.functional(level - 1).evaluate(sde.initial, paths.coarse));
  return {u_fine - u_coarse, paths.nodes};
}

// RMLMC, exact sampling

EstimateReport rmlmc_estimate(const LevelStructure& levels, const OptionSpec& spec,
                              const ForwardSampler& sampler, std::uint64_t n,
                              const ParallelOptions& parallel, LevelTruncation truncation) {
  require_replications(n, "rmlmc_estimate");
  const auto law = truncation == LevelTruncation::at_max_level
                       ? LevelDistribution::unbiased(2.0, levels.max_level())
                       : LevelDistribution::unbiased(2.0);
  const RunStatistics stats = run_replications(n, parallel, kTagRmlmc, [&] {
    return [&, buffer = std::vector<double>()](RngStream& rng, RunStatistics& acc) mutable {
      const int level = law.sample(rng);
      const LevelSample d = sample_level_difference_exact(levels, spec, sampler, level, rng, buffer);
      acc.add(d.value / law.probability(level));
      acc.add_cost(d.nodes);
    };
  });
  return report_from_stats("rmlmc", spec, stats);
}

// MLMC

std::vector<std::uint64_t> mlmc_allocation(std::span<const double> mu,
                                           std::span<const std::size_t> sizes, std::size_t m,
                                           double multiplier) {
  if (mu.size() != sizes.size()) throw std::invalid_argument("mlmc_allocation: size mismatch");
  double denom = 0.0;
  for (std::size_t l = 0; l < mu.size(); ++l) {
    denom += std::sqrt(std::max(mu[l], 0.0) * static_cast<double>(sizes[l]));
  }
  std::vector<std::uint64_t> counts(mu.size(), 1);
  if (denom <= 0.0) return counts;
  const double budget = multiplier * static_cast<double>(m);
  for (std::size_t l = 0; l < mu.size(); ++l) {
    const double share = std::sqrt(std::max(mu[l], 0.0) / static_cast<double>(sizes[l]));
    counts[l] = static_cast<std::uint64_t>(std::floor(1.0 + budget * share / denom));
  }
  return counts;
}

EstimateReport mlmc_estimate(const LevelStructure& levels, const OptionSpec& spec,
                             const ForwardSampler& sampler, const MlmcOptions& options,
                             const ParallelOptions& parallel) {
  require_replications(options.pilot_n, "mlmc_estimate pilot");
  if (options.outer == 0) throw std::invalid_argument("mlmc_estimate: outer must be positive");
  const int top = levels.max_level();
  const auto level_count = static_cast<std::size_t>(top) + 1;

  auto difference_worker = [&](int level) {
    return [&, level] {
      return [&, level, buffer = std::vector<double>()](RngStream& rng, RunStatistics& acc) mutable {
        const LevelSample d = sample_level_difference_exact(levels, spec, sampler, level, rng, buffer);
        acc.add(d.value);
        acc.add_cost(d.nodes);
      };
    };
  };

  std::vector<double> mu(level_count);
  std::vector<std::size_t> sizes(level_count);
  std::uint64_t cost = 0;
  for (int l = 0; l <= top; ++l) {
    const auto i = static_cast<std::size_t>(l);
    const RunStatistics pilot =
        run_replications(options.pilot_n, parallel, level_tag(kTagMlmcPilot, l), difference_worker(l));
    mu[i] = pilot.variance();
    sizes[i] = levels.level(l).nodes.size();
    cost += pilot.cost();
  }

  const auto counts =
      mlmc_allocation(mu, sizes, levels.date_count(), options.budget_multiplier);
  double mean = 0.0;
  double variance = 0.0;
  for (int l = 0; l <= top; ++l) {
    const auto i = static_cast<std::size_t>(l);
    const std::uint64_t samples = counts[i] * options.outer;
    const RunStatistics run =
        run_replications(samples, parallel, level_tag(kTagMlmcMain, l), difference_worker(l));
    mean += run.mean();
    // A single sample has no variance estimate; the pilot value stands in.
    const double level_var = samples > 1 ? run.variance() : mu[i];
    variance += level_var / static_cast<double>(samples);
    cost += run.cost();
  }

  EstimateReport r = make_report("mlmc", spec, options.outer, mean, variance,
                                 variance * static_cast<double>(options.outer), cost);
  r.level_counts = counts;
  return r;
}

// RMLMC on coupled schemes

EstimateReport rmlmc_coupled_estimate(const LevelStructure& levels, const OptionSpec& spec,
                                      const Sde& sde, Scheme scheme, std::uint64_t n,
                                      const ParallelOptions& parallel) {
  require_replications(n, "rmlmc_coupled_estimate");
  const int beta = scheme_beta(scheme);
  if (beta <= 1) {
    throw std::invalid_argument("unbiased coupled estimator needs strong order beta > 1 (Milstein)");
  }
  const auto law = LevelDistribution::unbiased(beta);
  const RunStatistics stats = run_replications(n, parallel, kTagCoupled, [&] {
    return [&](RngStream& rng, RunStatistics& acc) {
      const int level = law.sample(rng);
      const LevelSample d = sample_level_difference_coupled(levels, spec, sde, scheme, level, rng);
      acc.add(d.value / law.probability(level));
      acc.add_cost(d.nodes);
    };
  });
  return report_from_stats(scheme == Scheme::milstein ? "rmlmc-milstein" : "rmlmc-coupled", spec,
                           stats);
}

int truncation_level(double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 0.5)) {
    throw std::invalid_argument("epsilon must lie in (0, 1/2)");
  }
  return static_cast<int>(std::ceil(2.0 * std::log2(1.0 / epsilon)));
}

SchemeConstants estimate_scheme_constants(const Sde& sde, const MonitoringSchedule& schedule,
                                          Scheme scheme, int max_level, std::uint64_t paths,
                                          RngStream& rng) {
  if (max_level < 1) throw std::invalid_argument("estimate_scheme_constants: max_level must be >= 1");
  require_replications(paths, "estimate_scheme_constants");
  const double beta = scheme_beta(scheme);
  const DateIndex last[] = {static_cast<DateIndex>(schedule.size())};
  const double shrink = 1.0 - std::exp2(-beta / 2.0);

  SchemeConstants out;
  for (int l = 1; l <= max_level; ++l) {
    RunStatistics diff;
    RunStatistics terminal;
    for (std::uint64_t i = 0; i < paths; ++i) {
      const CoupledPaths p = simulate_coupled(scheme, sde, schedule, last, last, l, rng);
      const double d = p.fine[0] - p.coarse[0];
      diff.add(d * d);
      terminal.add(p.fine[0]);
      out.nodes += p.nodes;
    }
    const double c2 = diff.mean() * std::exp2(beta * (l - 1)) / (shrink * shrink);
    out.c2 = std::max(out.c2, c2);
    if (l == max_level) out.terminal_variance = terminal.variance();
  }
  return out;
}

EstimateReport rmlmc_truncated_estimate(const LevelStructure& levels, const OptionSpec& spec,
                                        const Sde& sde, double epsilon, std::uint64_t n,
                                        const ParallelOptions& parallel, std::uint64_t pilot_n) {
  require_replications(n, "rmlmc_truncated_estimate");
  const int cutoff = truncation_level(epsilon);
  const auto law = LevelDistribution::halving();
  const RunStatistics stats = run_replications(n, parallel, kTagTruncated, [&] {
    return [&](RngStream& rng, RunStatistics& acc) {
      const int level = law.sample(rng);
      if (level > cutoff) {
        acc.add(0.0);
        return;
      }
      const LevelSample d = sample_level_difference_coupled(levels, spec, sde, Scheme::euler, level, rng);
      acc.add(d.value / law.probability(level));
      acc.add_cost(d.nodes);
    };
  });
  EstimateReport r = report_from_stats("rmlmc-euler-trunc", spec, stats);

  RngStream pilot_rng(derive_seed(parallel.seed, kTagSchemePilot));
  constexpr int kPilotLevels = 6;
  const SchemeConstants constants =
      estimate_scheme_constants(sde, spec.schedule, Scheme::euler, kPilotLevels, pilot_n, pilot_rng);
  r.cost += constants.nodes;
  r.work_normalized_variance = static_cast<double>(r.cost) * r.std_error * r.std_error;
  const double c3 = 2.0 * (constants.c2 + constants.terminal_variance);
  r.bias_bound = std::sqrt(c3) * spec.payoff.lipschitz * epsilon;
  return r;
}

// Plain Monte Carlo

EstimateReport plain_mc_estimate(const OptionSpec& spec, const ForwardSampler& sampler,
                                 std::uint64_t n, const ParallelOptions& parallel) {
  require_replications(n, "plain_mc_estimate");
  const auto times = spec.schedule.dates();
  const auto weights = spec.schedule.weights();
  const RunStatistics stats = run_replications(n, parallel, kTagPlain, [&] {
    return [&, path = std::vector<double>(times.size())](RngStream& rng, RunStatistics& acc) mutable {
      const std::uint64_t nodes = sampler.sample_on(times, rng, path);
      double a = 0.0;
      for (std::size_t j = 0; j < path.size(); ++j) a += weights[j] * path[j];
      acc.add(centered_payoff(spec, a));
      acc.add_cost(nodes);
    };
  });
  EstimateReport r = report_from_stats("mc", spec, stats);
  r.payoff_variance = stats.variance();
  return r;
}

}  // namespace asianml
