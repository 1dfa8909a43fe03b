#include "asianml/harness.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

namespace asianml {
namespace {

constexpr std::uint64_t kTagBaseline = 0xba5e;

OptionTerms option_terms(const ExperimentConfig& c) {
  const double carry = c.params.carry();
  if (c.option == OptionKind::average_price_call) {
    return average_price_call(c.m, *c.strike, c.params.maturity, carry);
  }
  return average_strike_call(c.m, c.params.maturity, carry);
}

using BaselineKey = std::tuple<int, double, double, double, double, double, double, double, double,
                               int, int, double, std::size_t, std::uint64_t, std::uint64_t,
                               unsigned>;

BaselineKey baseline_key(const ExperimentConfig& c) {
  const ModelParams& p = c.params;
  return {static_cast<int>(c.model), p.spot, p.sigma, p.rate, p.dividend, p.maturity,
          p.jump_intensity, p.jump_log_mean, p.jump_log_sd, static_cast<int>(p.sqr_initial),
          static_cast<int>(c.option), c.strike.value_or(0.0), c.m, c.baseline_n, c.seed, c.workers};
}

double baseline_payoff_variance(const ExperimentConfig& c, const ExperimentSetup& setup) {
  static std::mutex mutex;
  static std::map<BaselineKey, double> cache;
  const BaselineKey key = baseline_key(c);
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  const ParallelOptions parallel{derive_seed(c.seed, kTagBaseline), c.workers};
  const double v = *plain_mc_estimate(setup.spec, *setup.sampler, c.baseline_n, parallel)
                        .payoff_variance;
  std::lock_guard lock(mutex);
  cache.emplace(key, v);
  return v;
}

const Sde& require_sde(const std::optional<Sde>& sde, const ExperimentConfig& c) {
  if (!sde) {
    throw ConfigError(std::string(to_string(c.method)) + " is not available for model " +
                      std::string(to_string(c.model)));
  }
  return *sde;
}

}  // namespace

ModelParams ModelParams::defaults(ModelId model) {
  ModelParams p;
  switch (model) {
    case ModelId::bs:
      break;
    case ModelId::merton: {
      const MertonParams mp;
      p.spot = mp.spot;
      p.sigma = mp.sigma;
      p.rate = mp.rate;
      p.dividend = mp.dividend;
      p.maturity = mp.maturity;
      p.jump_intensity = mp.intensity;
      p.jump_log_mean = mp.jump_log_mean;
      p.jump_log_sd = mp.jump_log_sd;
      break;
    }
    case ModelId::sqr:
      p.sigma = 0.4;
      break;
  }
  return p;
}

ExperimentSetup make_setup(const ExperimentConfig& c) {
  validate(c);
  const ModelParams& p = c.params;
  std::unique_ptr<ForwardSampler> sampler;
  switch (c.model) {
    case ModelId::bs:
      sampler = std::make_unique<BlackScholesSampler>(
          BlackScholesParams{p.spot, p.sigma, p.rate, p.dividend, p.maturity});
      break;
    case ModelId::merton:
      sampler = std::make_unique<MertonSampler>(
          MertonParams{p.spot, p.sigma, p.rate, p.dividend, p.jump_intensity, p.jump_log_mean,
                       p.jump_log_sd, p.maturity});
      break;
    case ModelId::sqr: {
      const double f0 = p.sqr_initial == SqrInitial::forward
                            ? p.spot * std::exp(p.carry() * p.maturity)
                            : p.spot;
      sampler = std::make_unique<SquareRootSampler>(SquareRootParams{f0, p.sigma, p.maturity});
      break;
    }
  }
  OptionSpec spec = make_option_spec(option_terms(c), sampler->initial_forward(), p.rate);
  return ExperimentSetup{std::move(sampler), std::move(spec)};
}

double variance_reduction_factor(std::size_t m, double rate, double maturity, double payoff_variance,
                                 std::uint64_t cost, double std_error) {
  const double denom = static_cast<double>(cost) * std_error * std_error;
  if (!(denom > 0.0)) return std::nan("");
  return static_cast<double>(m) * std::exp(-2.0 * rate * maturity) * payoff_variance / denom;
}

ExperimentResult run_experiment_full(const ExperimentConfig& c) {
  ExperimentSetup setup = make_setup(c);
  const ParallelOptions parallel{c.seed, c.workers};
  const auto sde = setup.sampler->sde();

  EstimateReport report;
  if (c.method == Method::mc) {
    report = plain_mc_estimate(setup.spec, *setup.sampler, c.n, parallel);
  } else {
    const LevelStructure levels = build_level_structure(setup.spec.schedule);
    switch (c.method) {
      case Method::rmlmc:
        report = rmlmc_estimate(levels, setup.spec, *setup.sampler, c.n, parallel);
        break;
      case Method::mlmc:
        report = mlmc_estimate(levels, setup.spec, *setup.sampler,
                               MlmcOptions{c.pilot_n, c.budget_multiplier, c.n}, parallel);
        break;
      case Method::rmlmc_milstein:
        report = rmlmc_coupled_estimate(levels, setup.spec, require_sde(sde, c), Scheme::milstein,
                                        c.n, parallel);
        break;
      case Method::rmlmc_euler_trunc:
        report = rmlmc_truncated_estimate(levels, setup.spec, require_sde(sde, c), *c.epsilon, c.n,
                                          parallel, c.pilot_n);
        break;
      case Method::mc:
        break;
    }
  }

  ExperimentResult result;
  if (c.baseline_n > 0) {
    result.payoff_variance = baseline_payoff_variance(c, setup);
    report.vrf = variance_reduction_factor(c.m, c.params.rate, c.params.maturity,
                                           *result.payoff_variance, report.cost, report.std_error);
  }
  result.row = TableRow{std::string(to_string(c.method)),
                        std::string(to_string(c.model)),
                        std::string(to_string(c.option)),
                        c.m,
                        report.n,
                        report.price,
                        report.std_error,
                        report.cost,
                        report.work_normalized_variance,
                        report.vrf.value_or(std::nan(""))};
  result.report = std::move(report);
  return result;
}

TableRow run_experiment(const ExperimentConfig& config) { return run_experiment_full(config).row; }

std::vector<ExperimentConfig> table_preset(int table, std::uint64_t n, std::uint64_t seed,
                                           unsigned workers) {
  if (table < 1 || table > 8) throw ConfigError("table must be between 1 and 8");
  if (n < 2) throw ConfigError("n is too small");

  auto base = [&](ModelId model, OptionKind option, std::size_t m, Method method) {
    ExperimentConfig c;
    c.model = model;
    c.params = ModelParams::defaults(model);
    c.option = option;
    if (option == OptionKind::average_price_call) c.strike = 2.0;
    c.m = m;
    c.method = method;
    c.n = method == Method::mlmc ? std::max<std::uint64_t>(1, n / (10 * m)) : n;
    c.seed = seed;
    c.workers = workers;
    return c;
  };

  std::vector<ExperimentConfig> out;
  const std::size_t ms[] = {125, 250, 500};
  switch (table) {
    case 1:
    case 2: {
      const OptionKind option =
          table == 1 ? OptionKind::average_price_call : OptionKind::average_strike_call;
      for (std::size_t m : ms) {
        for (Method method : {Method::rmlmc, Method::mlmc, Method::rmlmc_milstein}) {
          out.push_back(base(ModelId::bs, option, m, method));
        }
      }
      break;
    }
    case 3:
      for (OptionKind option : {OptionKind::average_price_call, OptionKind::average_strike_call}) {
        ExperimentConfig c = base(ModelId::bs, option, 10000000, Method::rmlmc);
        c.baseline_n = 0;
        out.push_back(c);
      }
      break;
    case 4:
    case 5:
    case 6:
    case 7: {
      const ModelId model = table <= 5 ? ModelId::merton : ModelId::sqr;
      const OptionKind option = table % 2 == 0 ? OptionKind::average_price_call
                                               : OptionKind::average_strike_call;
      for (std::size_t m : ms) {
        for (Method method : {Method::rmlmc, Method::mlmc}) {
          out.push_back(base(model, option, m, method));
        }
      }
      break;
    }
    case 8:
      for (std::size_t m : ms) {
        for (Method method : {Method::rmlmc, Method::mlmc, Method::rmlmc_milstein}) {
          for (double strike : {1.6, 1.8, 2.0, 2.2, 2.4}) {
            ExperimentConfig c = base(ModelId::bs, OptionKind::average_price_call, m, method);
            c.strike = strike;
            out.push_back(c);
          }
        }
      }
      break;
  }
  return out;
}

}  // namespace asianml
