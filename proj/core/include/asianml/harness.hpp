#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "asianml/estimators.hpp"
#include "asianml/models.hpp"
#include "asianml/payoff.hpp"

namespace asianml {

/// Invalid or inconsistent experiment configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ModelId { bs, merton, sqr };
enum class OptionKind { average_price_call, average_strike_call };
enum class Method { mc, rmlmc, mlmc, rmlmc_milstein, rmlmc_euler_trunc };
/// Square-Root initial forward: S_0 e^{(r-q)T} (forward) or S_0 itself (spot).
enum class SqrInitial { forward, spot };

std::string_view to_string(ModelId id);
std::string_view to_string(OptionKind kind);
std::string_view to_string(Method method);
std::string_view to_string(SqrInitial convention);
ModelId parse_model(std::string_view text);
OptionKind parse_option(std::string_view text);
Method parse_method(std::string_view text);
SqrInitial parse_sqr_initial(std::string_view text);

/// Union of the parameters of the three models; unused fields are ignored.
struct ModelParams {
  double spot = 2.0;
  double sigma = 0.5;
  double rate = 0.05;
  double dividend = 0.0;
  double maturity = 2.0;
  double jump_intensity = 0.0;
  double jump_log_mean = 0.0;
  double jump_log_sd = 0.0;
  SqrInitial sqr_initial = SqrInitial::forward;

  /// Parameter sets of the reference experiments.
  static ModelParams defaults(ModelId model);
  double carry() const { return rate - dividend; }
};

struct ExperimentConfig {
  ModelId model = ModelId::bs;
  ModelParams params = ModelParams::defaults(ModelId::bs);
  OptionKind option = OptionKind::average_price_call;
  std::optional<double> strike;
  std::size_t m = 125;
  Method method = Method::rmlmc;
  /// Replications; for MLMC the number of independent multilevel estimates.
  std::uint64_t n = 1000000;
  std::uint64_t pilot_n = 10000;
  double budget_multiplier = 30.0;
  std::optional<double> epsilon;
  std::uint64_t seed = 42;
  unsigned workers = 1;
  /// Full-path samples behind var(f(A)) for the VRF; 0 disables the VRF.
  std::uint64_t baseline_n = 100000;
};

/// Throws ConfigError on incompatible combinations.
void validate(const ExperimentConfig& config);

/// Applies one key=value setting. Keys: model, option, strike, m, method, n,
/// pilot, multiplier, epsilon, seed, workers, baseline_n, spot, sigma, rate,
/// dividend, maturity, jump_intensity, jump_log_mean, jump_log_sd,
/// sqr_initial. Setting `model` resets the model parameters to its defaults.
void apply_setting(ExperimentConfig& config, std::string_view key, std::string_view value);

/// Flat `key=value` lines; `#` starts a comment. A `model` line is applied
/// before all other keys regardless of its position.
std::vector<std::pair<std::string, std::string>> parse_config_text(std::string_view text);
void load_config_file(const std::string& path, ExperimentConfig& config);

struct TableRow {
  std::string method;
  std::string model;
  std::string option;
  std::size_t m = 0;
  std::uint64_t n = 0;
  double price = 0.0;
  double std_error = 0.0;
  std::uint64_t cost = 0;
  double work_norm_var = 0.0;
  /// NaN when no baseline was run.
  double vrf = 0.0;
};

bool operator==(const TableRow& a, const TableRow& b);

struct ExperimentResult {
  TableRow row;
  EstimateReport report;
  std::optional<double> payoff_variance;
};

/// Model, option spec and level structure for a configuration.
struct ExperimentSetup {
  std::unique_ptr<ForwardSampler> sampler;
  OptionSpec spec;
};
ExperimentSetup make_setup(const ExperimentConfig& config);

/// Runs the configured estimator and a separate plain Monte Carlo baseline
/// of baseline_n full paths for var(f(A)); the baseline cost is not part of
/// the row. Deterministic for fixed (config, seed, workers).
ExperimentResult run_experiment_full(const ExperimentConfig& config);
TableRow run_experiment(const ExperimentConfig& config);

/// m e^{-2rT} var(f(A)) / (cost std^2).
double variance_reduction_factor(std::size_t m, double rate, double maturity, double payoff_variance,
                                 std::uint64_t cost, double std_error);

/// Configurations reproducing the reference tables 1..8 at n replications
/// (MLMC rows use max(1, n / (10 m)) outer copies).
std::vector<ExperimentConfig> table_preset(int table, std::uint64_t n, std::uint64_t seed,
                                           unsigned workers);

std::string csv_header();
/// method,model,option,m,n,price,std,cost,work_norm_var,vrf with 6
/// significant digits for floating fields.
std::string to_csv(const TableRow& row);
TableRow parse_csv_row(std::string_view line);
void write_text_table(std::ostream& out, const std::vector<TableRow>& rows);

}  // namespace asianml
