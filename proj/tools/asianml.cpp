// Command-line front end: runs one configuration or a table preset and
// prints one row per configuration.

#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "asianml/harness.hpp"

namespace {

constexpr int kConfigErrorExit = 2;

struct Flags {
  std::optional<std::string> model, option, method, params, csv, sqr_initial;
  std::optional<double> strike, multiplier, epsilon;
  std::optional<std::uint64_t> m, n, pilot, seed, baseline_n;
  std::optional<unsigned> workers;
  std::optional<int> table;
  bool text = false;
};

void apply_flags(const Flags& f, asianml::ExperimentConfig& c) {
  using asianml::apply_setting;
  if (f.model) apply_setting(c, "model", *f.model);
  if (f.option) c.option = asianml::parse_option(*f.option);
  if (f.strike) c.strike = *f.strike;
  if (f.m) c.m = *f.m;
  if (f.method) c.method = asianml::parse_method(*f.method);
  if (f.n) c.n = *f.n;
  if (f.pilot) c.pilot_n = *f.pilot;
  if (f.multiplier) c.budget_multiplier = *f.multiplier;
  if (f.epsilon) c.epsilon = *f.epsilon;
  if (f.seed) c.seed = *f.seed;
  if (f.workers) c.workers = *f.workers;
  if (f.baseline_n) c.baseline_n = *f.baseline_n;
  if (f.sqr_initial) c.params.sqr_initial = asianml::parse_sqr_initial(*f.sqr_initial);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multilevel Monte Carlo pricing of discretely monitored Asian options"};
  Flags f;
  app.add_option("--model", f.model, "bs | merton | sqr")
      ->check(CLI::IsMember({"bs", "merton", "sqr"}));
  app.add_option("--option", f.option, "avg-price-call | avg-strike-call")
      ->check(CLI::IsMember({"avg-price-call", "avg-strike-call"}));
  app.add_option("--strike", f.strike, "Strike of the average price call");
  app.add_option("--m", f.m, "Number of monitoring dates");
  app.add_option("--method", f.method, "mc | rmlmc | mlmc | rmlmc-milstein | rmlmc-euler-trunc")
      ->check(CLI::IsMember({"mc", "rmlmc", "mlmc", "rmlmc-milstein", "rmlmc-euler-trunc"}));
  app.add_option("--n", f.n, "Replications (MLMC: independent multilevel estimates)");
  app.add_option("--pilot", f.pilot, "Pilot runs per level (default 10000)");
  app.add_option("--multiplier", f.multiplier, "MLMC budget multiplier (default 30)");
  app.add_option("--epsilon", f.epsilon, "Accuracy target of rmlmc-euler-trunc");
  app.add_option("--seed", f.seed, "Master seed (default 42)");
  app.add_option("--workers", f.workers, "Worker threads (default 1)");
  app.add_option("--baseline-n", f.baseline_n,
                 "Plain Monte Carlo paths behind the VRF; 0 disables it (default 100000)");
  app.add_option("--params", f.params, "key=value parameter file")->check(CLI::ExistingFile);
  app.add_option("--csv", f.csv, "Write CSV rows to this file instead of stdout");
  app.add_option("--table", f.table, "Run a reference table preset")->check(CLI::Range(1, 8));
  app.add_option("--sqr-initial", f.sqr_initial, "Square-Root F_0: forward (S_0 e^{rT}) or spot")
      ->check(CLI::IsMember({"forward", "spot"}));
  app.add_flag("--text", f.text, "Print an aligned table instead of CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigErrorExit;
  }

  std::vector<asianml::ExperimentConfig> configs;
  try {
    if (f.table) {
      configs = asianml::table_preset(*f.table, f.n.value_or(1000000), f.seed.value_or(42),
                                      f.workers.value_or(1));
      if (f.baseline_n) {
        for (auto& c : configs) {
          if (c.baseline_n > 0) c.baseline_n = *f.baseline_n;
        }
      }
      if (f.pilot) {
        for (auto& c : configs) c.pilot_n = *f.pilot;
      }
      if (f.multiplier) {
        for (auto& c : configs) c.budget_multiplier = *f.multiplier;
      }
    } else {
      asianml::ExperimentConfig c;
      if (f.params) asianml::load_config_file(*f.params, c);
      apply_flags(f, c);
      asianml::validate(c);
      configs.push_back(c);
    }
    for (const auto& c : configs) asianml::validate(c);
  } catch (const asianml::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfigErrorExit;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfigErrorExit;
  }

  std::ofstream file;
  if (f.csv) {
    file.open(*f.csv);
    if (!file) {
      std::cerr << "error: cannot write " << *f.csv << '\n';
      return kConfigErrorExit;
    }
  }
  std::ostream& csv_out = f.csv ? static_cast<std::ostream&>(file) : std::cout;
  const bool emit_csv = f.csv || !f.text;

  std::vector<asianml::TableRow> rows;
  if (emit_csv) csv_out << asianml::csv_header() << '\n';
  try {
    for (const auto& c : configs) {
      rows.push_back(asianml::run_experiment(c));
      if (emit_csv) csv_out << asianml::to_csv(rows.back()) << '\n' << std::flush;
    }
  } catch (const asianml::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfigErrorExit;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  if (f.text) asianml::write_text_table(std::cout, rows);
  return 0;
}
