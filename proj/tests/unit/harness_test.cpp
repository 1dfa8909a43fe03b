#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "asianml/harness.hpp"
#include "test_support.hpp"

using namespace asianml;

namespace {

ExperimentConfig small_config() {
  ExperimentConfig c;
  c.strike = 2.0;
  c.m = 16;
  c.n = 20000;
  c.baseline_n = 20000;
  return c;
}

}  // namespace

TEST(Config, DefaultsPerModel) {
  const auto bs = ModelParams::defaults(ModelId::bs);
  EXPECT_EQ(bs.sigma, 0.5);
  EXPECT_EQ(bs.rate, 0.05);
  const auto mj = ModelParams::defaults(ModelId::merton);
  EXPECT_EQ(mj.sigma, 0.1765);
  EXPECT_EQ(mj.dividend, 0.0114);
  EXPECT_EQ(mj.jump_intensity, 0.089);
  const auto sq = ModelParams::defaults(ModelId::sqr);
  EXPECT_EQ(sq.sigma, 0.4);
  EXPECT_EQ(sq.sqr_initial, SqrInitial::forward);
  ExperimentConfig c;
  EXPECT_EQ(c.pilot_n, 10000u);
  EXPECT_EQ(c.budget_multiplier, 30.0);
  EXPECT_EQ(c.baseline_n, 100000u);
}

TEST(Config, EnumRoundTrip) {
  for (auto m : {Method::mc, Method::rmlmc, Method::mlmc, Method::rmlmc_milstein, Method::rmlmc_euler_trunc}) {
    EXPECT_EQ(parse_method(to_string(m)), m);
  }
  for (auto m : {ModelId::bs, ModelId::merton, ModelId::sqr}) EXPECT_EQ(parse_model(to_string(m)), m);
  EXPECT_EQ(parse_option("avg-strike-call"), OptionKind::average_strike_call);
  EXPECT_THROW(parse_method("qmc"), ConfigError);
  EXPECT_THROW(parse_model("heston"), ConfigError);
}

TEST(Config, ValidationRules) {
  ExperimentConfig c;
  EXPECT_THROW(validate(c), ConfigError);  // avg-price without strike
  c.strike = 2.0;
  EXPECT_NO_THROW(validate(c));
  c.option = OptionKind::average_strike_call;
  EXPECT_THROW(validate(c), ConfigError);  // strike with avg-strike
  c.strike.reset();
  EXPECT_NO_THROW(validate(c));
  c.method = Method::rmlmc_euler_trunc;
  EXPECT_THROW(validate(c), ConfigError);  // missing epsilon
  c.epsilon = 0.1;
  EXPECT_NO_THROW(validate(c));
  c.epsilon = 0.7;
  EXPECT_THROW(validate(c), ConfigError);
  c.method = Method::rmlmc;
  c.epsilon = 0.1;
  EXPECT_THROW(validate(c), ConfigError);  // epsilon with another method
  c.epsilon.reset();
  c.model = ModelId::merton;
  c.method = Method::rmlmc_milstein;
  EXPECT_THROW(validate(c), ConfigError);
  c.model = ModelId::bs;
  c.workers = 0;
  EXPECT_THROW(validate(c), ConfigError);
}

TEST(Config, ParseTextAndApply) {
  const auto kv = parse_config_text("# comment\nsigma = 0.3\n\nmodel=merton  # trailing\nm=250\n");
  ASSERT_EQ(kv.size(), 3u);
  EXPECT_EQ(kv[0], (std::pair<std::string, std::string>{"sigma", "0.3"}));
  EXPECT_THROW(parse_config_text("no equals sign"), ConfigError);

  const auto path = std::filesystem::temp_directory_path() / "asianml_params_test.txt";
  {
    std::ofstream(path) << "sigma=0.3\nmodel=merton\nm=1e3\nstrike=1.8\nsqr_initial=spot\n";
  }
  ExperimentConfig c;
  load_config_file(path.string(), c);
  EXPECT_EQ(c.model, ModelId::merton);
  EXPECT_EQ(c.params.sigma, 0.3);  // applied after the model reset
  EXPECT_EQ(c.params.jump_intensity, 0.089);
  EXPECT_EQ(c.m, 1000u);
  EXPECT_EQ(*c.strike, 1.8);
  std::filesystem::remove(path);

  EXPECT_THROW(apply_setting(c, "bogus", "1"), ConfigError);
  EXPECT_THROW(apply_setting(c, "m", "12.5"), ConfigError);
  EXPECT_THROW(apply_setting(c, "sigma", "abc"), ConfigError);
  EXPECT_THROW(load_config_file("/nonexistent/params", c), ConfigError);
}

TEST(Csv, HeaderAndRoundTrip) {
  EXPECT_EQ(csv_header(), "method,model,option,m,n,price,std,cost,work_norm_var,vrf");
  TableRow r{"rmlmc", "bs", "avg-price-call", 125, 1000000, 0.352391234, 4.6e-5, 2100000000,
             4.51234567, 12.3456};
  const std::string line = to_csv(r);
  EXPECT_EQ(line, "rmlmc,bs,avg-price-call,125,1000000,0.352391,4.6e-05,2100000000,4.51235,12.3456");
  const TableRow parsed = parse_csv_row(line);
  EXPECT_EQ(to_csv(parsed), line);
  EXPECT_EQ(parse_csv_row(to_csv(parsed)), parsed);
  r.vrf = std::nan("");
  EXPECT_TRUE(std::isnan(parse_csv_row(to_csv(r)).vrf));
  EXPECT_THROW(parse_csv_row("a,b,c"), ConfigError);
}

TEST(Csv, RoundTripOfRealRow) {
  const TableRow row = run_experiment(small_config());
  const TableRow once = parse_csv_row(to_csv(row));
  EXPECT_EQ(parse_csv_row(to_csv(once)), once);
  EXPECT_NEAR(once.price, row.price, 1e-5 * row.price);
}

TEST(Harness, Deterministic) {
  auto c = small_config();
  c.workers = 3;
  EXPECT_EQ(run_experiment(c), run_experiment(c));
  c.method = Method::mlmc;
  c.n = 3;
  c.pilot_n = 500;
  EXPECT_EQ(run_experiment(c), run_experiment(c));
}

TEST(Harness, VrfFormula) {
  EXPECT_DOUBLE_EQ(variance_reduction_factor(100, 0.05, 2.0, 0.4, 1000, 0.01),
                   100 * std::exp(-0.2) * 0.4 / (1000 * 1e-4));
  auto c = small_config();
  const auto full = run_experiment_full(c);
  ASSERT_TRUE(full.payoff_variance.has_value());
  EXPECT_DOUBLE_EQ(full.row.vrf, variance_reduction_factor(c.m, 0.05, 2.0, *full.payoff_variance,
                                                           full.row.cost, full.row.std_error));
  EXPECT_DOUBLE_EQ(full.row.work_norm_var, full.row.cost * full.row.std_error * full.row.std_error);
  c.baseline_n = 0;
  EXPECT_TRUE(std::isnan(run_experiment(c).vrf));
}

TEST(Harness, PlainMonteCarloHasUnitVrfOnAverage) {
  auto c = small_config();
  c.method = Method::mc;
  const auto row = run_experiment(c);
  EXPECT_EQ(row.cost, c.n * c.m);
  EXPECT_NEAR(row.vrf, 1.0, 0.1);
}

TEST(Harness, SquareRootInitialConvention) {
  ExperimentConfig c = small_config();
  c.model = ModelId::sqr;
  c.params = ModelParams::defaults(ModelId::sqr);
  EXPECT_DOUBLE_EQ(make_setup(c).sampler->initial_forward(), 2.0 * std::exp(0.1));
  c.params.sqr_initial = SqrInitial::spot;
  EXPECT_DOUBLE_EQ(make_setup(c).sampler->initial_forward(), 2.0);
}

TEST(Harness, AllMethodsRun) {
  for (Method m : {Method::mc, Method::rmlmc, Method::mlmc, Method::rmlmc_milstein,
                   Method::rmlmc_euler_trunc}) {
    auto c = small_config();
    c.method = m;
    c.baseline_n = 0;
    if (m == Method::mlmc) {
      c.n = 2;
      c.pilot_n = 200;
    }
    if (m == Method::rmlmc_euler_trunc) {
      c.epsilon = 0.1;
      c.pilot_n = 200;
    }
    const auto row = run_experiment(c);
    EXPECT_EQ(row.method, to_string(m));
    EXPECT_GT(row.price, 0.2);
    EXPECT_LT(row.price, 0.5);
  }
}

TEST(Harness, TablePresets) {
  const auto t1 = table_preset(1, 1000000, 42, 1);
  ASSERT_EQ(t1.size(), 9u);
  EXPECT_EQ(t1[0].method, Method::rmlmc);
  EXPECT_EQ(t1[1].method, Method::mlmc);
  EXPECT_EQ(t1[1].n, 800u);
  EXPECT_EQ(t1[2].method, Method::rmlmc_milstein);
  EXPECT_EQ(*t1[0].strike, 2.0);
  EXPECT_EQ(t1[8].m, 500u);
  EXPECT_EQ(table_preset(1, 1000000000, 42, 1)[4].n, 400000u);
  const auto t3 = table_preset(3, 100000, 1, 1);
  ASSERT_EQ(t3.size(), 2u);
  EXPECT_EQ(t3[0].m, 10000000u);
  EXPECT_EQ(t3[0].baseline_n, 0u);
  for (int t : {4, 5, 6, 7}) {
    const auto rows = table_preset(t, 100000, 1, 1);
    ASSERT_EQ(rows.size(), 6u);
    EXPECT_EQ(rows[0].model, t <= 5 ? ModelId::merton : ModelId::sqr);
    EXPECT_EQ(rows[0].option, t % 2 == 0 ? OptionKind::average_price_call : OptionKind::average_strike_call);
    for (const auto& c : rows) EXPECT_NO_THROW(validate(c));
  }
  EXPECT_EQ(table_preset(8, 100000, 1, 1).size(), 45u);
  EXPECT_THROW(table_preset(9, 100, 1, 1), ConfigError);
}

TEST(Harness, TextTable) {
  std::ostringstream out;
  write_text_table(out, {run_experiment(small_config())});
  EXPECT_NE(out.str().find("rmlmc"), std::string::npos);
  EXPECT_NE(out.str().find("avg-price-call"), std::string::npos);
}
