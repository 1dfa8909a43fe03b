#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "asianml/harness.hpp"

namespace asianml {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

double parse_double(std::string_view key, std::string_view text) {
  text = trim(text);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw ConfigError("cannot parse '" + std::string(text) + "' as a number for " + std::string(key));
  }
  return value;
}

std::uint64_t parse_unsigned(std::string_view key, std::string_view text) {
  text = trim(text);
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec == std::errc() && ptr == text.data() + text.size() && !text.empty()) return value;
  // Accept integral values written in floating notation, e.g. 1e6.
  const double d = parse_double(key, text);
  if (!(d >= 0.0) || d != std::floor(d) || d > 1.8e19) {
    throw ConfigError("expected a non-negative integer for " + std::string(key) + ", got '" +
                      std::string(text) + "'");
  }
  return static_cast<std::uint64_t>(d);
}

std::string format_g6(double x) {
  if (std::isnan(x)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

}  // namespace

std::string_view to_string(ModelId id) {
  switch (id) {
    case ModelId::bs: return "bs";
    case ModelId::merton: return "merton";
    case ModelId::sqr: return "sqr";
  }
  return "?";
}

std::string_view to_string(OptionKind kind) {
  return kind == OptionKind::average_price_call ? "avg-price-call" : "avg-strike-call";
}

std::string_view to_string(Method method) {
  switch (method) {
    case Method::mc: return "mc";
    case Method::rmlmc: return "rmlmc";
    case Method::mlmc: return "mlmc";
    case Method::rmlmc_milstein: return "rmlmc-milstein";
    case Method::rmlmc_euler_trunc: return "rmlmc-euler-trunc";
  }
  return "?";
}

std::string_view to_string(SqrInitial convention) {
  return convention == SqrInitial::forward ? "forward" : "spot";
}

ModelId parse_model(std::string_view text) {
  text = trim(text);
  if (text == "bs") return ModelId::bs;
  if (text == "merton") return ModelId::merton;
  if (text == "sqr") return ModelId::sqr;
  throw ConfigError("unknown model '" + std::string(text) + "' (expected bs, merton or sqr)");
}

OptionKind parse_option(std::string_view text) {
  text = trim(text);
  if (text == "avg-price-call") return OptionKind::average_price_call;
  if (text == "avg-strike-call") return OptionKind::average_strike_call;
  throw ConfigError("unknown option '" + std::string(text) +
                    "' (expected avg-price-call or avg-strike-call)");
}

Method parse_method(std::string_view text) {
  text = trim(text);
  for (Method m : {Method::mc, Method::rmlmc, Method::mlmc, Method::rmlmc_milstein,
                   Method::rmlmc_euler_trunc}) {
    if (text == to_string(m)) return m;
  }
  throw ConfigError("unknown method '" + std::string(text) + "'");
}

SqrInitial parse_sqr_initial(std::string_view text) {
  text = trim(text);
  if (text == "forward") return SqrInitial::forward;
  if (text == "spot") return SqrInitial::spot;
  throw ConfigError("sqr_initial must be 'forward' or 'spot'");
}

void apply_setting(ExperimentConfig& c, std::string_view key, std::string_view value) {
  key = trim(key);
  if (key == "model") {
    c.model = parse_model(value);
    c.params = ModelParams::defaults(c.model);
  } else if (key == "option") {
    c.option = parse_option(value);
  } else if (key == "strike") {
    c.strike = parse_double(key, value);
  } else if (key == "m") {
    c.m = parse_unsigned(key, value);
  } else if (key == "method") {
    c.method = parse_method(value);
  } else if (key == "n") {
    c.n = parse_unsigned(key, value);
  } else if (key == "pilot" || key == "pilot_n") {
    c.pilot_n = parse_unsigned(key, value);
  } else if (key == "multiplier" || key == "budget_multiplier") {
    c.budget_multiplier = parse_double(key, value);
  } else if (key == "epsilon") {
    c.epsilon = parse_double(key, value);
  } else if (key == "seed") {
    c.seed = parse_unsigned(key, value);
  } else if (key == "workers") {
    c.workers = static_cast<unsigned>(parse_unsigned(key, value));
  } else if (key == "baseline_n" || key == "baseline-n") {
    c.baseline_n = parse_unsigned(key, value);
  } else if (key == "spot") {
    c.params.spot = parse_double(key, value);
  } else if (key == "sigma") {
    c.params.sigma = parse_double(key, value);
  } else if (key == "rate") {
    c.params.rate = parse_double(key, value);
  } else if (key == "dividend") {
    c.params.dividend = parse_double(key, value);
  } else if (key == "maturity") {
    c.params.maturity = parse_double(key, value);
  } else if (key == "jump_intensity") {
    c.params.jump_intensity = parse_double(key, value);
  } else if (key == "jump_log_mean") {
    c.params.jump_log_mean = parse_double(key, value);
  } else if (key == "jump_log_sd") {
    c.params.jump_log_sd = parse_double(key, value);
  } else if (key == "sqr_initial") {
    c.params.sqr_initial = parse_sqr_initial(value);
  } else {
    throw ConfigError("unknown configuration key '" + std::string(key) + "'");
  }
}

std::vector<std::pair<std::string, std::string>> parse_config_text(std::string_view text) {
  std::vector<std::pair<std::string, std::string>> out;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected key=value");
    }
    out.emplace_back(std::string(trim(line.substr(0, eq))), std::string(trim(line.substr(eq + 1))));
  }
  return out;
}

void load_config_file(const std::string& path, ExperimentConfig& config) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open parameter file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  const auto settings = parse_config_text(buffer.str());
  for (const auto& [key, value] : settings) {
    if (key == "model") apply_setting(config, key, value);
  }
  for (const auto& [key, value] : settings) {
    if (key != "model") apply_setting(config, key, value);
  }
}

void validate(const ExperimentConfig& c) {
  const bool avg_price = c.option == OptionKind::average_price_call;
  if (avg_price && !c.strike) throw ConfigError("--strike is required for avg-price-call");
  if (!avg_price && c.strike) throw ConfigError("--strike only applies to avg-price-call");
  if (c.strike && !(*c.strike >= 0.0)) throw ConfigError("strike must be non-negative");
  const bool truncated = c.method == Method::rmlmc_euler_trunc;
  if (truncated && !c.epsilon) throw ConfigError("--epsilon is required for rmlmc-euler-trunc");
  if (!truncated && c.epsilon) throw ConfigError("--epsilon only applies to rmlmc-euler-trunc");
  if (c.epsilon && !(*c.epsilon > 0.0 && *c.epsilon < 0.5)) {
    throw ConfigError("epsilon must lie in (0, 1/2)");
  }
  if ((c.method == Method::rmlmc_milstein || truncated) && c.model != ModelId::bs) {
    throw ConfigError(std::string(to_string(c.method)) + " needs a scalar diffusion model (bs); " +
                      std::string(to_string(c.model)) + " has no discretization scheme here");
  }
  if (c.m == 0) throw ConfigError("m must be positive");
  if (!avg_price && c.m < 2) throw ConfigError("avg-strike-call needs m >= 2");
  if (c.method == Method::mlmc ? c.n < 1 : c.n < 2) throw ConfigError("n is too small");
  if (c.method == Method::mlmc && c.pilot_n < 2) throw ConfigError("pilot must be at least 2");
  if (!(c.budget_multiplier > 0.0)) throw ConfigError("multiplier must be positive");
  if (c.workers == 0) throw ConfigError("workers must be positive");
  if (c.baseline_n == 1) throw ConfigError("baseline-n must be 0 or at least 2");
  const ModelParams& p = c.params;
  if (!(p.spot > 0.0) || !(p.sigma > 0.0) || !(p.maturity > 0.0)) {
    throw ConfigError("spot, sigma and maturity must be positive");
  }
  if (c.model == ModelId::merton && (p.jump_intensity < 0.0 || p.jump_log_sd < 0.0)) {
    throw ConfigError("jump intensity and jump log-sd must be non-negative");
  }
}

bool operator==(const TableRow& a, const TableRow& b) {
  auto same = [](double x, double y) { return x == y || (std::isnan(x) && std::isnan(y)); };
  return a.method == b.method && a.model == b.model && a.option == b.option && a.m == b.m &&
         a.n == b.n && same(a.price, b.price) && same(a.std_error, b.std_error) && a.cost == b.cost &&
         same(a.work_norm_var, b.work_norm_var) && same(a.vrf, b.vrf);
}

std::string csv_header() { return "method,model,option,m,n,price,std,cost,work_norm_var,vrf"; }

std::string to_csv(const TableRow& r) {
  std::ostringstream out;
  out << r.method << ',' << r.model << ',' << r.option << ',' << r.m << ',' << r.n << ','
      << format_g6(r.price) << ',' << format_g6(r.std_error) << ',' << r.cost << ','
      << format_g6(r.work_norm_var) << ',' << format_g6(r.vrf);
  return out.str();
}

TableRow parse_csv_row(std::string_view line) {
  std::vector<std::string_view> fields;
  while (true) {
    const auto comma = line.find(',');
    fields.push_back(trim(line.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    line = line.substr(comma + 1);
  }
  if (fields.size() != 10) throw ConfigError("CSV row must have 10 fields");
  auto number = [](std::string_view key, std::string_view f) {
    if (f == "nan") return std::nan("");
    return parse_double(key, f);
  };
  TableRow r;
  r.method = fields[0];
  r.model = fields[1];
  r.option = fields[2];
  r.m = parse_unsigned("m", fields[3]);
  r.n = parse_unsigned("n", fields[4]);
  r.price = number("price", fields[5]);
  r.std_error = number("std", fields[6]);
  r.cost = parse_unsigned("cost", fields[7]);
  r.work_norm_var = number("work_norm_var", fields[8]);
  r.vrf = number("vrf", fields[9]);
  return r;
}

void write_text_table(std::ostream& out, const std::vector<TableRow>& rows) {
  out << std::left << std::setw(18) << "method" << std::setw(8) << "model" << std::setw(17)
      << "option" << std::right << std::setw(10) << "m" << std::setw(12) << "n" << std::setw(12)
      << "price" << std::setw(12) << "std" << std::setw(14) << "cost" << std::setw(12)
      << "cost*std^2" << std::setw(10) << "vrf" << '\n';
  for (const auto& r : rows) {
    out << std::left << std::setw(18) << r.method << std::setw(8) << r.model << std::setw(17)
        << r.option << std::right << std::setw(10) << r.m << std::setw(12) << r.n << std::setw(12)
        << format_g6(r.price) << std::setw(12) << format_g6(r.std_error) << std::setw(14) << r.cost
        << std::setw(12) << format_g6(r.work_norm_var) << std::setw(10) << format_g6(r.vrf) << '\n';
  }
}

}  // namespace asianml
