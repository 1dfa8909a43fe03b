#include "asianml/payoff.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace asianml {

Payoff ramp_payoff(double scale, double strike, std::string description) {
  if (!(scale > 0.0) || !std::isfinite(strike)) {
    throw std::invalid_argument("ramp_payoff: scale must be positive and strike finite");
  }
  return Payoff{[scale, strike](double x) { return std::max(scale * x - strike, 0.0); }, scale,
                std::move(description)};
}

OptionTerms average_price_call(std::size_t m, double strike, double maturity, double carry) {
  if (m == 0) throw std::invalid_argument("average_price_call: m must be at least 1");
  if (!(strike >= 0.0)) throw std::invalid_argument("average_price_call: strike must be >= 0");

  OptionTerms terms;
  terms.dates = equidistant_dates(m, maturity);
  terms.weights.resize(m);
  double total = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    const double w = std::exp(-carry * (maturity - terms.dates[j])) / static_cast<double>(m);
    terms.weights[j] = w;
    total += w;
  }
  if (carry == 0.0) total = 1.0;
  for (double& w : terms.weights) w /= total;

  std::ostringstream label;
  label << "average price call K=" << strike;
  terms.payoff = ramp_payoff(total, strike, label.str());
  return terms;
}

OptionTerms average_strike_call(std::size_t m, double maturity, double carry) {
  if (m < 2) throw std::invalid_argument("average_strike_call: m must be at least 2");

  OptionTerms terms;
  terms.dates = equidistant_dates(m, maturity);
  terms.weights.resize(m);
  double total = 1.0;
  for (std::size_t j = 0; j + 1 < m; ++j) {
    const double w = std::exp(-carry * (maturity - terms.dates[j])) / static_cast<double>(m - 1);
    terms.weights[j] = -w;
    total += w;
  }
  terms.weights[m - 1] = 1.0;
  if (carry == 0.0) total = 2.0;
  for (double& w : terms.weights) w /= total;

  terms.payoff = ramp_payoff(total, 0.0, "average strike call");
  return terms;
}

double OptionSpec::discount() const { return std::exp(-rate * maturity()); }

OptionSpec make_option_spec(OptionTerms terms, double initial_forward, double rate) {
  if (!(initial_forward > 0.0)) throw std::invalid_argument("initial forward must be positive");
  OptionSpec spec{build_schedule(std::move(terms.dates), std::move(terms.weights)),
                  std::move(terms.payoff), 0.0, initial_forward, rate};
  spec.baseline = spec.payoff(spec.schedule.weight_sum() * initial_forward);
  return spec;
}

double centered_payoff(const OptionSpec& spec, double average) {
  if (!std::isfinite(average)) throw SimulationError("non-finite average from simulation");
  return spec.payoff(average) - spec.baseline;
}

}  // namespace asianml
