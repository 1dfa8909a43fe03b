#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "asianml/schedule.hpp"

namespace asianml {

/// Raised when a simulated quantity is not finite (e.g. a diverging
/// discretization). Aborts the replication that produced it.
class SimulationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A kappa-Lipschitz payoff f applied to the weighted average A.
struct Payoff {
  std::function<double(double)> evaluate;
  double lipschitz = 1.0;
  std::string description;

  double operator()(double x) const { return evaluate(x); }
};

/// f(x) = max(scale * x - strike, 0); Lipschitz constant = scale.
Payoff ramp_payoff(double scale, double strike, std::string description);

/// Dates, weights and payoff of a contract, before a model fixes F_0.
struct OptionTerms {
  std::vector<double> dates;
  std::vector<double> weights;
  Payoff payoff;
};

/// Average price call max(mean_i S_i - K, 0) on equidistant dates t_i = iT/m.
///
/// `carry` maps prices at t_i onto forwards for maturity T through
/// S_i = F_i exp(-carry (T - t_i)). With carry = 0 (futures maturing at T) the
/// weights are 1/m and f(x) = max(x - K, 0). Otherwise the raw weights are
/// normalised and the normaliser moves into f as a scale factor.
OptionTerms average_price_call(std::size_t m, double strike, double maturity, double carry = 0.0);

/// Average strike call max(S_m - mean_{i<m} S_i, 0). With carry = 0 this is
/// f(x) = 2 max(x, 0), w_j = -1/(2(m-1)) for j < m and w_m = 1/2.
OptionTerms average_strike_call(std::size_t m, double maturity, double carry = 0.0);

/// Contract bound to a model: the schedule, payoff, baseline a = f(W(1,m) F_0)
/// and the discounting data. Immutable.
struct OptionSpec {
  MonitoringSchedule schedule;
  Payoff payoff;
  double baseline = 0.0;
  double initial_forward = 0.0;
  double rate = 0.0;

  double maturity() const { return schedule.maturity(); }
  double discount() const;
  /// e^{-rT} (mean + a).
  double price_from_mean(double mean) const { return discount() * (mean + baseline); }
};

OptionSpec make_option_spec(OptionTerms terms, double initial_forward, double rate);

/// U = f(x) - a. Throws SimulationError when x is not finite.
double centered_payoff(const OptionSpec& spec, double average);

}  // namespace asianml
