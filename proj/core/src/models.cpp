#include "asianml/models.hpp"

#include <cmath>
#include <stdexcept>

#include "asianml/schemes.hpp"

namespace asianml {
namespace {

void check_times(std::span<const double> times, std::span<double> out) {
  if (out.size() < times.size()) throw std::invalid_argument("sample_on: output span too small");
}

}  // namespace

double ForwardSampler::variance(double t) const {
  const double f0 = initial_forward();
  return second_moment(t) - f0 * f0;
}

std::vector<double> ForwardSampler::sample(std::span<const double> times, RngStream& rng) const {
  std::vector<double> out(times.size());
  sample_on(times, rng, out);
  return out;
}

double BlackScholesParams::initial_forward() const {
  return spot * std::exp((rate - dividend) * maturity);
}

double MertonParams::initial_forward() const {
  return spot * std::exp((rate - dividend) * maturity);
}

double MertonParams::jump_mean() const {
  return std::exp(jump_log_mean + 0.5 * jump_log_sd * jump_log_sd) - 1.0;
}

// Black-Scholes

BlackScholesSampler::BlackScholesSampler(BlackScholesParams params)
    : params_(params), f0_(params.initial_forward()) {
  if (!(params_.sigma > 0.0) || !(params_.maturity > 0.0) || !(params_.spot > 0.0)) {
    throw std::invalid_argument("Black-Scholes: spot, sigma and maturity must be positive");
  }
}

std::uint64_t BlackScholesSampler::sample_on(std::span<const double> times, RngStream& rng,
                                             std::span<double> out) const {
  check_times(times, out);
  const double sigma = params_.sigma;
  double f = f0_;
  double t_prev = 0.0;
  for (std::size_t k = 0; k < times.size(); ++k) {
    const double dt = times[k] - t_prev;
    f *= std::exp(-0.5 * sigma * sigma * dt + sigma * std::sqrt(dt) * rng.normal());
    out[k] = f;
    t_prev = times[k];
  }
  return times.size();
}

double BlackScholesSampler::second_moment(double t) const {
  return f0_ * f0_ * std::exp(params_.sigma * params_.sigma * t);
}

std::optional<Sde> BlackScholesSampler::sde() const { return black_scholes_sde(f0_, params_.sigma); }

std::vector<double> bs_sample_on(const BlackScholesParams& params, std::span<const double> times,
                                 RngStream& rng) {
  return BlackScholesSampler(params).sample(times, rng);
}

// Merton

MertonSampler::MertonSampler(MertonParams params) : params_(params), f0_(params.initial_forward()) {
  if (!(params_.sigma > 0.0) || !(params_.maturity > 0.0) || !(params_.spot > 0.0)) {
    throw std::invalid_argument("Merton: spot, sigma and maturity must be positive");
  }
  if (params_.intensity < 0.0 || params_.jump_log_sd < 0.0) {
    throw std::invalid_argument("Merton: jump intensity and jump log-sd must be non-negative");
  }
  drift_ = -params_.intensity * params_.jump_mean() - 0.5 * params_.sigma * params_.sigma;
}

std::uint64_t MertonSampler::sample_on(std::span<const double> times, RngStream& rng,
                                       std::span<double> out) const {
  check_times(times, out);
  const double sigma = params_.sigma;
  const double lambda = params_.intensity;
  double f = f0_;
  double t_prev = 0.0;
  for (std::size_t k = 0; k < times.size(); ++k) {
    const double dt = times[k] - t_prev;
    double log_step = drift_ * dt + sigma * std::sqrt(dt) * rng.normal();
    if (lambda > 0.0) {
      const std::uint64_t jumps = rng.poisson(lambda * dt);
      if (jumps > 0) {
        const auto n = static_cast<double>(jumps);
        log_step += n * params_.jump_log_mean + std::sqrt(n) * params_.jump_log_sd * rng.normal();
      }
    }
    f *= std::exp(log_step);
    out[k] = f;
    t_prev = times[k];
  }
  return times.size();
}

double MertonSampler::second_moment(double t) const {
  const double s2 = params_.sigma * params_.sigma;
  const double lambda = params_.intensity;
  const double mu = params_.jump_log_mean;
  const double g2 = params_.jump_log_sd * params_.jump_log_sd;
  const double second_jump = std::exp(2.0 * mu + 2.0 * g2);
  return f0_ * f0_ *
         std::exp(s2 * t - 2.0 * lambda * params_.jump_mean() * t + lambda * t * (second_jump - 1.0));
}

std::vector<double> merton_sample_on(const MertonParams& params, std::span<const double> times,
                                     RngStream& rng) {
  return MertonSampler(params).sample(times, rng);
}

// Square-Root

double sqr_step(double f_prev, double dt, double sigma, RngStream& rng) {
  if (f_prev <= 0.0) return 0.0;
  const double scale = sigma * sigma * dt;
  const std::uint64_t n = rng.poisson(2.0 * f_prev / scale);
  return 0.25 * scale * rng.chi_square_even(n);
}

SquareRootSampler::SquareRootSampler(SquareRootParams params) : params_(params) {
  if (!(params_.sigma > 0.0) || !(params_.maturity > 0.0) || !(params_.initial_forward > 0.0)) {
    throw std::invalid_argument("Square-Root: initial forward, sigma and maturity must be positive");
  }
}

std::uint64_t SquareRootSampler::sample_on(std::span<const double> times, RngStream& rng,
                                           std::span<double> out) const {
  check_times(times, out);
  double f = params_.initial_forward;
  double t_prev = 0.0;
  for (std::size_t k = 0; k < times.size(); ++k) {
    f = sqr_step(f, times[k] - t_prev, params_.sigma, rng);
    out[k] = f;
    t_prev = times[k];
  }
  return times.size();
}

double SquareRootSampler::second_moment(double t) const {
  const double f0 = params_.initial_forward;
  return f0 * f0 + params_.sigma * params_.sigma * f0 * t;
}

std::vector<double> sqr_sample_on(const SquareRootParams& params, std::span<const double> times,
                                  RngStream& rng) {
  return SquareRootSampler(params).sample(times, rng);
}

}  // namespace asianml
