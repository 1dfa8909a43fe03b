#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "asianml/rng.hpp"
#include "asianml/sde.hpp"

namespace asianml {

/// Exact sampler of the forward price F(t) for maturity T. Given sorted
/// times 0 < tau_1 < ... < tau_n it draws (F(tau_1), ..., F(tau_n)) exactly in
/// law with O(n) expected work. Implementations hold parameters only; all
/// randomness comes from the caller's stream.
class ForwardSampler {
 public:
  virtual ~ForwardSampler() = default;

  virtual std::string_view name() const = 0;
  virtual double initial_forward() const = 0;

  /// Fills out[k] with F(times[k]). Returns the number of simulated price
  /// nodes, which is times.size().
  virtual std::uint64_t sample_on(std::span<const double> times, RngStream& rng,
                                  std::span<double> out) const = 0;

  /// E[F(t)^2], in closed form.
  virtual double second_moment(double t) const = 0;
  double variance(double t) const;

  /// The driving SDE dF = b(F, t) dW when the model is a continuous scalar
  /// diffusion with a usable b'. Used by the Euler and Milstein schemes.
  virtual std::optional<Sde> sde() const { return std::nullopt; }

  std::vector<double> sample(std::span<const double> times, RngStream& rng) const;
};

struct BlackScholesParams {
  double spot = 2.0;
  double sigma = 0.5;
  double rate = 0.05;
  double dividend = 0.0;
  double maturity = 2.0;

  double initial_forward() const;
};

struct MertonParams {
  double spot = 2.0;
  double sigma = 0.1765;
  double rate = 0.0559;
  double dividend = 0.0114;
  double intensity = 0.089;       ///< lambda
  double jump_log_mean = -0.8898;  ///< mean of ln Y
  double jump_log_sd = 0.4505;     ///< sd of ln Y
  double maturity = 2.0;

  double initial_forward() const;
  /// E[Y] - 1 = exp(mean + sd^2 / 2) - 1, the compensator per unit intensity.
  double jump_mean() const;
};

struct SquareRootParams {
  double initial_forward = 2.0;
  double sigma = 0.4;
  double maturity = 2.0;
};

/// F(tau_k) = F(tau_{k-1}) exp(-sigma^2 dt / 2 + sigma sqrt(dt) X_k).
std::vector<double> bs_sample_on(const BlackScholesParams& params, std::span<const double> times,
                                 RngStream& rng);

/// Per interval: diffusion normal, Poisson(lambda dt) jump count, one normal
/// for the summed log jump sizes, and the -lambda jump_mean dt compensator.
/// With lambda = 0 no jump variates are drawn, so paths coincide with the
/// Black-Scholes recursion for the same stream.
std::vector<double> merton_sample_on(const MertonParams& params, std::span<const double> times,
                                     RngStream& rng);

/// One exact Square-Root step: 0 stays 0; otherwise N ~ Poisson(2 f / (sigma^2 dt))
/// and the result is (sigma^2 dt / 4) chi^2_{2N}.
double sqr_step(double f_prev, double dt, double sigma, RngStream& rng);

std::vector<double> sqr_sample_on(const SquareRootParams& params, std::span<const double> times,
                                  RngStream& rng);

class BlackScholesSampler final : public ForwardSampler {
 public:
  explicit BlackScholesSampler(BlackScholesParams params);
  std::string_view name() const override { return "bs"; }
  double initial_forward() const override { return f0_; }
  std::uint64_t sample_on(std::span<const double> times, RngStream& rng,
                          std::span<double> out) const override;
  double second_moment(double t) const override;
  std::optional<Sde> sde() const override;
  const BlackScholesParams& params() const { return params_; }

 private:
  BlackScholesParams params_;
  double f0_;
};

class MertonSampler final : public ForwardSampler {
 public:
  explicit MertonSampler(MertonParams params);
  std::string_view name() const override { return "merton"; }
  double initial_forward() const override { return f0_; }
  std::uint64_t sample_on(std::span<const double> times, RngStream& rng,
                          std::span<double> out) const override;
  double second_moment(double t) const override;
  const MertonParams& params() const { return params_; }

 private:
  MertonParams params_;
  double f0_;
  double drift_;  ///< -lambda jump_mean - sigma^2 / 2
};

class SquareRootSampler final : public ForwardSampler {
 public:
  explicit SquareRootSampler(SquareRootParams params);
  std::string_view name() const override { return "sqr"; }
  double initial_forward() const override { return params_.initial_forward; }
  std::uint64_t sample_on(std::span<const double> times, RngStream& rng,
                          std::span<double> out) const override;
  double second_moment(double t) const override;
  const SquareRootParams& params() const { return params_; }

 private:
  SquareRootParams params_;
};

}  // namespace asianml
