#pragma once

#include <cstdint>
#include <random>

namespace asianml {

/// Mixes a base seed with up to two stream coordinates (worker index, phase
/// tag, level, ...). SplitMix64 finalizer, so nearby inputs decorrelate.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0);

/// A single stream of random variates. Every kernel in the library draws from
/// a caller-owned stream; nothing else holds mutable random state.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::uint64_t stream = 0);

  /// Uniform on the open interval (0, 1).
  double uniform();
  double normal();

  /// Inversion for mean < 10, Hormann's PTRS transformed rejection above,
  /// so the expected work is O(1) for any mean.
  std::uint64_t poisson(double mean);

  /// Gamma(shape, scale = 1).
  double gamma(double shape);

  /// Chi-square with 2k degrees of freedom, drawn as 2 Gamma(k); k = 0 gives 0.
  double chi_square_even(std::uint64_t k);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::uint64_t poisson_inversion(double mean);
  std::uint64_t poisson_ptrs(double mean);

  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_;
  std::gamma_distribution<double> gamma_;
};

}  // namespace asianml
