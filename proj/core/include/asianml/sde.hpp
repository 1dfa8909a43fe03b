#pragma once

#include <functional>

namespace asianml {

/// Driftless scalar SDE dF = b(F, t) dW for a forward price.
struct Sde {
  std::function<double(double, double)> diffusion;
  /// db/dx; required by the Milstein scheme only.
  std::function<double(double, double)> diffusion_dx;
  double initial = 0.0;
};

/// b(x, t) = sigma x, b' = sigma.
Sde black_scholes_sde(double f0, double sigma);

}  // namespace asianml
