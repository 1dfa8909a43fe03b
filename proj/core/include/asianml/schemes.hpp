#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "asianml/rng.hpp"
#include "asianml/sde.hpp"
#include "asianml/schedule.hpp"

namespace asianml {

enum class Scheme { euler, milstein };

/// Strong order parameter beta of A2: 1 for Euler, 2 for Milstein.
int scheme_beta(Scheme scheme);

/// G(J, l): the dates of J merged with the dyadic points i 2^{-l} T,
/// i = 0..2^l, sorted and de-duplicated (relative tolerance 1e-12 of T).
struct MergedGrid {
  int level = 0;
  std::vector<double> times;  ///< times[0] = 0
  /// Grid position of each date of J, aligned with the subset.
  std::vector<std::uint32_t> date_positions;
};

MergedGrid build_merged_grid(const MonitoringSchedule& schedule, std::span<const DateIndex> subset,
                             int level);

/// Approximate forwards at two consecutive levels driven by one Brownian path.
struct CoupledPaths {
  std::vector<double> fine;    ///< F^(J_fine, l), aligned with J_fine
  std::vector<double> coarse;  ///< F^(J_coarse, l-1); empty when l = 0
  MergedGrid fine_grid;
  MergedGrid coarse_grid;
  /// Brownian increments over the fine grid gaps, and their sums over the
  /// coarse grid gaps.
  std::vector<double> fine_increments;
  std::vector<double> coarse_increments;
  /// Simulated states: one per non-zero grid time, on both grids.
  std::uint64_t nodes = 0;
};

/// Draws the Brownian path on G(J_fine, l), steps the fine path on it and the
/// coarse path on G(J_coarse, l-1) with the aggregated increments. At l = 0
/// only the fine path is produced. J_coarse must be a subset of J_fine.
/// Throws SimulationError if a state becomes non-finite.
CoupledPaths simulate_coupled(Scheme scheme, const Sde& sde, const MonitoringSchedule& schedule,
                              std::span<const DateIndex> fine_subset,
                              std::span<const DateIndex> coarse_subset, int level, RngStream& rng);

/// F_{k+1} = F_k + b(F_k, tau_k) dW.
CoupledPaths euler_coupled(const Sde& sde, const MonitoringSchedule& schedule,
                           std::span<const DateIndex> fine_subset,
                           std::span<const DateIndex> coarse_subset, int level, RngStream& rng);

/// Euler plus the correction b b' ((dW)^2 - dt) / 2.
CoupledPaths milstein_coupled(const Sde& sde, const MonitoringSchedule& schedule,
                              std::span<const DateIndex> fine_subset,
                              std::span<const DateIndex> coarse_subset, int level, RngStream& rng);

}  // namespace asianml
