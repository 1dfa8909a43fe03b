#include "asianml/schemes.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "asianml/payoff.hpp"

namespace asianml {
namespace {

bool same_time(double a, double b, double tol) { return std::fabs(a - b) <= tol; }

// Positions of the coarse grid times inside the fine grid.
std::vector<std::uint32_t> embed(const MergedGrid& coarse, const MergedGrid& fine, double tol) {
  std::vector<std::uint32_t> pos;
  pos.reserve(coarse.times.size());
  std::size_t k = 0;
  for (double t : coarse.times) {
    while (k < fine.times.size() && !same_time(fine.times[k], t, tol)) ++k;
    if (k == fine.times.size()) throw std::logic_error("coarse grid is not nested in the fine grid");
    pos.push_back(static_cast<std::uint32_t>(k));
  }
  return pos;
}

// Steps one path along `grid` with the given increments and writes the values
// at the requested date positions.
void step_path(Scheme scheme, const Sde& sde, const MergedGrid& grid,
               std::span<const double> increments, std::span<double> out) {
  const std::size_t n = grid.times.size();
  std::vector<double> state(n);
  state[0] = sde.initial;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const double x = state[k];
    const double t = grid.times[k];
    const double dw = increments[k];
    const double b = sde.diffusion(x, t);
    double next = x + b * dw;
    if (scheme == Scheme::milstein) {
      const double dt = grid.times[k + 1] - t;
      next += 0.5 * b * sde.diffusion_dx(x, t) * (dw * dw - dt);
    }
    if (!std::isfinite(next)) throw SimulationError("discretization produced a non-finite state");
    state[k + 1] = next;
  }
  for (std::size_t i = 0; i < grid.date_positions.size(); ++i) out[i] = state[grid.date_positions[i]];
}

}  // namespace

Sde black_scholes_sde(double f0, double sigma) {
  return Sde{[sigma](double x, double) { return sigma * x; }, [sigma](double, double) { return sigma; },
             f0};
}

int scheme_beta(Scheme scheme) { return scheme == Scheme::euler ? 1 : 2; }

MergedGrid build_merged_grid(const MonitoringSchedule& schedule, std::span<const DateIndex> subset,
                             int level) {
  if (level < 0 || level > 40) throw std::invalid_argument("build_merged_grid: level out of range");
  const double T = schedule.maturity();
  const double tol = 1e-12 * T;
  const std::uint64_t cells = std::uint64_t{1} << level;

  MergedGrid grid;
  grid.level = level;
  grid.times.reserve(subset.size() + cells + 1);
  grid.date_positions.reserve(subset.size());

  std::size_t d = 0;
  std::uint64_t i = 0;
  auto dyadic = [&](std::uint64_t idx) {
    return idx == cells ? T : T * static_cast<double>(idx) / static_cast<double>(cells);
  };
  while (i <= cells || d < subset.size()) {
    const bool have_dyadic = i <= cells;
    const bool have_date = d < subset.size();
    const double td = have_dyadic ? dyadic(i) : 0.0;
    const double tj = have_date ? schedule.date(subset[d]) : 0.0;
    if (have_date && d > 0 && subset[d] <= subset[d - 1]) {
      throw std::invalid_argument("build_merged_grid: subset must be strictly increasing");
    }
    if (have_dyadic && have_date && same_time(td, tj, tol)) {
      grid.times.push_back(tj);
      grid.date_positions.push_back(static_cast<std::uint32_t>(grid.times.size() - 1));
      ++i;
      ++d;
    } else if (have_dyadic && (!have_date || td < tj)) {
      grid.times.push_back(td);
      ++i;
    } else {
      grid.times.push_back(tj);
      grid.date_positions.push_back(static_cast<std::uint32_t>(grid.times.size() - 1));
      ++d;
    }
  }
  return grid;
}

CoupledPaths simulate_coupled(Scheme scheme, const Sde& sde, const MonitoringSchedule& schedule,
                              std::span<const DateIndex> fine_subset,
                              std::span<const DateIndex> coarse_subset, int level, RngStream& rng) {
  if (scheme == Scheme::milstein && !sde.diffusion_dx) {
    throw std::invalid_argument("Milstein scheme needs the derivative of the diffusion coefficient");
  }
  CoupledPaths paths;
  paths.fine_grid = build_merged_grid(schedule, fine_subset, level);
  const MergedGrid& fine = paths.fine_grid;

  paths.fine_increments.resize(fine.times.size() - 1);
  for (std::size_t k = 0; k + 1 < fine.times.size(); ++k) {
    paths.fine_increments[k] = std::sqrt(fine.times[k + 1] - fine.times[k]) * rng.normal();
  }
  paths.fine.resize(fine_subset.size());
  step_path(scheme, sde, fine, paths.fine_increments, paths.fine);
  paths.nodes = fine.times.size() - 1;

  if (level == 0) return paths;

  if (!std::includes(fine_subset.begin(), fine_subset.end(), coarse_subset.begin(),
                     coarse_subset.end())) {
    throw std::invalid_argument("simulate_coupled: coarse subset must be contained in the fine subset");
  }
  paths.coarse_grid = build_merged_grid(schedule, coarse_subset, level - 1);
  const MergedGrid& coarse = paths.coarse_grid;
  const auto pos = embed(coarse, fine, 1e-12 * schedule.maturity());
  paths.coarse_increments.resize(coarse.times.size() - 1);
  for (std::size_t k = 0; k + 1 < coarse.times.size(); ++k) {
    double sum = 0.0;
    for (std::uint32_t q = pos[k]; q < pos[k + 1]; ++q) sum += paths.fine_increments[q];
    paths.coarse_increments[k] = sum;
  }
  paths.coarse.resize(coarse_subset.size());
  step_path(scheme, sde, coarse, paths.coarse_increments, paths.coarse);
  paths.nodes += coarse.times.size() - 1;
  return paths;
}

CoupledPaths euler_coupled(const Sde& sde, const MonitoringSchedule& schedule,
                           std::span<const DateIndex> fine_subset,
                           std::span<const DateIndex> coarse_subset, int level, RngStream& rng) {
  return simulate_coupled(Scheme::euler, sde, schedule, fine_subset, coarse_subset, level, rng);
}

CoupledPaths milstein_coupled(const Sde& sde, const MonitoringSchedule& schedule,
                              std::span<const DateIndex> fine_subset,
                              std::span<const DateIndex> coarse_subset, int level, RngStream& rng) {
  return simulate_coupled(Scheme::milstein, sde, schedule, fine_subset, coarse_subset, level, rng);
}

}  // namespace asianml
