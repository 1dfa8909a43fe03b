#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "asianml/estimators.hpp"
#include "asianml/models.hpp"
#include "asianml/payoff.hpp"
#include "asianml/schemes.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace asianml;
using asianml::testing::moments;

namespace {

MonitoringSchedule uniform_schedule(std::size_t m, double t = 2.0) {
  return build_schedule(equidistant_dates(m, t), std::vector<double>(m, 1.0));
}

std::vector<DateIndex> subset_from_mask(unsigned mask, std::size_t m) {
  std::vector<DateIndex> s;
  for (std::size_t j = 0; j < m; ++j) {
    if (mask & (1u << j)) s.push_back(static_cast<DateIndex>(j + 1));
  }
  return s;
}

bool grid_contains(const MergedGrid& big, const MergedGrid& small) {
  return std::includes(big.times.begin(), big.times.end(), small.times.begin(), small.times.end());
}

Sde constant_sde(double c, double f0) {
  return Sde{[c](double, double) { return c; }, [](double, double) { return 0.0; }, f0};
}

}  // namespace

TEST(MergedGrid, SingleMaturityLevelZero) {
  const auto s = uniform_schedule(4);
  const std::vector<DateIndex> j{4};
  const auto g = build_merged_grid(s, j, 0);
  EXPECT_EQ(g.times, (std::vector<double>{0.0, 2.0}));
  EXPECT_EQ(g.date_positions, (std::vector<std::uint32_t>{1}));
}

TEST(MergedGrid, UnionWithDyadicPoints) {
  const auto s = uniform_schedule(4);
  const std::vector<DateIndex> j{2, 4};
  const auto g = build_merged_grid(s, j, 1);
  EXPECT_EQ(g.times, (std::vector<double>{0.0, 1.0, 2.0}));
  EXPECT_EQ(g.date_positions, (std::vector<std::uint32_t>{1, 2}));
  const std::vector<DateIndex> all{1, 2, 3, 4};
  const auto g2 = build_merged_grid(s, all, 1);
  EXPECT_EQ(g2.times, (std::vector<double>{0.0, 0.5, 1.0, 1.5, 2.0}));
}

TEST(MergedGrid, SizeAndGapBounds) {
  const auto s = build_schedule({0.13, 0.4, 0.41, 1.7, 3.0}, {1, 1, 1, 1, 1});
  const std::vector<DateIndex> j{1, 2, 3, 4, 5};
  for (int l = 0; l <= 6; ++l) {
    const auto g = build_merged_grid(s, j, l);
    EXPECT_LE(g.times.size(), j.size() + (std::size_t{1} << l) + 1);
    for (std::size_t k = 1; k < g.times.size(); ++k) {
      EXPECT_GT(g.times[k], g.times[k - 1]);
      EXPECT_LE(g.times[k] - g.times[k - 1], std::ldexp(3.0, -l) * (1 + 1e-12));
    }
    for (std::size_t i = 0; i < j.size(); ++i) EXPECT_EQ(g.times[g.date_positions[i]], s.date(j[i]));
  }
}

// G(J', l-1) is contained in G(J, l) for J' in J. Inclusion is monotone in J
// and in l, so every subset J of {1..m} is checked against l-1 and against
// each one-element removal.
TEST(MergedGrid, NestingExhaustiveSmallSchedules) {
  for (std::size_t m : {1u, 3u, 5u, 8u, 12u, 16u}) {
    const auto s = uniform_schedule(m, 1.7);
    for (unsigned mask = 0; mask < (1u << m); ++mask) {
      const auto j = subset_from_mask(mask, m);
      for (int l = 1; l <= 4; ++l) {
        const auto fine = build_merged_grid(s, j, l);
        ASSERT_TRUE(grid_contains(fine, build_merged_grid(s, j, l - 1)));
        for (std::size_t drop = 0; drop < j.size(); ++drop) {
          auto smaller = j;
          smaller.erase(smaller.begin() + static_cast<std::ptrdiff_t>(drop));
          ASSERT_TRUE(grid_contains(fine, build_merged_grid(s, smaller, l)));
        }
      }
    }
  }
}

// All pairs J' in J for m <= 6.
TEST(MergedGrid, NestingAllPairsTinySchedules) {
  for (std::size_t m = 1; m <= 6; ++m) {
    const auto s = uniform_schedule(m, 1.0);
    for (unsigned mask = 0; mask < (1u << m); ++mask) {
      for (unsigned sub = mask;; sub = (sub - 1) & mask) {
        for (int l = 1; l <= 4; ++l) {
          ASSERT_TRUE(grid_contains(build_merged_grid(s, subset_from_mask(mask, m), l),
                                    build_merged_grid(s, subset_from_mask(sub, m), l - 1)));
        }
        if (sub == 0) break;
      }
    }
  }
}

TEST(Coupled, CoarseIncrementsAreSumsOfFineIncrements) {
  const auto s = uniform_schedule(11);
  const auto ls = build_level_structure(s);
  const Sde sde = black_scholes_sde(2.0, 0.5);
  RngStream rng(5);
  for (int l = 1; l <= 6; ++l) {
    const auto& fine = ls.level(l).nodes;
    const auto& coarse = ls.level(l - 1).nodes;
    const auto p = euler_coupled(sde, s, fine, coarse, l, rng);
    std::size_t q = 0;
    for (std::size_t k = 0; k + 1 < p.coarse_grid.times.size(); ++k) {
      double sum = 0.0;
      while (p.fine_grid.times[q] != p.coarse_grid.times[k]) ++q;
      for (; p.fine_grid.times[q] != p.coarse_grid.times[k + 1]; ++q) sum += p.fine_increments[q];
      ASSERT_EQ(sum, p.coarse_increments[k]);
    }
    const std::uint64_t bound = (fine.size() + (1u << l) + 1) + (coarse.size() + (1u << (l - 1)) + 1);
    EXPECT_LE(p.nodes, bound);
    EXPECT_EQ(p.nodes, (p.fine_grid.times.size() - 1) + (p.coarse_grid.times.size() - 1));
  }
}

TEST(Coupled, LevelZeroHasOnlyFinePath) {
  const auto s = uniform_schedule(3);
  const std::vector<DateIndex> j{3};
  RngStream rng(1);
  const auto p = euler_coupled(black_scholes_sde(2.0, 0.5), s, j, {}, 0, rng);
  EXPECT_EQ(p.fine.size(), 1u);
  EXPECT_TRUE(p.coarse.empty());
  EXPECT_EQ(p.nodes, 1u);
}

TEST(Coupled, RejectsCoarseSubsetOutsideFine) {
  const auto s = uniform_schedule(4);
  const std::vector<DateIndex> fine{2, 4}, coarse{3, 4};
  RngStream rng(1);
  EXPECT_THROW(euler_coupled(black_scholes_sde(2, 0.5), s, fine, coarse, 1, rng),
               std::invalid_argument);
  Sde no_dx{[](double x, double) { return x; }, {}, 1.0};
  EXPECT_THROW(milstein_coupled(no_dx, s, fine, {}, 0, rng), std::invalid_argument);
}

TEST(Coupled, NonFiniteStateRaises) {
  const auto s = uniform_schedule(4);
  const std::vector<DateIndex> j{4};
  const Sde blowup{[](double x, double) { return 1e300 * x * x; }, {}, 10.0};
  RngStream rng(1);
  EXPECT_THROW(euler_coupled(blowup, s, j, {}, 3, rng), SimulationError);
}

TEST(Coupled, ConstantDiffusionEulerIsExact) {
  const auto s = uniform_schedule(4);
  const std::vector<DateIndex> j{2, 4};
  const Sde sde = constant_sde(0.3, 1.0);
  RngStream rng(2);
  const int n = 100000;
  std::vector<double> x(n), y(n);
  RngStream ref(3);
  for (int i = 0; i < n; ++i) {
    x[i] = euler_coupled(sde, s, j, {}, 0, rng).fine[1];
    y[i] = 1.0 + 0.3 * std::sqrt(2.0) * ref.normal();
  }
  EXPECT_LT(asianml::testing::ks_statistic(x, y), asianml::testing::ks_critical_1pct(n, n));
  const auto mo = moments(x);
  EXPECT_NEAR(mo.mean, 1.0, 4 * mo.se);
}

TEST(Coupled, MilsteinEqualsEulerForConstantDiffusion) {
  const auto s = uniform_schedule(9);
  const auto ls = build_level_structure(s);
  const Sde sde = constant_sde(0.7, 2.0);
  for (int l = 1; l <= 5; ++l) {
    RngStream a(l), b(l);
    const auto e = euler_coupled(sde, s, ls.level(l).nodes, ls.level(l - 1).nodes, l, a);
    const auto m = milstein_coupled(sde, s, ls.level(l).nodes, ls.level(l - 1).nodes, l, b);
    EXPECT_EQ(e.fine, m.fine);
    EXPECT_EQ(e.coarse, m.coarse);
  }
}

TEST(Coupled, StrongOrderSlopes) {
  const double euler = asianml::testing::strong_order_slope(Scheme::euler, 10000, 17);
  const double milstein = asianml::testing::strong_order_slope(Scheme::milstein, 10000, 17);
  EXPECT_GE(euler, -0.65);
  EXPECT_LE(euler, -0.35);
  EXPECT_GE(milstein, -1.2);
  EXPECT_LE(milstein, -0.8);
}

// c2 2^{-2l}: consecutive Milstein mean-square errors shrink by about 4.
TEST(Coupled, MilsteinConstantStableAcrossLevels) {
  std::vector<double> mse;
  for (int l = 2; l <= 7; ++l) {
    const double rms = asianml::testing::strong_rms_error(Scheme::milstein, l, 20000, 23);
    mse.push_back(rms * rms);
  }
  for (std::size_t i = 1; i < mse.size(); ++i) {
    const double ratio = mse[i - 1] / mse[i];
    EXPECT_GT(ratio, 4.0 * 0.7) << "level " << i + 2;
    EXPECT_LT(ratio, 4.0 * 1.3) << "level " << i + 2;
  }
}

// Sum over l = 0..8 of E[U^_l - U^_{l-1}] against exact-model E[U].
TEST(Coupled, TelescopingMatchesExactModel) {
  const BlackScholesSampler bs(BlackScholesParams{});
  const auto spec = make_option_spec(average_price_call(125, 2.0, 2.0), bs.initial_forward(), 0.05);
  const auto ls = build_level_structure(spec.schedule);
  const Sde sde = *bs.sde();
  double sum = 0.0, var = 0.0;
  const int n = 20000;
  for (int l = 0; l <= 8; ++l) {
    RngStream rng(31, static_cast<std::uint64_t>(l));
    std::vector<double> d(n);
    for (auto& x : d) x = sample_level_difference_coupled(ls, spec, sde, Scheme::milstein, l, rng).value;
    const auto mo = moments(d);
    sum += mo.mean;
    var += mo.se * mo.se;
  }
  const auto exact = plain_mc_estimate(spec, bs, 200000, ParallelOptions{77, 1});
  const double exact_se = exact.std_error / spec.discount();
  EXPECT_NEAR(sum, exact.mean, 4 * std::sqrt(var + exact_se * exact_se));
}
