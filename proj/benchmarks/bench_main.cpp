#include <benchmark/benchmark.h>

#include <vector>

#include "asianml/estimators.hpp"
#include "asianml/models.hpp"
#include "asianml/payoff.hpp"
#include "asianml/schedule.hpp"

using namespace asianml;

static void BM_LevelStructure(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  const auto s = build_schedule(equidistant_dates(m, 2.0), std::vector<double>(m, 1.0));
  for (auto _ : state) benchmark::DoNotOptimize(build_level_structure(s));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_LevelStructure)->RangeMultiplier(10)->Range(100, 1000000)->Complexity();

template <class Sampler, class Params>
static void BM_Sampler(benchmark::State& state) {
  const Sampler sampler{Params{}};
  const auto times = equidistant_dates(static_cast<std::size_t>(state.range(0)), 2.0);
  std::vector<double> out(times.size());
  RngStream rng(1);
  for (auto _ : state) {
    sampler.sample_on(times, rng, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Sampler<BlackScholesSampler, BlackScholesParams>)->Arg(125)->Arg(1000);
BENCHMARK(BM_Sampler<MertonSampler, MertonParams>)->Arg(125)->Arg(1000);
BENCHMARK(BM_Sampler<SquareRootSampler, SquareRootParams>)->Arg(125)->Arg(1000);

static void BM_Poisson(benchmark::State& state) {
  RngStream rng(2);
  const double mean = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(rng.poisson(mean));
}
BENCHMARK(BM_Poisson)->Arg(1)->Arg(9)->Arg(100)->Arg(100000);

static void BM_RmlmcReplication(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  const BlackScholesSampler bs(BlackScholesParams{});
  const auto spec = make_option_spec(average_price_call(m, 2.0, 2.0, 0.05), bs.initial_forward(), 0.05);
  const auto ls = build_level_structure(spec.schedule);
  const auto law = LevelDistribution::unbiased(2.0, ls.max_level());
  RngStream rng(3);
  std::vector<double> buffer;
  for (auto _ : state) {
    const int l = law.sample(rng);
    benchmark::DoNotOptimize(sample_level_difference_exact(ls, spec, bs, l, rng, buffer));
  }
}
BENCHMARK(BM_RmlmcReplication)->Arg(125)->Arg(500)->Arg(100000);

static void BM_MilsteinReplication(benchmark::State& state) {
  const BlackScholesSampler bs(BlackScholesParams{});
  const auto spec = make_option_spec(average_price_call(125, 2.0, 2.0, 0.05), bs.initial_forward(), 0.05);
  const auto ls = build_level_structure(spec.schedule);
  const Sde sde = *bs.sde();
  const auto law = LevelDistribution::unbiased(2.0);
  RngStream rng(4);
  for (auto _ : state) {
    const int l = law.sample(rng);
    benchmark::DoNotOptimize(sample_level_difference_coupled(ls, spec, sde, Scheme::milstein, l, rng));
  }
}
BENCHMARK(BM_MilsteinReplication);
BENCHMARK_MAIN();
