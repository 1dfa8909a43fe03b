#pragma once

#include <cstdint>
#include <exception>
#include <thread>
#include <vector>

#include "asianml/rng.hpp"
#include "asianml/statistics.hpp"

namespace asianml {

/// Replications are split over `workers` threads; worker w draws from the
/// stream derived from (seed, tag, w). Results are reproducible for a fixed
/// (seed, workers) pair.
struct ParallelOptions {
  std::uint64_t seed = 0;
  unsigned workers = 1;
};

/// Runs n replications. `make_worker()` is called once per worker and must
/// return a callable `void(RngStream&, RunStatistics&)` performing one
/// replication; per-worker statistics are merged in worker order.
template <class MakeWorker>
RunStatistics run_replications(std::uint64_t n, const ParallelOptions& options, std::uint64_t tag,
                               MakeWorker&& make_worker) {
  const unsigned workers = options.workers == 0 ? 1u : options.workers;
  std::vector<RunStatistics> partial(workers);
  std::vector<std::exception_ptr> errors(workers);
  auto body = [&](unsigned w) {
    try {
      const std::uint64_t share = n / workers + (w < n % workers ? 1 : 0);
      RngStream rng(derive_seed(options.seed, tag), w);
      auto replicate = make_worker();
      for (std::uint64_t i = 0; i < share; ++i) replicate(rng, partial[w]);
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };
  if (workers == 1) {
    body(0);
  } else {
    std::vector<std::jthread> threads;
    threads.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) threads.emplace_back(body, w);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  RunStatistics total;
  for (const auto& p : partial) total.merge(p);
  return total;
}

}  // namespace asianml
