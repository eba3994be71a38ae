#pragma once

#include <cstdint>
#include <exception>
#include <thread>
#include <vector>

namespace latlab {

/// LATLAB_WORKERS if set, else the hardware concurrency (at least 1).
int configuredWorkers();

struct WorkerRange {
  int worker = 0;
  std::uint64_t begin = 0;
  std::uint64_t end = 0;
};

/// Contiguous split of [0, trials) over `workers` workers.
std::vector<WorkerRange> partitionTrials(std::uint64_t trials, int workers);

/// Runs f(trialIndex) for every trial. Results must be written to per-index
/// slots by f; the merge order is then independent of the worker count. If any
/// trial throws, the exception of the lowest failing range is rethrown.
template <class F>
void parallelTrials(std::uint64_t trials, int workers, F&& f) {
  if (workers <= 0) workers = configuredWorkers();
  const auto ranges = partitionTrials(trials, workers);
  if (ranges.size() <= 1) {
    for (std::uint64_t i = 0; i < trials; ++i) f(i);
    return;
  }
  std::vector<std::exception_ptr> errors(ranges.size());
  std::vector<std::thread> threads;
  threads.reserve(ranges.size());
  for (std::size_t w = 0; w < ranges.size(); ++w) {
    threads.emplace_back([&, w] {
      try {
        for (std::uint64_t i = ranges[w].begin; i < ranges[w].end; ++i) f(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace latlab
