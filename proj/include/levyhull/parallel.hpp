#pragma once

// Block-parallel trial scheduling.
//
// Trials are cut into fixed-size blocks whose boundaries do not depend on the
// thread count. Each block yields one accumulator; callers merge the returned
// accumulators in block order, so output is bit-identical for any number of
// worker threads.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace levyhull {

inline constexpr std::size_t kTrialBlock = 256;

/// Worker count: LEVYHULL_THREADS if set, else `requested`, else hardware concurrency.
unsigned resolve_threads(unsigned requested);

/// Runs fn(begin, end) -> Acc over [0, trials) in blocks; returns one Acc per block.
template <class Fn>
auto run_blocks(std::size_t trials, unsigned threads, Fn&& fn)
    -> std::vector<decltype(fn(std::size_t{}, std::size_t{}))> {
  using Acc = decltype(fn(std::size_t{}, std::size_t{}));
  const std::size_t blocks = (trials + kTrialBlock - 1) / kTrialBlock;
  std::vector<Acc> out(blocks);
  const unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(std::max(1u, resolve_threads(threads)), blocks));

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (;;) {
      const std::size_t b = next.fetch_add(1);
      if (b >= blocks) return;
      try {
        const std::size_t begin = b * kTrialBlock;
        out[b] = fn(begin, std::min(trials, begin + kTrialBlock));
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(blocks);
      }
    }
  };

  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

/// Per-trial values in trial order (for estimators that need the full sample).
template <class Fn>
std::vector<double> collect_trials(std::size_t trials, unsigned threads, Fn&& per_trial) {
  auto blocks = run_blocks(trials, threads, [&](std::size_t begin, std::size_t end) {
    std::vector<double> v;
    v.reserve(end - begin);
    for (std::size_t k = begin; k < end; ++k) v.push_back(per_trial(k));
    return v;
  });
  std::vector<double> all;
  all.reserve(trials);
  for (auto& b : blocks) all.insert(all.end(), b.begin(), b.end());
  return all;
}

}  // namespace levyhull
