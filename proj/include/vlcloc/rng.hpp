#pragma once

#include <cstdint>
#include <random>

namespace vlcloc {

/// splitmix64 finaliser; decorrelates nearby integer seeds.
std::uint64_t mix_seed(std::uint64_t x);

/// Per-trial seed: base XOR index, mixed. Trials seeded this way are independent of
/// the order or thread in which they run.
inline std::uint64_t trial_seed(std::uint64_t base, std::uint64_t index) {
  return mix_seed(base ^ index);
}

inline std::mt19937_64 make_rng(std::uint64_t base, std::uint64_t index) {
  return std::mt19937_64(trial_seed(base, index));
}

/// Runs fn(i) for i in [0, n) on a pool of worker threads pulling indices from a shared
/// counter. Results must be written by index; ordering of execution is unspecified.
/// `threads` = 0 picks std::thread::hardware_concurrency() (overridable via VLCLOC_THREADS).
template <class Fn>
void parallel_for(std::size_t n, Fn&& fn, unsigned threads = 0);

unsigned worker_count(unsigned requested);

}  // namespace vlcloc

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace vlcloc {

template <class Fn>
void parallel_for(std::size_t n, Fn&& fn, unsigned threads) {
  const unsigned workers = std::min<std::size_t>(worker_count(threads), n == 0 ? 1 : n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto body = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned t = 0; t < workers; ++t) pool.emplace_back(body);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace vlcloc
