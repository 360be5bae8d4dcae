#pragma once

#include <algorithm>
#include <cstdint>
#include <exception>
#include <thread>
#include <vector>

namespace qgames {

inline unsigned resolve_threads(unsigned requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

/// Splits [0, count) into `chunks` contiguous ranges and runs
/// `fn(chunk, begin, end)` for each on up to `threads` workers. Chunk
/// boundaries depend only on `count` and `chunks`, so callers that reduce
/// per-chunk results in chunk order get thread-count-independent answers.
template <typename Fn>
void parallel_chunks(std::uint64_t count, std::uint64_t chunks, unsigned threads, Fn&& fn) {
  chunks = std::max<std::uint64_t>(1, std::min(chunks, std::max<std::uint64_t>(count, 1)));
  const auto bounds = [&](std::uint64_t c) { return count * c / chunks; };
  threads = static_cast<unsigned>(std::min<std::uint64_t>(resolve_threads(threads), chunks));
  if (threads <= 1) {
    for (std::uint64_t c = 0; c < chunks; ++c) fn(c, bounds(c), bounds(c + 1));
    return;
  }
  std::vector<std::exception_ptr> errors(threads);
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (std::uint64_t c = t; c < chunks; c += threads) fn(c, bounds(c), bounds(c + 1));
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace qgames
