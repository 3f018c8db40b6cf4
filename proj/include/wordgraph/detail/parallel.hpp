#pragma once

#include <atomic>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace wordgraph::detail {

inline unsigned resolve_threads(unsigned requested) {
  if (requested != 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

// Runs fn(begin, end, chunk_index) over [0, count) split into fixed-size
// chunks. Chunk boundaries depend only on count and chunk_size, never on the
// thread count, so callers can combine per-chunk results in chunk order and
// obtain bit-identical totals for any number of threads.
inline void for_chunks(std::size_t count, std::size_t chunk_size, unsigned threads,
                       const std::function<void(std::size_t, std::size_t, std::size_t)>& fn) {
  if (count == 0) return;
  if (chunk_size == 0) chunk_size = 1;
  const std::size_t num_chunks = (count + chunk_size - 1) / chunk_size;
  const unsigned n_threads = resolve_threads(threads);

  if (n_threads <= 1 || num_chunks == 1) {
    for (std::size_t c = 0; c < num_chunks; ++c) {
      const std::size_t begin = c * chunk_size;
      const std::size_t end = begin + chunk_size < count ? begin + chunk_size : count;
      fn(begin, end, c);
    }
    return;
  }

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t c = next.fetch_add(1);
      if (c >= num_chunks) return;
      const std::size_t begin = c * chunk_size;
      const std::size_t end = begin + chunk_size < count ? begin + chunk_size : count;
      fn(begin, end, c);
    }
  };

  std::vector<std::thread> pool;
  const unsigned spawned = n_threads < static_cast<unsigned>(num_chunks)
                               ? n_threads
                               : static_cast<unsigned>(num_chunks);
  pool.reserve(spawned);
  for (unsigned t = 0; t < spawned; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
}

}  // namespace wordgraph::detail
