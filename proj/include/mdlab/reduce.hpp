#pragma once

// Deterministic data-parallel reductions.  Work is cut into fixed-size blocks
// (independent of thread count), each block is summed sequentially, and the
// block partials are combined by a pairwise tree in index order — so results
// are bit-identical whether run on one thread or many.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <thread>
#include <vector>

namespace mdlab {

inline unsigned reduce_thread_count() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1u : hw;
}

// Pairwise tree over partials in index order.
inline double pairwise_combine(std::vector<double> v) {
  if (v.empty()) return 0.0;
  while (v.size() > 1) {
    std::size_t half = (v.size() + 1) / 2;
    for (std::size_t i = 0; i + 1 < v.size(); i += 2) v[i / 2] = v[i] + v[i + 1];
    if (v.size() % 2 == 1) v[half - 1] = v.back();
    v.resize(half);
  }
  return v[0];
}

// Runs fn(b) for b in [0, nblocks), possibly on several threads.  The caller
// must make fn(b) independent across b.
template <class F>
void parallel_for_blocks(std::int64_t nblocks, F&& fn) {
  const unsigned nt = reduce_thread_count();
  if (nt <= 1 || nblocks <= 1) {
    for (std::int64_t b = 0; b < nblocks; ++b) fn(b);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(nt);
  std::atomic<std::int64_t> next{0};
  for (unsigned t = 0; t < nt; ++t)
    pool.emplace_back([&] {
      for (;;) {
        const std::int64_t b = next.fetch_add(1);
        if (b >= nblocks) return;
        fn(b);
      }
    });
  for (auto& th : pool) th.join();
}

// Deterministic sum of term(i) over i in [0, n): fixed blocks of `block`
// consecutive indices, sequential within a block, pairwise tree across blocks.
template <class F>
double det_sum(std::int64_t n, F&& term, std::int64_t block = 8192) {
  if (n <= 0) return 0.0;
  const std::int64_t nblocks = (n + block - 1) / block;
  std::vector<double> partial(static_cast<std::size_t>(nblocks), 0.0);
  parallel_for_blocks(nblocks, [&](std::int64_t b) {
    const std::int64_t lo = b * block;
    const std::int64_t hi = std::min(n, lo + block);
    double s = 0.0;
    for (std::int64_t i = lo; i < hi; ++i) s += term(i);
    partial[static_cast<std::size_t>(b)] = s;
  });
  return pairwise_combine(std::move(partial));
}

}  // namespace mdlab
