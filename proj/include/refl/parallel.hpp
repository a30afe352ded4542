#pragma once

#include <thread>
#include <vector>

#include "refl/numtheory.hpp"

namespace refl {

void set_thread_count(i64 n);
i64 thread_count();

/// Splits [0, n) into per-thread chunks, runs `chunk(lo, hi)` concurrently and
/// merges the partial results in chunk order, so results are deterministic for
/// any thread count (all arithmetic is exact).
template <typename T, typename ChunkFn, typename MergeFn>
T parallel_chunks(i64 n, T init, ChunkFn chunk, MergeFn merge) {
  i64 nt = std::min<i64>(thread_count(), std::max<i64>(n, 1));
  if (nt <= 1 || n < 2 * nt) {
    T local = chunk(0, n);
    merge(init, local);
    return init;
  }
  std::vector<T> partial(nt);
  std::vector<std::thread> workers;
  i64 per = (n + nt - 1) / nt;
  for (i64 t = 0; t < nt; ++t) {
    i64 lo = t * per, hi = std::min(n, (t + 1) * per);
    workers.emplace_back([&, t, lo, hi]() { partial[t] = chunk(lo, hi); });
  }
  for (auto& w : workers) w.join();
  for (i64 t = 0; t < nt; ++t) merge(init, partial[t]);
  return init;
}

}  // namespace refl
