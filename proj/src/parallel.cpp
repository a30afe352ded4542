#include "refl/parallel.hpp"

#include <atomic>

namespace refl {

namespace {
std::atomic<i64> g_threads{0};  // 0 = use hardware concurrency
}

void set_thread_count(i64 n) { g_threads.store(n > 0 ? n : 0); }

i64 thread_count() {
  i64 n = g_threads.load();
  if (n > 0) return n;
  unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<i64>(hc);
}

}  // namespace refl
