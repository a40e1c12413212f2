#include "core/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <thread>
#include <vector>

namespace defog {

int max_threads() {
  static const int cached = [] {
    if (const char* env = std::getenv("DEFOG_THREADS")) {
      char* end = nullptr;
      long v = std::strtol(env, &end, 10);
      if (end != env && v >= 1) return static_cast<int>(std::min(v, 256L));
      return 1;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
  }();
  return cached;
}

void parallel_blocks(int count, const std::function<void(int, int)>& fn) {
  if (count <= 0) return;
  const int workers = std::min(max_threads(), count);
  if (workers == 1) {
    fn(0, count);
    return;
  }
  const int chunk = (count + workers - 1) / workers;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers) - 1);
  for (int w = 1; w < workers; ++w) {
    const int begin = w * chunk;
    if (begin >= count) break;
    pool.emplace_back(fn, begin, std::min(count, begin + chunk));
  }
  fn(0, std::min(chunk, count));
  for (auto& t : pool) t.join();
}

}  // namespace defog
