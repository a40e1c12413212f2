#pragma once

#include <functional>

namespace defog {

// Worker count for row-parallel passes. Honors the DEFOG_THREADS environment
// variable (values < 1 are treated as 1); defaults to the hardware thread
// count.
int max_threads();

// Splits [0, count) into contiguous blocks and runs fn(begin, end) on each,
// possibly concurrently. Callers must write disjoint state per index; under
// that contract results are bitwise identical for any worker count.
void parallel_blocks(int count, const std::function<void(int, int)>& fn);

}  // namespace defog
