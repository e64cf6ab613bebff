#pragma once

#include <functional>

namespace smos {

/// Runs chunk_fn(begin, end) over a partition of [0, n) using up to `threads`
/// worker threads (inline when threads <= 1 or n is small). Chunks are
/// contiguous and disjoint; callers must not reduce across chunk boundaries,
/// which keeps results bitwise independent of the thread count.
void parallel_for(int n, int threads, const std::function<void(int, int)>& chunk_fn);

}  // namespace smos
