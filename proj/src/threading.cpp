#include "smos/threading.hpp"

#include <algorithm>
#include <thread>
#include <vector>

namespace smos {

void parallel_for(int n, int threads, const std::function<void(int, int)>& chunk_fn) {
  if (n <= 0) return;
  threads = std::min(threads, n);
  if (threads <= 1 || n < 4) {
    chunk_fn(0, n);
    return;
  }
  std::vector<std::thread> workers;
  workers.reserve(threads - 1);
  const int base = n / threads, rem = n % threads;
  int begin = 0;
  for (int t = 0; t < threads; ++t) {
    const int len = base + (t < rem ? 1 : 0);
    const int end = begin + len;
    if (t == threads - 1) {
      chunk_fn(begin, end);
    } else {
      workers.emplace_back(chunk_fn, begin, end);
    }
    begin = end;
  }
  for (auto& w : workers) w.join();
}

}  // namespace smos
