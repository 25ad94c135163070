#include "tempo/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <thread>
#include <vector>

namespace tempo {

namespace {
std::atomic<int> g_threads{1};
constexpr std::size_t kChunks = 64;
}  // namespace

void set_worker_threads(int n) { g_threads = std::max(1, n); }
int worker_threads() { return g_threads; }

void parallel_for_chunks(std::size_t n,
                         const std::function<void(std::size_t, std::size_t)>& fn) {
  if (n == 0) return;
  int nthreads = g_threads;
  std::size_t chunk = (n + kChunks - 1) / kChunks;
  if (nthreads <= 1 || n < 4 * kChunks) {
    fn(0, n);
    return;
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      std::size_t c = next.fetch_add(1);
      std::size_t begin = c * chunk;
      if (begin >= n) break;
      fn(begin, std::min(begin + chunk, n));
    }
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < nthreads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
}

}  // namespace tempo
