#pragma once

#include <cstddef>
#include <functional>

namespace tempo {

/// Worker threads used by grid-operator application. Work is split into a
/// fixed chunk grid independent of the thread count and partial results are
/// combined in chunk order, so results are bitwise identical for any setting.
void set_worker_threads(int n);
int worker_threads();

/// Runs fn(begin, end) over disjoint chunks of [0, n).
void parallel_for_chunks(std::size_t n,
                         const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace tempo
