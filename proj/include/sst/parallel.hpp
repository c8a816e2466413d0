#pragma once

#include <cstddef>
#include <functional>

namespace sst {

/// Cap the number of worker threads used by parallel loops (0 = hardware default).
void set_max_threads(int n);
int max_threads();

/// Run fn(i) for i in [0, n). Work is split into contiguous index ranges, one per
/// worker, so every fn(i) sees a fixed iteration order within its range and results
/// do not depend on the thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

} // namespace sst
