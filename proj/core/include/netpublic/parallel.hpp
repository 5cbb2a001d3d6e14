#pragma once

#include <cstddef>
#include <functional>

namespace netpublic {

/// Worker count: NETPUBLIC_THREADS if set and positive, otherwise the
/// hardware concurrency (at least 1).
std::size_t thread_count();

/// Runs body(i) for i in [0, count). Each index is executed exactly once;
/// callers write results into per-index slots so output order never depends
/// on scheduling. Exceptions from the body are rethrown on the calling thread.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body,
                  std::size_t threads = 0);

}  // namespace netpublic
