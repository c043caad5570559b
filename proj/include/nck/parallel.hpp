#pragma once

#include <cstddef>
#include <functional>

namespace nck {

/// Worker count: NCK_THREADS if set and positive, else hardware concurrency.
std::size_t thread_count();

/// Runs body(i) for i in [0, n) across thread_count() workers. Each index is
/// processed exactly once; the first exception thrown is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace nck
