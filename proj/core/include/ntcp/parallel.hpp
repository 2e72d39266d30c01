#pragma once

#include <cstddef>
#include <functional>

namespace ntcp {

/// Worker count: NTCP_THREADS if set to a positive integer, otherwise the
/// hardware concurrency (at least 1).
unsigned thread_count();

/// Runs body(i) for i in [0, n) across thread_count() workers. Indices are
/// split into contiguous chunks; the first exception thrown is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace ntcp
