#pragma once

#include <cstddef>
#include <functional>

namespace landscape {

/// Worker count: LANDSCAPE_RATE_THREADS if set and positive, otherwise the
/// hardware concurrency (at least 1).
std::size_t worker_count();

/// Runs body(i) for i in [0, n) across worker_count() threads. Indices are
/// handed out dynamically; the first exception thrown is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace landscape
