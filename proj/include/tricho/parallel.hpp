#pragma once

#include <cstddef>
#include <functional>

namespace tricho {

/// Worker count: hardware concurrency, capped by the TRICHO_THREADS environment variable.
unsigned worker_count();

/// Runs body(i) for i in [0, count). Results must be written to per-index slots;
/// the exception from the lowest failing index is rethrown on the caller's thread.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

} // namespace tricho
