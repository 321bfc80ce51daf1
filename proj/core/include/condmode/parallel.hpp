#pragma once

#include <cstddef>
#include <functional>

namespace condmode {

/// Caps the number of worker threads used by batch operations (experiment
/// drivers). 0 restores the default, the hardware concurrency.
void set_max_threads(unsigned n);

/// Current cap; 0 means auto.
unsigned max_threads();

/// Runs fn(0..n-1) across worker threads. Work items must be independent;
/// results keyed by index stay deterministic regardless of thread count.
/// The first exception thrown by any item is rethrown on the caller.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

} // namespace condmode
