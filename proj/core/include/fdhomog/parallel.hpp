#pragma once

#include <cstddef>
#include <functional>

namespace fdhomog {

/// Number of worker threads used by parallel_for. Reads FDHOMOG_THREADS
/// once (absent or invalid = hardware concurrency) unless overridden.
std::size_t worker_count();

/// Overrides the worker count for this process; 0 restores the environment default.
void set_worker_count(std::size_t workers);

/// Runs body(i) for i in [0, count). Each index must write only to its own
/// output slot; scheduling order is unspecified. Calls made from inside a
/// running parallel_for execute serially on the calling thread. If bodies
/// throw, the exception from the lowest failing index is rethrown.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace fdhomog
