#pragma once

#include <cstddef>
#include <functional>

namespace tsep {

/// Worker count: TSEP_THREADS when set and positive, else all hardware threads.
unsigned worker_count();

/// Runs body(begin, end) over contiguous chunks of [0, count). Chunk bounds
/// depend only on count and the worker count, and callers write results by
/// index, so assembled outputs are deterministic.
void parallel_for(std::size_t count, const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace tsep
