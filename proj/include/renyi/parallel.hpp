#pragma once

#include <cstddef>
#include <functional>

namespace renyi {

//! Number of workers used when a caller passes threads == 0.
unsigned default_threads();

//! Runs body(i) for i in [0, count) on up to `threads` workers, each owning
//! a contiguous block of indices. Results must be written to per-index
//! slots so that any reduction afterwards is independent of the worker
//! count. If several indices throw, the exception from the smallest index
//! is rethrown.
void parallel_for(std::size_t count,
                  unsigned threads,
                  const std::function<void(std::size_t)>& body);

} // namespace renyi
