#pragma once

#include <cstddef>
#include <functional>

namespace spherelab {

/// Worker count: hardware concurrency, capped by SPHERELAB_THREADS when set.
unsigned thread_cap();

/// Runs body(i) for i in [0, count) on up to `threads` workers. The first
/// exception thrown by any call is rethrown after all workers finish.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body,
                  unsigned threads = thread_cap());

}  // namespace spherelab
