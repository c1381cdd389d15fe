#pragma once

#include <cstddef>
#include <functional>

namespace cluerag {

// Runs fn(i) for every i in [0, n) across up to `threads` workers
// (0 = hardware concurrency). Blocks until all indices are done. The first
// exception thrown by any fn is rethrown on the calling thread. fn must not
// touch shared mutable state unless it synchronizes; writing to slot i of a
// preallocated output is the intended pattern.
void parallel_for(std::size_t n, std::size_t threads,
                  const std::function<void(std::size_t)>& fn);

}  // namespace cluerag
