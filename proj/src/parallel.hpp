#pragma once

#include <cstddef>
#include <functional>

namespace eeclass {

// Runs chunk_fn over contiguous sub-ranges covering [0, n). Each index is
// visited exactly once; workers never share an index, so any function that
// writes only to per-index slots produces identical output for every thread
// count. Nested calls from inside a worker run serially.
void parallel_for(std::size_t n,
                  const std::function<void(std::size_t begin, std::size_t end)>& chunk_fn);

}  // namespace eeclass
