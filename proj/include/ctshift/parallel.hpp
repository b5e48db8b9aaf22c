#pragma once

#include <cstddef>
#include <functional>

namespace ctshift {

// Runs fn(i) for i in [0, n) split into contiguous chunks across `threads`
// workers. Each index writes only its own outputs, so results do not depend
// on the thread count. threads <= 1 runs inline.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn);

}  // namespace ctshift
